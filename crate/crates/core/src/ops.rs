//! The symplectic operator calculus on a model: the algebra isomorphism
//! `Γ`, the Poisson bivector `P`, `⊤ = · ∧ Ω`, `⊥ = P ⌟ ·`, the
//! codifferential `δ = [⊥, d]`, the symplectic star, and the Hodge–Lepage
//! expansion into effective components.
//!
//! Every operator is assembled as an exact matrix per degree.

use num_traits::{One, Zero};

use crate::algebra::{
    contract_with, graded_dim, monomials, ContractionConvention, Form, GradedMap, LinearSolver,
    Matrix, MultiIndex, Multivector, Rational, Subspace,
};
use crate::error::{Error, Result};
use crate::model::Model;

/// The unique expansion `ω = Σ ⊤^i ω_i` with effective `ω_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeLepage {
    /// `components[i]` has degree `k - 2i`; the list stops at `i = ⌊k/2⌋`.
    /// Components with `i < k - n` are zero: `⊤^i` annihilates effective
    /// forms of degree `k - 2i` there.
    pub components: Vec<Form>,
}

/// One operator identity checked as a matrix equation on every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    pub failing_degree: Option<usize>,
}

#[derive(Clone, Debug)]
struct HodgeSolver {
    /// `(i, basis of Λ_ε^{k-2i})` in column order.
    parts: Vec<(usize, Vec<Vec<Rational>>)>,
    solver: LinearSolver,
}

#[derive(Clone, Debug)]
pub struct OperatorSet {
    model: Model,
    convention: ContractionConvention,
    gamma1: Vec<Form>,
    poisson: Multivector,
    d: GradedMap,
    top: GradedMap,
    bot: GradedMap,
    delta: GradedMap,
    top_powers: Vec<GradedMap>,
    star: Vec<Matrix>,
    effective: Vec<Subspace>,
    hodge: Vec<HodgeSolver>,
}

impl OperatorSet {
    pub fn new(model: &Model) -> Result<Self> {
        Self::with_convention(model, ContractionConvention::default())
    }

    pub fn with_convention(model: &Model, convention: ContractionConvention) -> Result<Self> {
        let m = model.dim();
        let n = model.half_dim();
        let omega = model.omega();

        let gamma1: Vec<Form> = (1..=m).map(|i| omega.interior(i)).collect();
        let gamma1_matrix =
            Matrix::from_columns(m, &gamma1.iter().map(Form::to_vector).collect::<Vec<_>>());
        if gamma1_matrix.rank() != m {
            return Err(Error::Invariant(format!(
                "Γ₁ is singular for {} although Ω is nondegenerate",
                model.name()
            )));
        }

        // Γ on bivectors: ∂_i ∧ ∂_j ↦ Γ(∂_i) ∧ Γ(∂_j); solve Γ(P) = Ω.
        let gamma2_cols: Vec<Vec<Rational>> = monomials(m, 2)
            .iter()
            .map(|mi| {
                let ix: Vec<usize> = mi.indices().collect();
                gamma1[ix[0] - 1]
                    .wedge(&gamma1[ix[1] - 1])
                    .expect("same generator count")
                    .to_vector()
            })
            .collect();
        let gamma2 = Matrix::from_columns(graded_dim(m, 2), &gamma2_cols);
        let p_coords = LinearSolver::new(&gamma2)
            .solve(&omega.to_vector())
            .ok_or_else(|| Error::Invariant("Γ(P) = Ω has no solution".into()))?;
        let poisson = Multivector::from_vector(m, 2, &p_coords);

        let d = model.differential_map();
        let top = GradedMap::from_fn(m, 2, |f| f.wedge(omega).expect("same generator count"));
        let bot = GradedMap::from_fn(m, -2, |f| {
            contract_with(&poisson, f, convention).expect("same generator count")
        });
        let delta = bot.compose(&d).sub(&d.compose(&bot));
        let top_powers: Vec<GradedMap> = (0..=n + 1).map(|i| top.power(i)).collect();
        let effective: Vec<Subspace> = (0..=m)
            .map(|k| bot.kernel_image(k).map(|(ker, _)| ker))
            .collect::<Result<_>>()?;

        let mut ops = OperatorSet {
            model: model.clone(),
            convention,
            gamma1,
            poisson,
            d,
            top,
            bot,
            delta,
            top_powers,
            star: Vec::new(),
            effective,
            hodge: Vec::new(),
        };
        if ops.gamma(&ops.poisson) != *omega {
            return Err(Error::Invariant("Γ(P) does not reproduce Ω".into()));
        }
        ops.hodge = (0..=m)
            .map(|k| ops.build_hodge_solver(k))
            .collect::<Result<_>>()?;
        ops.star = ops.build_star()?;
        Ok(ops)
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn convention(&self) -> ContractionConvention {
        self.convention
    }

    pub fn poisson(&self) -> &Multivector {
        &self.poisson
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    pub fn top_map(&self) -> &GradedMap {
        &self.top
    }

    pub fn bot_map(&self) -> &GradedMap {
        &self.bot
    }

    pub fn delta_map(&self) -> &GradedMap {
        &self.delta
    }

    /// `⊤^i`; zero for `i > n`.
    pub fn top_power(&self, i: usize) -> GradedMap {
        match self.top_powers.get(i) {
            Some(map) => map.clone(),
            None => GradedMap::zero(self.model.dim(), 2 * i as isize),
        }
    }

    /// `Γ` extended as an algebra map from multivectors to forms.
    pub fn gamma(&self, v: &Multivector) -> Form {
        let m = self.model.dim();
        let mut out = Form::zero(m, v.degree());
        for (mi, c) in v.terms() {
            let image = mi.indices().fold(Form::one(m), |acc, i| {
                acc.wedge(&self.gamma1[i - 1])
                    .expect("same generator count")
            });
            out = &out + &image.scale(c);
        }
        out
    }

    pub fn top(&self, omega: &Form) -> Form {
        self.top.apply(omega)
    }

    pub fn bot(&self, omega: &Form) -> Form {
        self.bot.apply(omega)
    }

    pub fn delta(&self, omega: &Form) -> Form {
        self.delta.apply(omega)
    }

    /// `Λ_ε^k = ker ⊥` in degree `k`.
    pub fn effective_basis(&self, k: usize) -> &Subspace {
        &self.effective[k]
    }

    fn build_hodge_solver(&self, k: usize) -> Result<HodgeSolver> {
        let m = self.model.dim();
        let n = self.model.half_dim();
        let mut parts = Vec::new();
        let mut columns = Vec::new();
        // ⊤^i annihilates Λ_ε^{k-2i} when i < k - n; those components are zero.
        for i in k.saturating_sub(n)..=k / 2 {
            let basis = self.effective[k - 2 * i].basis().to_vec();
            let lift = self.top_power(i);
            for v in &basis {
                columns.push(lift.block_ref(k - 2 * i).mul_vec(v));
            }
            parts.push((i, basis));
        }
        let rows = graded_dim(m, k as isize);
        let matrix = Matrix::from_columns(rows, &columns);
        let solver = LinearSolver::new(&matrix);
        if columns.len() != rows || !solver.has_full_column_rank() {
            return Err(Error::Invariant(format!(
                "Hodge–Lepage system in degree {k} is not square and invertible \
                 ({} columns, rank {}, dim Λ^k = {rows})",
                columns.len(),
                solver.rank()
            )));
        }
        Ok(HodgeSolver { parts, solver })
    }

    pub fn hodge_lepage(&self, omega: &Form) -> Result<HodgeLepage> {
        let m = self.model.dim();
        let k = omega.degree();
        let solver = self
            .hodge
            .get(k)
            .ok_or_else(|| Error::Dimension(format!("no degree {k} in this model")))?;
        let coords = solver
            .solver
            .solve(&omega.to_vector())
            .ok_or_else(|| Error::Invariant(format!("Hodge–Lepage solve failed for {omega}")))?;
        let mut components: Vec<Form> = (0..=k / 2).map(|i| Form::zero(m, k - 2 * i)).collect();
        let mut offset = 0;
        for (i, basis) in &solver.parts {
            let degree = k - 2 * i;
            let mut v = vec![Rational::zero(); graded_dim(m, degree as isize)];
            for (c, b) in coords[offset..offset + basis.len()].iter().zip(basis) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            offset += basis.len();
            components[*i] = Form::from_vector(m, degree, &v);
        }
        Ok(HodgeLepage { components })
    }

    /// Matrix of `ω ↦ ω_i` from `Λ^k` to `Λ_ε^{k-2i}`.
    pub fn hodge_projection(&self, k: usize, i: usize) -> Result<Matrix> {
        let m = self.model.dim();
        let rows = if 2 * i <= k {
            graded_dim(m, (k - 2 * i) as isize)
        } else {
            0
        };
        let columns: Vec<Vec<Rational>> = monomials(m, k)
            .iter()
            .map(|mi| {
                let hl = self.hodge_lepage(&Form::monomial(m, *mi, Rational::one()))?;
                Ok(hl
                    .components
                    .get(i)
                    .map(Form::to_vector)
                    .unwrap_or_default())
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(rows, &columns))
    }

    fn volume_coefficient(&self, f: &Form) -> Rational {
        let m = self.model.dim();
        let top: Vec<usize> = (1..=m).collect();
        f.coefficient(MultiIndex::new(&top).expect("distinct indices"))
    }

    /// Per-degree star matrices. For `k ≤ n` the star is solved from
    /// `η ∧ ∗ω = ⊥^k(η ∧ ω) Ω^n` over a basis of `η`; for `k > n` that
    /// pairing vanishes identically, so the star is the inverse of the star
    /// on degree `2n - k`.
    fn build_star(&self) -> Result<Vec<Matrix>> {
        let m = self.model.dim();
        let n = self.model.half_dim();
        let vol_omega = self.volume_coefficient(&self.model.omega().pow(n));
        let mut blocks: Vec<Option<Matrix>> = vec![None; m + 1];
        for (k, slot) in blocks.iter_mut().enumerate().take(n + 1) {
            let source = monomials(m, k);
            let target = monomials(m, m - k);
            let bot_k = self.bot.power(k);
            let pairing_row = bot_k.block_ref(2 * k);
            let mut w = Matrix::zeros(source.len(), target.len());
            for (a, eta) in source.iter().enumerate() {
                for (b, mu) in target.iter().enumerate() {
                    if let Some((_, negative)) = eta.wedge(*mu) {
                        w[(a, b)] = if negative {
                            -Rational::one()
                        } else {
                            Rational::one()
                        };
                    }
                }
            }
            let solver = LinearSolver::new(&w);
            if !solver.has_full_column_rank() {
                return Err(Error::DegenerateStar { degree: k });
            }
            let mut columns = Vec::with_capacity(source.len());
            for omega in source {
                let rhs: Vec<Rational> = source
                    .iter()
                    .map(|eta| {
                        let product = Form::monomial(m, *eta, Rational::one())
                            .wedge(&Form::monomial(m, *omega, Rational::one()))
                            .expect("same generator count");
                        let scalar = pairing_row.mul_vec(&product.to_vector());
                        &scalar[0] * &vol_omega
                    })
                    .collect();
                columns.push(
                    solver
                        .solve(&rhs)
                        .ok_or(Error::DegenerateStar { degree: k })?,
                );
            }
            *slot = Some(Matrix::from_columns(target.len(), &columns));
        }
        for k in n + 1..=m {
            let inverse = LinearSolver::new(blocks[m - k].as_ref().expect("filled above"))
                .inverse()
                .ok_or(Error::DegenerateStar { degree: m - k })?;
            blocks[k] = Some(inverse);
        }
        Ok(blocks
            .into_iter()
            .map(|b| b.expect("every degree filled"))
            .collect())
    }

    /// The star block `Λ^k → Λ^{2n-k}`.
    pub fn star_block(&self, k: usize) -> &Matrix {
        &self.star[k]
    }

    pub fn star(&self, omega: &Form) -> Form {
        let m = self.model.dim();
        let k = omega.degree();
        Form::from_vector(m, m - k, &self.star[k].mul_vec(&omega.to_vector()))
    }

    /// `(-1)^{k+1} ∗ d ∗` on degree `k`, for `1 ≤ k ≤ n`.
    pub fn delta_via_star(&self, k: usize) -> Option<Matrix> {
        let m = self.model.dim();
        let n = self.model.half_dim();
        if k == 0 || k > n {
            return None;
        }
        let block = self.star[m - k + 1]
            .mul(self.d.block_ref(m - k))
            .mul(&self.star[k]);
        Some(if k % 2 == 1 {
            block
        } else {
            block.scale(&-Rational::one())
        })
    }

    /// Compares the commutator `δ = ⊥d - d⊥` with `(-1)^{k+1} ∗ d ∗` on
    /// every degree `1 ≤ k ≤ n`.
    pub fn check_delta_routes(&self) -> Result<()> {
        let m = self.model.dim();
        for k in 1..=self.model.half_dim() {
            let via_star = self.delta_via_star(k).expect("k in range");
            let commutator = self.delta.block_ref(k);
            if &via_star != commutator {
                let col = (0..commutator.cols())
                    .find(|&j| via_star.column(j) != commutator.column(j))
                    .expect("matrices differ in some column");
                let witness = Form::monomial(m, monomials(m, k)[col], Rational::one());
                return Err(Error::Invariant(format!(
                    "δ routes disagree in degree {k} on {witness}: [⊥,d] gives {}, ∗d∗ gives {}",
                    Form::from_vector(m, k - 1, &commutator.column(col)),
                    Form::from_vector(m, k - 1, &via_star.column(col)),
                )));
            }
        }
        Ok(())
    }

    /// First degree where `∗∗ ≠ id`, if any.
    pub fn star_involution_failure(&self) -> Option<usize> {
        let m = self.model.dim();
        (0..=m).find(|&k| {
            self.star[m - k].mul(&self.star[k]) != Matrix::identity(graded_dim(m, k as isize))
        })
    }

    /// The graded commutation relations of the calculus, each as an exact
    /// matrix identity: `dδ + δd = 0`, `⊤d - d⊤ = 0`, `⊤δ - δ⊤ = d`,
    /// `⊥δ - δ⊥ = 0`, plus `δ² = 0`.
    pub fn operator_identities(&self) -> Vec<IdentityCheck> {
        let (d, delta, top, bot) = (&self.d, &self.delta, &self.top, &self.bot);
        let m = self.model.dim();
        let check = |name, lhs: GradedMap, rhs: GradedMap| {
            let failing_degree = lhs.first_difference(&rhs);
            IdentityCheck {
                name,
                holds: failing_degree.is_none(),
                failing_degree,
            }
        };
        vec![
            check(
                "d∘δ + δ∘d = 0",
                d.compose(delta).add(&delta.compose(d)),
                GradedMap::zero(m, 0),
            ),
            check(
                "⊤∘d - d∘⊤ = 0",
                top.compose(d).sub(&d.compose(top)),
                GradedMap::zero(m, 3),
            ),
            check(
                "⊤∘δ - δ∘⊤ = d",
                top.compose(delta).sub(&delta.compose(top)),
                d.clone(),
            ),
            check(
                "⊥∘δ - δ∘⊥ = 0",
                bot.compose(delta).sub(&delta.compose(bot)),
                GradedMap::zero(m, -3),
            ),
            check("δ∘δ = 0", delta.compose(delta), GradedMap::zero(m, -2)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::model::{builtin, Model, BUILTIN_NAMES};

    fn e(m: usize, ix: &[usize]) -> Form {
        Form::from_indices(m, ix, rat(1))
    }

    fn dv(m: usize, ix: &[usize]) -> Multivector {
        Multivector::from_indices(m, ix, rat(1))
    }

    #[test]
    fn poisson_bivectors_of_tori() {
        let t2 = OperatorSet::new(&builtin("t2").unwrap()).unwrap();
        assert_eq!(t2.poisson(), &dv(2, &[1, 2]));
        let t4 = OperatorSet::new(&builtin("t4").unwrap()).unwrap();
        assert_eq!(t4.poisson(), &(&dv(4, &[1, 2]) + &dv(4, &[3, 4])));
        for name in BUILTIN_NAMES {
            let ops = OperatorSet::new(&builtin(name).unwrap()).unwrap();
            assert_eq!(&ops.gamma(ops.poisson()), ops.model().omega(), "{name}");
        }
    }

    #[test]
    fn top_and_bot_examples() {
        let t4 = OperatorSet::new(&builtin("t4").unwrap()).unwrap();
        let omega = t4.model().omega().clone();
        assert_eq!(t4.top(&Form::one(4)), omega);
        assert_eq!(t4.bot(&omega), Form::scalar(4, rat(2)));
        assert!(t4.bot(&e(4, &[1])).is_zero());
    }

    #[test]
    fn effective_dimensions_on_t4() {
        let t4 = OperatorSet::new(&builtin("t4").unwrap()).unwrap();
        assert_eq!(t4.effective_basis(0).dim(), 1);
        assert_eq!(t4.effective_basis(2).dim(), 5);
        assert_eq!(t4.effective_basis(3).dim(), 0);
    }

    #[test]
    fn hodge_lepage_examples() {
        let t4 = OperatorSet::new(&builtin("t4").unwrap()).unwrap();
        let omega = t4.model().omega().clone();
        let hl = t4.hodge_lepage(&omega).unwrap();
        assert!(hl.components[0].is_zero());
        assert_eq!(hl.components[1], Form::one(4));

        let effective = &e(4, &[1, 3]) + &e(4, &[2, 4]);
        let hl = t4.hodge_lepage(&effective).unwrap();
        assert_eq!(hl.components, vec![effective, Form::zero(4, 0)]);
    }

    #[test]
    fn hodge_lepage_of_e12_with_rotated_omega() {
        // Ω = e^{13} + e^{24}; brute-force oracle: ω_1 is the scalar with
        // ⊥(e^{12} - ω_1 Ω) = 0, then ω_0 = e^{12} - ω_1 Ω.
        let names: Vec<String> = (1..=4).map(|i| format!("e{i}")).collect();
        let model = Model::new(
            "rot",
            names,
            vec![Form::zero(4, 2); 4],
            &e(4, &[1, 3]) + &e(4, &[2, 4]),
        )
        .unwrap();
        let ops = OperatorSet::new(&model).unwrap();
        let target = e(4, &[1, 2]);
        assert!(
            ops.bot(&target).is_zero(),
            "e^{{12}} is effective for this Ω"
        );
        let hl = ops.hodge_lepage(&target).unwrap();
        assert_eq!(hl.components[0], target);
        assert!(hl.components[1].is_zero());
        let rebuilt = &hl.components[0] + &ops.top(&hl.components[1]);
        assert_eq!(rebuilt, target);

        let mixed = &e(4, &[1, 3]) + &e(4, &[1, 2]);
        let hl = ops.hodge_lepage(&mixed).unwrap();
        // ⊥ on Ω is 2, ⊥(e^{13}) = 1, so ω_1 = 1/2
        assert_eq!(
            hl.components[1],
            Form::scalar(4, crate::algebra::ratio(1, 2))
        );
        assert!(ops.bot(&hl.components[0]).is_zero());
        assert_eq!(&hl.components[0] + &ops.top(&hl.components[1]), mixed);
    }

    #[test]
    fn star_examples() {
        let t2 = OperatorSet::new(&builtin("t2").unwrap()).unwrap();
        assert_eq!(t2.star(&Form::one(2)), e(2, &[1, 2]));
        // e^1 ∧ ∗e^1 = 0 and e^2 ∧ ∗e^1 = ⊥(e^{21}) Ω = -e^{12} force ∗e^1 = e^1
        assert_eq!(t2.star(&e(2, &[1])), e(2, &[1]));
        assert_eq!(t2.star(&e(2, &[2])), e(2, &[2]));
        for name in ["t4", "kt4"] {
            let ops = OperatorSet::new(&builtin(name).unwrap()).unwrap();
            let n = ops.model().half_dim();
            assert_eq!(ops.star(&Form::one(4)), ops.model().omega().pow(n));
        }
    }

    #[test]
    fn delta_on_kt4_matches_expansion() {
        let kt = builtin("kt4").unwrap();
        let ops = OperatorSet::new(&kt).unwrap();
        let x = e(4, &[1, 2]);
        let expected = &ops.bot(&kt.differential(&x)) - &kt.differential(&ops.bot(&x));
        assert_eq!(ops.delta(&x), expected);
        let t4 = OperatorSet::new(&builtin("t4").unwrap()).unwrap();
        assert!(t4.delta_map().is_zero());
    }

    #[test]
    fn eq1_identities_hold_on_every_builtin() {
        for name in BUILTIN_NAMES {
            let ops = OperatorSet::new(&builtin(name).unwrap()).unwrap();
            for check in ops.operator_identities() {
                assert!(
                    check.holds,
                    "{name}: {} fails in degree {:?}",
                    check.name, check.failing_degree
                );
            }
        }
    }

    #[test]
    fn contraction_convention_is_calibrated() {
        // The nested V ⌟ (W ⌟ ω) convention flips the sign of ⊥ on bivectors
        // and breaks [⊤, δ] = d as soon as d ≠ 0.
        let kt = builtin("kt4").unwrap();
        let flipped =
            OperatorSet::with_convention(&kt, ContractionConvention::LastFactorFirst).unwrap();
        let failed: Vec<_> = flipped
            .operator_identities()
            .into_iter()
            .filter(|c| !c.holds)
            .map(|c| c.name)
            .collect();
        assert_eq!(failed, ["⊤∘δ - δ∘⊤ = d"]);
        assert_eq!(flipped.bot(kt.omega()), Form::scalar(4, rat(-2)));
        let ops = OperatorSet::new(&kt).unwrap();
        assert_eq!(ops.convention(), ContractionConvention::FirstFactorFirst);
        assert_eq!(ops.bot(kt.omega()), Form::scalar(4, rat(2)));
    }

    #[test]
    fn star_is_a_multiple_of_a_lefschetz_power() {
        // The pairing ⊥^k(η ∧ ω) only sees the Ω^k component of η ∧ ω, so
        // the star on Λ^k (k ≤ n) is k!·n!/(n-k)! · ⊤^{n-k}.
        for name in ["t4", "kt4", "t6"] {
            let ops = OperatorSet::new(&builtin(name).unwrap()).unwrap();
            let n = ops.model().half_dim();
            for k in 0..=n {
                let factorial = |x: usize| (1..=x as i64).product::<i64>();
                let a = rat(factorial(k) * factorial(n) / factorial(n - k));
                let expected = ops.top_power(n - k).block_ref(k).scale(&a);
                assert_eq!(ops.star_block(k), &expected, "{name} k={k}");
            }
        }
    }

    #[test]
    fn star_routes_on_n_equal_one() {
        for name in ["t2", "solv2"] {
            let ops = OperatorSet::new(&builtin(name).unwrap()).unwrap();
            assert!(ops.check_delta_routes().is_ok());
            assert_eq!(ops.star_involution_failure(), None);
        }
    }

    #[test]
    fn star_routes_disagree_once_n_exceeds_one() {
        let ops = OperatorSet::new(&builtin("kt4").unwrap()).unwrap();
        let err = ops.check_delta_routes().unwrap_err();
        assert!(err.to_string().contains("degree 2"), "{err}");
        assert_eq!(ops.star_involution_failure(), Some(2));
    }
}
