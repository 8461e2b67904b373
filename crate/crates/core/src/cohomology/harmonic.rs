//! Three independent decisions of whether every class in `H^*` has a
//! representative `η` with `dη = 0` and `δη = 0`.
//!
//! The feasibility conditions are affine in the representative and linear
//! in the class, so it suffices to check a basis of each `H^k`: if `ω_i + dα_i`
//! works for every basis class, `Σ c_i (ω_i + dα_i)` works for `Σ c_i ω_i`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::DeRham;
use crate::algebra::{LinearSolver, Matrix, Rational};
use crate::error::Result;
use crate::ops::OperatorSet;
use crate::spectral::{is_isomorphism, Bidegree, SpectralSequence};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Oracle {
    pub name: &'static str,
    pub harmonic: bool,
    /// Degree `k` of an infeasible class, or `q` of a failing `τ_2` map.
    pub witness_degree: Option<usize>,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicVerdict {
    pub direct: Oracle,
    pub hodge_lepage: Oracle,
    pub page_two: Oracle,
    /// The model is closed-type.
    pub applicable: bool,
    pub nilpotent: bool,
}

impl HarmonicVerdict {
    pub fn oracles(&self) -> [&Oracle; 3] {
        [&self.direct, &self.hodge_lepage, &self.page_two]
    }

    pub fn agree(&self) -> bool {
        self.direct.harmonic == self.hodge_lepage.harmonic
            && self.hodge_lepage.harmonic == self.page_two.harmonic
    }

    /// Agreement is a claim only on closed-type nilpotent models.
    pub fn agreement_required(&self) -> bool {
        self.applicable && self.nilpotent
    }

    pub fn is_harmonic(&self) -> Option<bool> {
        self.agree().then_some(self.direct.harmonic)
    }
}

/// Finds the first basis class `ω` of some `H^k` for which
/// `G(ω + dα) = 0` has no solution `α`, where `G` is the degree-`k` block
/// returned by `condition`.
fn feasibility_oracle(
    name: &'static str,
    ops: &OperatorSet,
    de_rham: &DeRham,
    condition: impl Fn(usize) -> Result<Matrix>,
) -> Result<Oracle> {
    let m = ops.model().dim();
    for k in 0..=m {
        let g = condition(k)?;
        let gd = if k == 0 {
            Matrix::zeros(g.rows(), 0)
        } else {
            g.mul(&ops.d().block(k as isize - 1))
        };
        let solver = LinearSolver::new(&gd);
        for class in de_rham.basis(k) {
            let rhs: Vec<Rational> = g
                .mul_vec(&class.representative.to_vector())
                .into_iter()
                .map(|x| -x)
                .collect();
            let feasible = if k == 0 {
                rhs.iter().all(Zero::is_zero)
            } else {
                solver.is_consistent(&rhs)
            };
            if !feasible {
                return Ok(Oracle {
                    name,
                    harmonic: false,
                    witness_degree: Some(k),
                    witness: Some(format!(
                        "class of {} in H^{k} has no such representative",
                        class.representative
                    )),
                });
            }
        }
    }
    Ok(Oracle {
        name,
        harmonic: true,
        witness_degree: None,
        witness: None,
    })
}

pub fn harmonic_verdict(
    ops: &OperatorSet,
    de_rham: &DeRham,
    ss: &SpectralSequence<'_>,
) -> Result<HarmonicVerdict> {
    let model = ops.model();
    let m = model.dim();
    let n = model.half_dim();

    let direct = feasibility_oracle("direct: δ(ω + dα) = 0", ops, de_rham, |k| {
        Ok(ops.delta_map().block(k as isize))
    })?;

    let hodge_lepage = feasibility_oracle(
        "Hodge–Lepage: every component of ω + dα closed",
        ops,
        de_rham,
        |k| {
            let mut g = Matrix::zeros(0, crate::algebra::graded_dim(m, k as isize));
            for i in 0..=k / 2 {
                let block = ops
                    .d()
                    .block((k - 2 * i) as isize)
                    .mul(&ops.hodge_projection(k, i)?);
                g = g.vstack(&block);
            }
            Ok(g)
        },
    )?;

    let mut page_two = Oracle {
        name: "Theorem 5: τ_2^{n-q}: E_2^{0,q} → E_2^{n-q,n} isomorphic",
        harmonic: true,
        witness_degree: None,
        witness: None,
    };
    for q in 0..=n {
        let tau = ss.tau_on_page(2, n - q, 0, q as isize)?;
        if !is_isomorphism(&tau) {
            page_two.harmonic = false;
            page_two.witness_degree = Some(q);
            page_two.witness = Some(format!(
                "q = {q}: {}×{} matrix of rank {}",
                tau.rows(),
                tau.cols(),
                tau.rank()
            ));
            break;
        }
    }

    Ok(HarmonicVerdict {
        direct,
        hodge_lepage,
        page_two,
        applicable: model.closedness_profile().is_closed_type(),
        nilpotent: model.is_nilpotent(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    /// `τ_2^{n-p-q}: E_2^{p,q} → E_2^{n-q,n-p}` for `0 ≤ p ≤ q`, `p + q ≤ n`.
    pub maps: Vec<(Bidegree, bool)>,
    /// Pairs `(p,q)`, `(n-q,n-p)` whose dimensions differ.
    pub asymmetries: Vec<(Bidegree, Bidegree)>,
    pub dims: BTreeMap<Bidegree, usize>,
}

impl SymmetryReport {
    pub fn maps_are_isomorphisms(&self) -> bool {
        self.maps.iter().all(|(_, iso)| *iso)
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetries.is_empty()
    }
}

/// Mirror symmetry of `E_2` about `p + q = n`.
pub fn symmetry_check(ss: &SpectralSequence<'_>) -> Result<SymmetryReport> {
    let n = ss.ops().model().half_dim() as isize;
    let e2 = ss.page(2).expect("page 2 is always computed");
    let mut maps = Vec::new();
    let mut asymmetries = Vec::new();
    for p in 0..=n {
        for q in p..=n {
            let mirror = (n - q, n - p);
            if p + q <= n {
                let tau = ss.tau_on_page(2, (n - p - q) as usize, p, q)?;
                maps.push(((p, q), is_isomorphism(&tau)));
            }
            if (p, q) < mirror && e2.dim(p, q) != e2.dim(mirror.0, mirror.1) {
                asymmetries.push(((p, q), mirror));
            }
        }
    }
    Ok(SymmetryReport {
        maps,
        asymmetries,
        dims: e2.dims(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin;

    fn verdict(name: &str) -> HarmonicVerdict {
        let model = builtin(name).unwrap();
        let ops = OperatorSet::new(&model).unwrap();
        let h = DeRham::new(&model).unwrap();
        let ss = SpectralSequence::new(&ops).unwrap();
        harmonic_verdict(&ops, &h, &ss).unwrap()
    }

    #[test]
    fn tori_are_harmonic() {
        for name in ["t2", "t4", "t6"] {
            let v = verdict(name);
            assert!(v.applicable && v.agree(), "{name}: {v:?}");
            assert_eq!(v.is_harmonic(), Some(true), "{name}");
        }
    }

    #[test]
    fn kodaira_thurston_is_not() {
        let v = verdict("kt4");
        assert!(v.applicable && v.nilpotent);
        assert!(v.agree(), "{v:?}");
        assert_eq!(v.is_harmonic(), Some(false));
        assert!(v.page_two.witness_degree.is_some());
    }

    #[test]
    fn solvable_is_not_applicable() {
        assert!(!verdict("solv2").applicable);
    }

    #[test]
    fn symmetry() {
        for name in ["t2", "t4"] {
            let model = builtin(name).unwrap();
            let ops = OperatorSet::new(&model).unwrap();
            let ss = SpectralSequence::new(&ops).unwrap();
            let report = symmetry_check(&ss).unwrap();
            assert!(
                report.is_symmetric() && report.maps_are_isomorphisms(),
                "{name}"
            );
        }
    }
}
