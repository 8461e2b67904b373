//! Symplectic Chevalley–Eilenberg models: an exterior algebra on `2n`
//! degree-1 generators, a derivation differential fixed by its values on
//! the generators, and a closed nondegenerate 2-form `Ω`.

mod builtin;
mod json;

use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{graded_dim, rat, Form, GradedMap, Rational, Subspace, MAX_GENERATORS};
use crate::error::{Error, Result};

pub use builtin::{builtin, BUILTIN_NAMES};
pub use json::{parse_model, to_json};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    name: String,
    generators: Vec<String>,
    d_gen: Vec<Form>,
    omega: Form,
}

/// Outcome of one validation check, with a witness form on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<Form>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    pub checks: Vec<Check>,
}

impl Diagnostics {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.checks {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            match (&c.witness, c.passed) {
                (_, true) => write!(f, "{}: ok", c.name)?,
                (Some(w), false) => write!(f, "{}: FAILED (witness {w})", c.name)?,
                (None, false) => write!(f, "{}: FAILED", c.name)?,
            }
        }
        Ok(())
    }
}

/// Which powers of `Ω` are cohomologically nontrivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosednessProfile {
    /// First `t` with `[Ω^t] = 0`; `None` when every `[Ω^t]`, `t ≤ n`, survives.
    pub t_min: Option<usize>,
    /// `[Ω^t] ≠ 0` for `t = 1..=n`.
    pub classes_nonzero: Vec<bool>,
}

impl ClosednessProfile {
    /// All `[Ω^t] ≠ 0` for `t ≤ n`: the algebraic stand-in for a closed manifold.
    pub fn is_closed_type(&self) -> bool {
        self.t_min.is_none()
    }
}

impl Model {
    /// Builds and validates a model. `d_gen[i]` is `d e^{i+1}`.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<String>,
        d_gen: Vec<Form>,
        omega: Form,
    ) -> Result<Self> {
        let model = Self::new_unvalidated(name, generators, d_gen, omega)?;
        let diagnostics = model.validate();
        if !diagnostics.is_valid() {
            return Err(Error::InvalidModel(diagnostics.to_string()));
        }
        Ok(model)
    }

    /// Builds a model checking only shapes (even generator count, degrees);
    /// the symplectic conditions are left to [`Model::validate`].
    pub fn new_unvalidated(
        name: impl Into<String>,
        generators: Vec<String>,
        d_gen: Vec<Form>,
        omega: Form,
    ) -> Result<Self> {
        let m = generators.len();
        if m == 0 || !m.is_multiple_of(2) {
            return Err(Error::InvalidModel(format!(
                "need a positive even number of generators, got {m}"
            )));
        }
        if m > MAX_GENERATORS {
            return Err(Error::InvalidModel(format!(
                "at most {MAX_GENERATORS} generators supported, got {m}"
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::InvalidModel(format!(
                    "generator `{g}` declared twice"
                )));
            }
        }
        if d_gen.len() != m {
            return Err(Error::Dimension(format!(
                "{} differential values for {m} generators",
                d_gen.len()
            )));
        }
        for f in d_gen.iter().chain(std::iter::once(&omega)) {
            if f.generators() != m {
                return Err(Error::Dimension(format!(
                    "form on {} generators in a model with {m}",
                    f.generators()
                )));
            }
            if f.degree() != 2 {
                return Err(Error::MixedDegree {
                    expected: 2,
                    found: f.degree(),
                });
            }
        }
        Ok(Model {
            name: name.into(),
            generators,
            d_gen,
            omega,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generators
    }

    /// Number of degree-1 generators, `2n`.
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// `n`.
    pub fn half_dim(&self) -> usize {
        self.generators.len() / 2
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    /// `d e^i` for the 1-based generator `i`.
    pub fn d_generator(&self, i: usize) -> &Form {
        &self.d_gen[i - 1]
    }

    /// Extends `d` from the generators as a degree +1 derivation.
    pub fn differential(&self, omega: &Form) -> Form {
        let m = self.dim();
        assert_eq!(omega.generators(), m, "form from a different model");
        let k = omega.degree();
        let mut out = Form::zero(m, k + 1);
        for (mi, c) in omega.terms() {
            let factors: Vec<usize> = mi.indices().collect();
            for (s, &g) in factors.iter().enumerate() {
                let before = Form::from_indices(m, &factors[..s], Rational::one());
                let after = Form::from_indices(m, &factors[s + 1..], Rational::one());
                let term = before
                    .wedge(&self.d_gen[g - 1])
                    .and_then(|t| t.wedge(&after))
                    .expect("same generator count");
                let sign = if s % 2 == 0 { c.clone() } else { -c.clone() };
                out = &out + &term.scale(&sign);
            }
        }
        out
    }

    pub fn differential_map(&self) -> GradedMap {
        GradedMap::from_fn(self.dim(), 1, |f| self.differential(f))
    }

    /// Checks `d² = 0` (on generators, which suffices for a derivation),
    /// `dΩ = 0`, and `Ω^n ≠ 0`.
    pub fn validate(&self) -> Diagnostics {
        let d_squared = (1..=self.dim())
            .map(|i| self.differential(&self.d_gen[i - 1]))
            .find(|f| !f.is_zero());
        let d_omega = self.differential(&self.omega);
        let top = self.omega.pow(self.half_dim());
        Diagnostics {
            checks: vec![
                Check {
                    name: "d^2 = 0",
                    passed: d_squared.is_none(),
                    witness: d_squared,
                },
                Check {
                    name: "d(omega) = 0",
                    passed: d_omega.is_zero(),
                    witness: (!d_omega.is_zero()).then_some(d_omega),
                },
                Check {
                    name: "omega^n != 0",
                    passed: !top.is_zero(),
                    witness: top.is_zero().then(|| self.omega.clone()),
                },
            ],
        }
    }

    /// Product model: generators of `other` follow those of `self`, and the
    /// symplectic forms add.
    pub fn product(&self, other: &Model) -> Result<Model> {
        for model in [self, other] {
            let diagnostics = model.validate();
            if !diagnostics.is_valid() {
                return Err(Error::InvalidModel(format!(
                    "{}: {diagnostics}",
                    model.name
                )));
            }
        }
        let m = self.dim() + other.dim();
        let d_gen = self
            .d_gen
            .iter()
            .map(|f| f.embed(m, 0))
            .chain(other.d_gen.iter().map(|f| f.embed(m, self.dim())))
            .collect();
        let omega = &self.omega.embed(m, 0) + &other.omega.embed(m, self.dim());
        Model::new(
            format!("{}x{}", self.name, other.name),
            (1..=m).map(|i| format!("e{i}")).collect(),
            d_gen,
            omega,
        )
    }

    /// Decides `[Ω^t] ≠ 0` for `t = 1..=n` by membership of `Ω^t` in `im d`.
    pub fn closedness_profile(&self) -> ClosednessProfile {
        let d = self.differential_map();
        let classes_nonzero: Vec<bool> = (1..=self.half_dim())
            .map(|t| {
                let power = self.omega.pow(t);
                let exact = d.image_of(&Subspace::full(
                    2 * t - 1,
                    graded_dim(self.dim(), 2 * t as isize - 1),
                ));
                !exact.contains_form(&power)
            })
            .collect();
        let t_min = classes_nonzero
            .iter()
            .position(|nonzero| !nonzero)
            .map(|i| i + 1);
        ClosednessProfile {
            t_min,
            classes_nonzero,
        }
    }

    /// Whether the dual Lie algebra is nilpotent, via its lower central
    /// series. The bracket is read off `d` up to an overall sign, which does
    /// not affect the series.
    pub fn is_nilpotent(&self) -> bool {
        let m = self.dim();
        // bracket[i][j] = coordinates of [e_i, e_j] in the dual basis
        let bracket = |i: usize, j: usize| -> Vec<Rational> {
            (1..=m)
                .map(|k| {
                    let pair = Form::from_indices(m, &[i, j], rat(1));
                    // pair is ±e^{ij}; project d e^k onto it
                    let (mi, sign) = pair.terms().next().map(|(mi, c)| (*mi, c.clone())).unwrap();
                    self.d_gen[k - 1].coefficient(mi) * sign
                })
                .collect()
        };
        let mut current = Subspace::full(1, m);
        for _ in 0..=m {
            if current.is_zero() {
                return true;
            }
            let mut next = Vec::new();
            for i in 1..=m {
                for v in current.basis() {
                    let mut acc = vec![Rational::zero(); m];
                    for (j, vj) in v.iter().enumerate() {
                        if vj.is_zero() || i == j + 1 {
                            continue;
                        }
                        for (a, b) in acc.iter_mut().zip(bracket(i, j + 1)) {
                            *a += vj * b;
                        }
                    }
                    next.push(acc);
                }
            }
            current = Subspace::span(1, m, next);
        }
        current.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn e(m: usize, ix: &[usize]) -> Form {
        Form::from_indices(m, ix, rat(1))
    }

    #[test]
    fn kt4_differential_examples() {
        let kt = builtin("kt4").unwrap();
        assert_eq!(kt.differential(&e(4, &[4])), e(4, &[1, 2]));
        assert_eq!(kt.differential(&e(4, &[3, 4])), -&e(4, &[1, 2, 3]));
        assert!(kt.differential(&Form::one(4)).is_zero());
    }

    #[test]
    fn torus_differential_vanishes() {
        let t = builtin("t4").unwrap();
        assert!(t.differential_map().is_zero());
    }

    #[test]
    fn kt_generators_with_wrong_omega_fail_closedness() {
        let kt = builtin("kt4").unwrap();
        let bad = Model::new_unvalidated(
            "bad",
            kt.generator_names().to_vec(),
            (1..=4).map(|i| kt.d_generator(i).clone()).collect(),
            &e(4, &[1, 2]) + &e(4, &[3, 4]),
        )
        .unwrap();
        let diag = bad.validate();
        assert!(!diag.is_valid());
        let failed: Vec<_> = diag.failures().collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].name, "d(omega) = 0");
        assert_eq!(failed[0].witness, Some(-&e(4, &[1, 2, 3])));
        assert!(matches!(
            Model::new(
                "bad",
                kt.generator_names().to_vec(),
                (1..=4).map(|i| kt.d_generator(i).clone()).collect(),
                &e(4, &[1, 2]) + &e(4, &[3, 4]),
            ),
            Err(Error::InvalidModel(_))
        ));
    }

    #[test]
    fn degenerate_and_non_nilpotent_checks() {
        let names: Vec<String> = (1..=4).map(|i| format!("e{i}")).collect();
        let degenerate = Model::new_unvalidated(
            "deg",
            names.clone(),
            vec![Form::zero(4, 2); 4],
            e(4, &[1, 2]),
        )
        .unwrap();
        let diag = degenerate.validate();
        assert_eq!(
            diag.failures().map(|c| c.name).collect::<Vec<_>>(),
            ["omega^n != 0"]
        );

        // d e^1 = e^{34}, d e^3 = e^{12}: d(d e^1) = e^{12} ∧ e^4 = e^{124}
        let mut d_gen = vec![Form::zero(4, 2); 4];
        d_gen[0] = e(4, &[3, 4]);
        d_gen[2] = e(4, &[1, 2]);
        let broken =
            Model::new_unvalidated("broken", names, d_gen, &e(4, &[1, 4]) + &e(4, &[2, 3]))
                .unwrap();
        let check = &broken.validate().checks[0];
        assert!(!check.passed);
        assert_eq!(check.witness, Some(e(4, &[1, 2, 4])));
    }

    #[test]
    fn products() {
        let t = builtin("t2").unwrap();
        let t4 = t.product(&t).unwrap();
        assert_eq!(t4.omega(), &(&e(4, &[1, 2]) + &e(4, &[3, 4])));
        assert!(t4.differential_map().is_zero());

        let s = builtin("solv2").unwrap();
        let s4 = s.product(&s).unwrap();
        assert_eq!(s4.d_generator(2), &e(4, &[1, 2]));
        assert_eq!(s4.d_generator(4), &e(4, &[3, 4]));
        assert_eq!(s4.differential(&(&e(4, &[2]) + &e(4, &[4]))), *s4.omega());

        let kt = builtin("kt4").unwrap();
        let p = kt.product(&t).unwrap();
        assert_eq!(p.half_dim(), 3);
        assert!(p.validate().is_valid());
    }

    #[test]
    fn odd_or_empty_generator_sets_rejected() {
        let names: Vec<String> = (1..=3).map(|i| format!("e{i}")).collect();
        assert!(
            Model::new_unvalidated("odd", names, vec![Form::zero(3, 2); 3], Form::zero(3, 2))
                .is_err()
        );
    }

    #[test]
    fn closedness_profiles() {
        let solv = builtin("solv2").unwrap().closedness_profile();
        assert_eq!(solv.t_min, Some(1));
        let t4 = builtin("t4").unwrap().closedness_profile();
        assert_eq!(t4.t_min, None);
        assert_eq!(t4.classes_nonzero, [true, true]);
        let kt = builtin("kt4").unwrap().closedness_profile();
        assert_eq!(kt.t_min, None);
        assert!(kt.is_closed_type());
    }

    #[test]
    fn nilpotency() {
        assert!(builtin("t4").unwrap().is_nilpotent());
        assert!(builtin("kt4").unwrap().is_nilpotent());
        assert!(builtin("kt4xt2").unwrap().is_nilpotent());
        assert!(!builtin("solv2").unwrap().is_nilpotent());
        assert!(!builtin("solv4").unwrap().is_nilpotent());
    }
}
