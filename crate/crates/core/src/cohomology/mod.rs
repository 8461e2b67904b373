//! Cohomology of a model and the constructions built on it: the Lefschetz
//! map, the spaces `A^k` and `C^k`, the long exact sequence of a column of
//! `E_1`, stabilization verdicts and the harmonicity oracles.

mod harmonic;
mod sequence;
mod verdicts;

pub use harmonic::{harmonic_verdict, symmetry_check, HarmonicVerdict, Oracle, SymmetryReport};
pub use sequence::{verify_sequence, ColumnSequence, ExactnessReport, SequenceMap, SequenceNode};
pub use verdicts::{convergence_verdict, stabilization_verdicts};

use num_traits::Zero;
use rand::Rng;

use crate::algebra::{graded_dim, ratio, Form, Matrix, Quotient, Rational, Subspace};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::ops::OperatorSet;

/// A class in `H^k`, with a closed representative and coordinates in the
/// fixed basis of `H^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub representative: Form,
    pub coords: Vec<Rational>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// `H^k = ker d_k / im d_{k-1}` for every `k`, with deterministic
/// representatives.
#[derive(Clone, Debug)]
pub struct DeRham {
    m: usize,
    groups: Vec<Quotient>,
}

impl DeRham {
    pub fn new(model: &Model) -> Result<Self> {
        let m = model.dim();
        let d = model.differential_map();
        let mut closed = Vec::new();
        let mut exact = vec![Subspace::zero(0, 1)];
        for k in 0..=m {
            let (ker, im) = d.kernel_image(k)?;
            closed.push(ker);
            if k < m {
                exact.push(im);
            }
        }
        let groups = closed
            .into_iter()
            .zip(exact)
            .map(|(z, b)| Quotient::new(z, b))
            .collect::<Result<_>>()?;
        Ok(DeRham { m, groups })
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    /// `dim H^k`; zero outside `0..=m`.
    pub fn dim(&self, k: isize) -> usize {
        self.group(k).map_or(0, Quotient::dim)
    }

    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().map(Quotient::dim).collect()
    }

    pub fn group(&self, k: isize) -> Option<&Quotient> {
        usize::try_from(k).ok().and_then(|k| self.groups.get(k))
    }

    pub fn closed(&self, k: usize) -> &Subspace {
        self.groups[k].numerator()
    }

    pub fn exact(&self, k: usize) -> &Subspace {
        self.groups[k].denominator()
    }

    pub fn basis(&self, k: usize) -> Vec<CohomologyClass> {
        let reps = self.groups[k].rep_forms(self.m);
        let dim = reps.len();
        reps.into_iter()
            .enumerate()
            .map(|(i, representative)| {
                let mut coords = vec![Rational::zero(); dim];
                coords[i] = num_traits::One::one();
                CohomologyClass {
                    degree: k,
                    representative,
                    coords,
                }
            })
            .collect()
    }

    pub fn class_of(&self, omega: &Form) -> Result<CohomologyClass> {
        let k = omega.degree();
        let coords = self.groups[k]
            .coords(&omega.to_vector())
            .ok_or_else(|| Error::Precondition(format!("{omega} is not closed")))?;
        Ok(CohomologyClass {
            degree: k,
            representative: omega.clone(),
            coords,
        })
    }
}

/// `[c] ↦ [Ω^t ∧ c]`.
pub fn lefschetz(
    de_rham: &DeRham,
    ops: &OperatorSet,
    class: &CohomologyClass,
    t: usize,
) -> Result<CohomologyClass> {
    let image = ops.top_power(t).apply(&class.representative);
    if image.degree() > de_rham.generators() {
        return Ok(CohomologyClass {
            degree: image.degree(),
            representative: image,
            coords: Vec::new(),
        });
    }
    de_rham
        .class_of(&image)
        .map_err(|_| Error::Invariant(format!("Ω^{t} ∧ {} is not closed", class.representative)))
}

/// Matrix of `τ^t: H^k → H^{k+2t}`, after checking that exact forms map to
/// exact forms.
pub fn lefschetz_matrix(de_rham: &DeRham, ops: &OperatorSet, k: usize, t: usize) -> Result<Matrix> {
    let m = de_rham.generators();
    let target = k + 2 * t;
    if target > m {
        return Ok(Matrix::zeros(0, de_rham.dim(k as isize)));
    }
    let lift = ops.top_power(t);
    for b in de_rham.exact(k).basis_forms(m) {
        let image = lift.apply(&b);
        if !de_rham.exact(target).contains_form(&image) {
            return Err(Error::Invariant(format!(
                "τ^{t} sends exact {b} to non-exact {image}"
            )));
        }
    }
    let columns: Vec<Vec<Rational>> = de_rham
        .basis(k)
        .iter()
        .map(|c| lefschetz(de_rham, ops, c, t).map(|c| c.coords))
        .collect::<Result<_>>()?;
    Ok(Matrix::from_columns(de_rham.dim(target as isize), &columns))
}

/// `A^k = d^{-1}(Λ_ε^{k+1})` in degree `k`.
pub fn a_space(ops: &OperatorSet, k: usize) -> Result<Subspace> {
    let m = ops.model().dim();
    if k >= m {
        return Ok(Subspace::full(k, graded_dim(m, k as isize)));
    }
    ops.d().preimage(ops.effective_basis(k + 1), k)
}

/// `C^k = A^k / im d_{k-1}`; exact forms are closed, so the quotient is
/// well defined.
pub fn c_space(ops: &OperatorSet, de_rham: &DeRham, k: usize) -> Result<Quotient> {
    Quotient::new(a_space(ops, k)?, de_rham.exact(k).clone())
}

/// A sparse random form with small rational coefficients.
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, m: usize, k: usize) -> Form {
    let dim = graded_dim(m, k as isize);
    let coords: Vec<Rational> = (0..dim)
        .map(|_| {
            if rng.random_bool(0.5) {
                Rational::zero()
            } else {
                ratio(rng.random_range(-5..=5), rng.random_range(1..=3))
            }
        })
        .collect();
    Form::from_vector(m, k, &coords)
}

/// A random element of `s` as a form.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, m: usize, s: &Subspace) -> Form {
    let mut v = vec![Rational::zero(); s.ambient_dim()];
    for b in s.basis() {
        let c = ratio(rng.random_range(-5..=5), rng.random_range(1..=3));
        for (x, y) in v.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    Form::from_vector(m, s.degree(), &v)
}
