use num_traits::Zero;

use super::form::Form;
use super::matrix::{LinearSolver, Matrix};
use super::monomial::graded_dim;
use super::Rational;
use crate::error::{Error, Result};

/// A linear subspace of one graded piece `Λ^k`, stored as the reduced row
/// echelon form of its basis. The canonical form makes equal subspaces
/// compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    degree: usize,
    ambient: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(degree: usize, ambient: usize) -> Self {
        Subspace {
            degree,
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(degree: usize, ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = num_traits::One::one();
                v
            })
            .collect();
        Subspace {
            degree,
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<I>(degree: usize, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let rows: Vec<Vec<Rational>> = vectors.into_iter().collect();
        if rows.is_empty() {
            return Self::zero(degree, ambient);
        }
        let (r, pivots) = Matrix::from_rows(ambient, &rows).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            degree,
            ambient,
            basis,
            pivots,
        }
    }

    /// Span of homogeneous forms of one degree on `m` generators.
    pub fn from_forms(m: usize, degree: usize, forms: &[Form]) -> Result<Self> {
        for f in forms {
            if f.degree() != degree {
                return Err(Error::MixedDegree {
                    expected: degree,
                    found: f.degree(),
                });
            }
            if f.generators() != m {
                return Err(Error::Dimension(format!(
                    "form on {} generators in a span over {m}",
                    f.generators()
                )));
            }
        }
        Ok(Self::span(
            degree,
            graded_dim(m, degree as isize),
            forms.iter().map(Form::to_vector),
        ))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn basis_forms(&self, m: usize) -> Vec<Form> {
        self.basis
            .iter()
            .map(|v| Form::from_vector(m, self.degree, v))
            .collect()
    }

    fn check_same_space(&self, other: &Subspace) -> Result<()> {
        if self.degree != other.degree || self.ambient != other.ambient {
            return Err(Error::Dimension(format!(
                "subspaces of degree {} (dim {}) and degree {} (dim {})",
                self.degree, self.ambient, other.degree, other.ambient
            )));
        }
        Ok(())
    }

    /// Residual of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.ambient, "vector length");
        let mut v = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &factor * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_form(&self, f: &Form) -> bool {
        f.degree() == self.degree && self.contains(&f.to_vector())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.degree == other.degree
            && self.ambient == other.ambient
            && self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_space(other)?;
        Ok(Self::span(
            self.degree,
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        ))
    }

    /// Zassenhaus: reduce `[a | a]` and `[b | 0]`; rows with a vanishing
    /// left half span the intersection in their right half.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same_space(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.degree, self.ambient));
        }
        let n = self.ambient;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for a in &self.basis {
            let mut row = a.clone();
            row.extend_from_slice(a);
            rows.push(row);
        }
        for b in &other.basis {
            let mut row = b.clone();
            row.extend(std::iter::repeat_n(Rational::zero(), n));
            rows.push(row);
        }
        let (r, pivots) = Matrix::from_rows(2 * n, &rows).rref();
        let vectors = (0..pivots.len())
            .filter(|&i| pivots[i] >= n)
            .map(|i| r.row(i)[n..].to_vec());
        Ok(Self::span(self.degree, self.ambient, vectors))
    }

    /// Vectors annihilating the subspace, as rows of a matrix whose kernel
    /// is exactly this subspace.
    pub fn annihilator(&self) -> Matrix {
        let rows = Matrix::from_rows(self.ambient, &self.basis).kernel();
        Matrix::from_rows(self.ambient, &rows)
    }

    pub fn quotient(&self, denominator: &Subspace) -> Result<Quotient> {
        Quotient::new(self.clone(), denominator.clone())
    }
}

/// `dim A - dim B` together with deterministic coset representatives.
pub fn quotient_dim(a: &Subspace, b: &Subspace) -> Result<(usize, Vec<Vec<Rational>>)> {
    let q = Quotient::new(a.clone(), b.clone())?;
    Ok((q.dim(), q.reps.clone()))
}

/// A quotient `N / D` with `D ⊆ N`, with representatives for a basis of the
/// quotient and a solver for coordinates of cosets.
#[derive(Clone, Debug)]
pub struct Quotient {
    numerator: Subspace,
    denominator: Subspace,
    reps: Vec<Vec<Rational>>,
    solver: LinearSolver,
}

impl Quotient {
    pub fn new(numerator: Subspace, denominator: Subspace) -> Result<Self> {
        numerator.check_same_space(&denominator)?;
        if !denominator.is_subspace_of(&numerator) {
            return Err(Error::Containment(format!(
                "denominator (dim {}) is not contained in numerator (dim {}) in degree {}",
                denominator.dim(),
                numerator.dim(),
                numerator.degree
            )));
        }
        // Keep the numerator basis vectors that are new modulo the span so far.
        let mut running = denominator.clone();
        let mut reps = Vec::new();
        for v in &numerator.basis {
            if !running.contains(v) {
                reps.push(v.clone());
                running = Subspace::span(
                    running.degree,
                    running.ambient,
                    running.basis.iter().chain(std::iter::once(v)).cloned(),
                );
            }
        }
        let columns: Vec<Vec<Rational>> = denominator.basis.iter().chain(&reps).cloned().collect();
        let solver = LinearSolver::new(&Matrix::from_columns(numerator.ambient, &columns));
        Ok(Quotient {
            numerator,
            denominator,
            reps,
            solver,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn numerator(&self) -> &Subspace {
        &self.numerator
    }

    pub fn denominator(&self) -> &Subspace {
        &self.denominator
    }

    pub fn reps(&self) -> &[Vec<Rational>] {
        &self.reps
    }

    pub fn rep_forms(&self, m: usize) -> Vec<Form> {
        self.reps
            .iter()
            .map(|v| Form::from_vector(m, self.numerator.degree, v))
            .collect()
    }

    /// Coordinates of the coset `v + D` in the representative basis, or
    /// `None` when `v` is not in the numerator.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let x = self.solver.solve(v)?;
        Some(x[self.denominator.dim()..].to_vec())
    }

    /// The representative combination with the given coordinates.
    pub fn lift(&self, coords: &[Rational]) -> Vec<Rational> {
        assert_eq!(coords.len(), self.reps.len(), "quotient coordinate length");
        let mut v = vec![Rational::zero(); self.numerator.ambient];
        for (c, r) in coords.iter().zip(&self.reps) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(r) {
                *x += c * y;
            }
        }
        v
    }
}
