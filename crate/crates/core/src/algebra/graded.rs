use super::form::Form;
use super::matrix::Matrix;
use super::monomial::{graded_dim, monomials};
use super::subspace::Subspace;
use super::Rational;
use crate::error::{Error, Result};

/// A linear map of fixed degree `shift` on the exterior algebra over `m`
/// generators, one matrix per source degree `0..=m` in the lexicographic
/// monomial bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    m: usize,
    shift: isize,
    blocks: Vec<Matrix>,
}

impl GradedMap {
    /// Builds the map from its action on basis monomials. `f` must return
    /// a form of degree `k + shift` (ignored when that is out of range).
    pub fn from_fn(m: usize, shift: isize, f: impl Fn(&Form) -> Form) -> Self {
        let blocks = (0..=m)
            .map(|k| {
                let rows = graded_dim(m, k as isize + shift);
                let cols: Vec<Vec<Rational>> = monomials(m, k)
                    .iter()
                    .map(|mi| {
                        if rows == 0 {
                            return Vec::new();
                        }
                        let image = f(&Form::monomial(m, *mi, num_traits::One::one()));
                        assert_eq!(
                            image.degree() as isize,
                            k as isize + shift,
                            "graded map produced the wrong degree"
                        );
                        image.to_vector()
                    })
                    .collect();
                Matrix::from_columns(rows, &cols)
            })
            .collect();
        GradedMap { m, shift, blocks }
    }

    pub fn zero(m: usize, shift: isize) -> Self {
        let blocks = (0..=m)
            .map(|k| Matrix::zeros(graded_dim(m, k as isize + shift), graded_dim(m, k as isize)))
            .collect();
        GradedMap { m, shift, blocks }
    }

    pub fn identity(m: usize) -> Self {
        let blocks = (0..=m)
            .map(|k| Matrix::identity(graded_dim(m, k as isize)))
            .collect();
        GradedMap {
            m,
            shift: 0,
            blocks,
        }
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn shift(&self) -> isize {
        self.shift
    }

    /// The block on source degree `k`; out-of-range degrees give an empty
    /// matrix of the right shape.
    pub fn block(&self, k: isize) -> Matrix {
        if k < 0 || k as usize > self.m {
            return Matrix::zeros(graded_dim(self.m, k + self.shift), 0);
        }
        self.blocks[k as usize].clone()
    }

    pub fn block_ref(&self, k: usize) -> &Matrix {
        &self.blocks[k]
    }

    pub fn target_degree(&self, k: usize) -> isize {
        k as isize + self.shift
    }

    pub fn apply(&self, f: &Form) -> Form {
        assert_eq!(
            f.generators(),
            self.m,
            "graded map applied to a foreign form"
        );
        let target = self.target_degree(f.degree());
        if target < 0 || target as usize > self.m {
            return Form::zero(self.m, target.max(0) as usize);
        }
        Form::from_vector(
            self.m,
            target as usize,
            &self.blocks[f.degree()].mul_vec(&f.to_vector()),
        )
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.m, other.m, "composing maps on different algebras");
        let blocks = (0..=self.m)
            .map(|k| {
                let mid = k as isize + other.shift;
                let rows = graded_dim(self.m, mid + self.shift);
                let cols = graded_dim(self.m, k as isize);
                if mid < 0 || mid as usize > self.m {
                    Matrix::zeros(rows, cols)
                } else {
                    self.blocks[mid as usize].mul(&other.blocks[k])
                }
            })
            .collect();
        GradedMap {
            m: self.m,
            shift: self.shift + other.shift,
            blocks,
        }
    }

    pub fn power(&self, k: usize) -> GradedMap {
        let mut acc = GradedMap::identity(self.m);
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    fn check_same_shape(&self, other: &GradedMap) {
        assert_eq!(
            (self.m, self.shift),
            (other.m, other.shift),
            "graded map shape"
        );
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        self.check_same_shape(other);
        GradedMap {
            m: self.m,
            shift: self.shift,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        self.check_same_shape(other);
        GradedMap {
            m: self.m,
            shift: self.shift,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> GradedMap {
        GradedMap {
            m: self.m,
            shift: self.shift,
            blocks: self.blocks.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    /// First source degree where the two maps differ.
    pub fn first_difference(&self, other: &GradedMap) -> Option<usize> {
        self.check_same_shape(other);
        (0..=self.m).find(|&k| self.blocks[k] != other.blocks[k])
    }

    fn target_ambient(&self, k: usize) -> (usize, usize) {
        let t = self.target_degree(k);
        (t.max(0) as usize, graded_dim(self.m, t))
    }

    /// Kernel in degree `k` and image in degree `k + shift`.
    pub fn kernel_image(&self, k: usize) -> Result<(Subspace, Subspace)> {
        if k > self.m {
            return Err(Error::Dimension(format!("no block in degree {k}")));
        }
        let block = &self.blocks[k];
        let source = graded_dim(self.m, k as isize);
        let kernel = Subspace::span(k, source, block.kernel());
        let (t, t_dim) = self.target_ambient(k);
        let image = Subspace::span(t, t_dim, block.columns());
        assert_eq!(kernel.dim() + image.dim(), source, "rank-nullity");
        Ok((kernel, image))
    }

    /// Image of a subspace of degree `k`.
    pub fn image_of(&self, s: &Subspace) -> Subspace {
        let k = s.degree();
        let (t, t_dim) = self.target_ambient(k);
        if t_dim == 0 {
            return Subspace::zero(t, 0);
        }
        let block = &self.blocks[k];
        Subspace::span(t, t_dim, s.basis().iter().map(|v| block.mul_vec(v)))
    }

    /// `{x ∈ Λ^k : f(x) ∈ target}`.
    pub fn preimage(&self, target: &Subspace, k: usize) -> Result<Subspace> {
        if k > self.m {
            return Err(Error::Dimension(format!("no block in degree {k}")));
        }
        let (t, t_dim) = self.target_ambient(k);
        if target.ambient_dim() != t_dim || (t_dim > 0 && target.degree() != t) {
            return Err(Error::Dimension(format!(
                "preimage target has degree {} but the map lands in degree {t}",
                target.degree()
            )));
        }
        let source = graded_dim(self.m, k as isize);
        let condition = target.annihilator().mul(&self.blocks[k]);
        Ok(Subspace::span(k, source, condition.kernel()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn zero_and_identity_kernel_image() {
        let z = GradedMap::zero(2, 0);
        let (k, i) = z.kernel_image(1).unwrap();
        assert!(k.is_full());
        assert!(i.is_zero());
        let id = GradedMap::identity(2);
        let (k, i) = id.kernel_image(1).unwrap();
        assert!(k.is_zero());
        assert!(i.is_full());
    }

    #[test]
    fn compose_and_power_shift_degrees() {
        let omega = Form::from_indices(4, &[1, 2], rat(1));
        let top = GradedMap::from_fn(4, 2, |f| f.wedge(&omega).unwrap());
        let top2 = top.power(2);
        assert_eq!(top2.shift(), 4);
        // e^{12} ∧ e^{12} = 0
        assert!(top2.block_ref(0).is_zero());
        assert_eq!(top.compose(&top), top2);
    }

    #[test]
    fn apply_out_of_range_is_zero() {
        let top = GradedMap::from_fn(2, 2, |f| {
            f.wedge(&Form::from_indices(2, &[1, 2], rat(1))).unwrap()
        });
        assert!(top.apply(&Form::generator(2, 1)).is_zero());
    }
}
