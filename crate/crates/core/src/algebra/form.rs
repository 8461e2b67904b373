use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::{graded_dim, monomials, MultiIndex, MAX_GENERATORS};
use super::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormKind;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VectorKind;

/// A homogeneous element of the exterior algebra on `m` generators.
///
/// Zero coefficients are never stored, so equal elements compare equal.
/// The kind parameter separates forms (`e^i`) from multivectors (`∂_i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element<K> {
    m: usize,
    degree: usize,
    terms: BTreeMap<MultiIndex, Rational>,
    kind: PhantomData<K>,
}

pub type Form = Element<FormKind>;
pub type Multivector = Element<VectorKind>;

/// How a decomposable multivector contracts into a form.
///
/// `FirstFactorFirst` evaluates `(∂_{i1} ∧ ... ∧ ∂_{ik}) ⌟ ω` as
/// `ι_{ik}( ... ι_{i1}(ω))`, so `(∂_1 ∧ ∂_2) ⌟ e^{12} = 1`. This is the
/// convention under which the symplectic operator identities hold with
/// `[⊤, δ] = d`. `LastFactorFirst` nests the other way,
/// `(V ∧ W) ⌟ ω = V ⌟ (W ⌟ ω)`, and differs by `(-1)^{k(k-1)/2}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ContractionConvention {
    #[default]
    FirstFactorFirst,
    LastFactorFirst,
}

impl<K: Clone> Element<K> {
    pub fn zero(m: usize, degree: usize) -> Self {
        assert!(
            m <= MAX_GENERATORS,
            "at most {MAX_GENERATORS} generators supported"
        );
        Element {
            m,
            degree,
            terms: BTreeMap::new(),
            kind: PhantomData,
        }
    }

    pub fn scalar(m: usize, c: Rational) -> Self {
        let mut e = Self::zero(m, 0);
        e.add_term(MultiIndex::EMPTY, c);
        e
    }

    pub fn one(m: usize) -> Self {
        Self::scalar(m, Rational::one())
    }

    /// The basis element for generator `i` (1-based).
    pub fn generator(m: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= m, "generator {i} out of range 1..={m}");
        Self::monomial(m, MultiIndex::single(i), Rational::one())
    }

    pub fn monomial(m: usize, mi: MultiIndex, c: Rational) -> Self {
        assert!(mi.max_index() <= m, "monomial {mi} exceeds {m} generators");
        let mut e = Self::zero(m, mi.degree());
        e.add_term(mi, c);
        e
    }

    /// Builds `c · e^{indices}` from unsorted 1-based indices, applying the
    /// reordering sign. Repeated indices give zero.
    pub fn from_indices(m: usize, indices: &[usize], c: Rational) -> Self {
        let mut acc = Self::one(m);
        for &i in indices {
            acc = acc
                .wedge(&Self::generator(m, i))
                .expect("same generator count");
        }
        if acc.degree != indices.len() {
            return Self::zero(m, indices.len());
        }
        acc.scale(&c)
    }

    pub fn from_terms(
        m: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        let mut e = Self::zero(m, degree);
        for (mi, c) in terms {
            if mi.degree() != degree {
                return Err(Error::MixedDegree {
                    expected: degree,
                    found: mi.degree(),
                });
            }
            if mi.max_index() > m {
                return Err(Error::Dimension(format!(
                    "monomial {mi} exceeds {m} generators"
                )));
            }
            e.add_term(mi, c);
        }
        Ok(e)
    }

    /// Coordinates in the lexicographic monomial basis.
    pub fn from_vector(m: usize, degree: usize, coords: &[Rational]) -> Self {
        let basis = monomials(m, degree);
        assert_eq!(basis.len(), coords.len(), "coordinate vector length");
        let mut e = Self::zero(m, degree);
        for (mi, c) in basis.iter().zip(coords) {
            if !c.is_zero() {
                e.terms.insert(*mi, c.clone());
            }
        }
        e
    }

    pub fn to_vector(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); graded_dim(self.m, self.degree as isize)];
        for (mi, c) in &self.terms {
            v[mi.position(self.m)] = c.clone();
        }
        v
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mi: MultiIndex) -> Rational {
        self.terms.get(&mi).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, mi: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mi).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mi);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.m, self.degree);
        }
        Element {
            m: self.m,
            degree: self.degree,
            terms: self.terms.iter().map(|(mi, x)| (*mi, x * c)).collect(),
            kind: PhantomData,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::Dimension(format!(
                "{} generators vs {} generators",
                self.m, other.m
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::MixedDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut out = self.clone();
        for (mi, c) in &other.terms {
            out.add_term(*mi, c.clone());
        }
        Ok(out)
    }

    /// Graded product. Products above the top degree are the zero element
    /// of that (empty) degree.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.m, self.degree + other.degree);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((mi, negative)) = a.wedge(*b) {
                    let c = x * y;
                    out.add_term(mi, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// The same element viewed on `m` generators with every index shifted
    /// up by `offset`.
    pub fn embed(&self, m: usize, offset: usize) -> Self {
        assert!(self.m + offset <= m, "embedding does not fit");
        let mut out = Self::zero(m, self.degree);
        for (mi, c) in &self.terms {
            let shifted: Vec<usize> = mi.indices().map(|i| i + offset).collect();
            let target = MultiIndex::new(&shifted).expect("shifted indices stay distinct");
            out.add_term(target, c.clone());
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::one(self.m);
        for _ in 0..k {
            acc = acc.wedge(self).expect("same generator count");
        }
        acc
    }
}

impl Form {
    /// Interior product with a single vector `∂_i`: the degree -1 derivation
    /// with `∂_i ⌟ e^j = δ_i^j`.
    pub fn interior(&self, i: usize) -> Form {
        let mut out = Form::zero(self.m, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return out;
        }
        for (mi, c) in &self.terms {
            if let Some((rest, negative)) = mi.remove(i) {
                out.add_term(rest, if negative { -c.clone() } else { c.clone() });
            }
        }
        out
    }
}

/// `V ⌟ ω` under the default convention.
pub fn contract(v: &Multivector, omega: &Form) -> Result<Form> {
    contract_with(v, omega, ContractionConvention::default())
}

pub fn contract_with(
    v: &Multivector,
    omega: &Form,
    convention: ContractionConvention,
) -> Result<Form> {
    if v.m != omega.m {
        return Err(Error::Dimension(format!(
            "multivector on {} generators, form on {}",
            v.m, omega.m
        )));
    }
    if v.degree > omega.degree {
        return Ok(Form::zero(omega.m, 0));
    }
    let mut out = Form::zero(omega.m, omega.degree - v.degree);
    for (mi, c) in &v.terms {
        let mut acc = omega.clone();
        let order: Vec<usize> = match convention {
            ContractionConvention::FirstFactorFirst => mi.indices().collect(),
            ContractionConvention::LastFactorFirst => {
                let mut ix: Vec<usize> = mi.indices().collect();
                ix.reverse();
                ix
            }
        };
        for i in order {
            acc = acc.interior(i);
        }
        for (mj, x) in acc.terms {
            out.add_term(mj, x * c);
        }
    }
    Ok(out)
}

impl<K: Clone> Add for &Element<K> {
    type Output = Element<K>;

    /// Panics on mismatched shape; use `checked_add` for fallible addition.
    fn add(self, rhs: &Element<K>) -> Element<K> {
        self.checked_add(rhs).expect("adding incompatible elements")
    }
}

impl<K: Clone> Sub for &Element<K> {
    type Output = Element<K>;

    fn sub(self, rhs: &Element<K>) -> Element<K> {
        self.checked_add(&-rhs)
            .expect("subtracting incompatible elements")
    }
}

impl<K: Clone> Neg for &Element<K> {
    type Output = Element<K>;

    fn neg(self) -> Element<K> {
        Element {
            m: self.m,
            degree: self.degree,
            terms: self.terms.iter().map(|(mi, c)| (*mi, -c)).collect(),
            kind: PhantomData,
        }
    }
}

trait Symbol {
    const PREFIX: &'static str;
}

impl Symbol for FormKind {
    const PREFIX: &'static str = "e";
}

impl Symbol for VectorKind {
    const PREFIX: &'static str = "d";
}

impl<K: Symbol + Clone> fmt::Display for Element<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (mi, c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            if n == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if mi.degree() == 0 {
                write!(f, "{magnitude}")?;
                continue;
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude} ")?;
            }
            write!(f, "{}{{{}}}", K::PREFIX, mi)?;
        }
        Ok(())
    }
}
