//! Exact exterior algebra over ℚ and the linear algebra the rest of the
//! crate is built on.
//!
//! Monomials are ordered lexicographically on their increasing index
//! tuples; every matrix and canonical basis uses that order.

mod form;
mod graded;
mod matrix;
mod monomial;
mod subspace;

use num_bigint::BigInt;

pub use form::{
    contract, contract_with, ContractionConvention, Element, Form, FormKind, Multivector,
    VectorKind,
};
pub use graded::GradedMap;
pub use matrix::{LinearSolver, Matrix};
pub use monomial::{graded_dim, monomials, MultiIndex, MAX_GENERATORS};
pub use subspace::{quotient_dim, Quotient, Subspace};

pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` as a rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}
