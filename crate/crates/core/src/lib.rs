//! Exact-arithmetic Gram matrix certificates for sums-of-squares binary forms.
//!
//! Everything is computed over arbitrary-precision rationals: homogeneous
//! polynomial arithmetic, monomial lifts and induced matrices, Gram matrix
//! evaluation and the canonical Gram matrix, transvectants (polynomial and
//! matrix forms), harmonic decomposition, the symmetric tensor product of
//! monomial-indexed matrices, and structured positive-semidefinite
//! certificates built from those pieces.
//!
//! The one place floating point appears is the root-pairing Gram search in
//! [`structured`]; its output is rationalized and re-verified exactly before
//! it is returned.

pub mod cgtools;
pub mod error;
pub mod forms;
pub mod grams;
pub mod lifting;
pub mod mat;
pub mod structured;
pub mod symprod;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use forms::{Form, MultiIndex, Rational};
pub use grams::{PsdVerdict, SymMatrix};
pub use mat::RatMat;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
