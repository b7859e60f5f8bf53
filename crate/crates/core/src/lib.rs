//! Exact computational Lie theory for even nilpotent elements.
//!
//! Jacobson-Morozov completion, ad-gradings, Slodowy slice data and
//! Jacobson-Morozov parabolics, the Lynch decomposition, and normal forms of
//! single-chart lambda-connections (opers) with polynomial coefficients.
//! All arithmetic is over arbitrary-precision rationals.

pub mod connection;
pub mod error;
pub mod exact;
pub mod json;
pub mod liealg;
pub mod models;
pub mod sl2triples;
pub mod slodowy;
pub mod suites;

pub use error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Rational = num_rational::BigRational;
/// Polynomial in `z` with rational coefficients.
pub type Poly = exact::Polynomial<Rational>;
/// Rational matrix.
pub type QMatrix = exact::Matrix<Rational>;
/// Matrix with entries in `Q[z]`.
pub type PolyMatrix = exact::Matrix<Poly>;
