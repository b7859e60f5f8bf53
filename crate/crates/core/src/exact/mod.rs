//! Exact arithmetic: scalar traits, dense univariate polynomials, dense
//! matrices and the linear algebra the rest of the crate is built on.
//!
//! Everything here is generic over the coefficient type; the crate root
//! fixes it to arbitrary-precision rationals.

mod linalg;
mod matrix;
mod poly;
mod span;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use linalg::{
    bareiss_determinant, nilpotent_exp, nilpotent_log, poly_matrix_minor_gcd, LinearSolution,
    MinorGcd,
};
pub use matrix::Matrix;
pub use poly::Polynomial;
pub use span::SpanSolver;

use crate::error::{Error, Result};

/// Commutative ring element with owned arithmetic.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Field element: a [`Scalar`] with exact division by nonzero elements.
pub trait Field: Scalar + Div<Output = Self> {}

impl<T> Field for T where T: Scalar + Div<Output = T> {}

/// Scalars that can be divided by a positive machine integer.
///
/// Needed by the exponential and logarithm series, which divide by `k!` and `k`.
pub trait DivInt: Scalar {
    fn div_int(&self, k: u64) -> Self;
}

impl DivInt for BigRational {
    fn div_int(&self, k: u64) -> Self {
        self / BigRational::from_integer(BigInt::from(k))
    }
}

impl<T: Field + DivInt> DivInt for Polynomial<T> {
    fn div_int(&self, k: u64) -> Self {
        self.map(|c| c.div_int(k))
    }
}

/// Rational from a machine integer.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational `p/q`; panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Formats a rational as `"p"` or `"p/q"` in lowest terms.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("bad rational {s:?}"));
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().map_err(|_| bad())?;
            let q = q.trim().parse::<BigInt>().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "5", "-3/2", "7/9"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
