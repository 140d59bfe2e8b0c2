//! Scalar abstraction: every geometric computation in this crate is generic
//! over a field of coefficients.
//!
//! Two realizations are provided:
//!
//! * [`Rational`] (`num::BigRational`) — exact arithmetic; equality is exact
//!   and `approx_zero` ignores the tolerance.
//! * `f64` — floating point; zero tests compare against an absolute
//!   tolerance supplied by the caller (the crate-wide default is
//!   [`DEFAULT_TOL`]).
//!
//! All structure constants and special parameter values used by the library
//! are rational, so the exact path never needs square roots; norms are
//! reported through [`Scalar::to_f64`] at the boundary.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, FromPrimitive, Signed, Zero};

/// Default absolute tolerance for floating-point comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Field of coefficients for forms, endomorphisms and curvature data.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True for realizations with exact equality (no rounding).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    /// The fraction `num/den`. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Convert from an exact rational (identity for `Rational`, lossy for
    /// floats). Used to push exactly-computed structure data into either
    /// scalar domain.
    fn from_rational(r: &Rational) -> Self;
    /// Exact zero test (used for sparse-storage cleanup).
    fn is_zero(&self) -> bool;
    /// Exact sign test; `false` for zero.
    fn is_positive(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Zero test at tolerance `tol`: exact for exact scalars, `|x| <= tol`
    /// for floating point.
    fn approx_zero(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().abs() <= tol
        }
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).approx_zero(tol)
    }
}

/// Exact rational scalar.
pub type Rational = BigRational;

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        num::Zero::zero()
    }

    fn one() -> Self {
        num::One::one()
    }

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from_i64(v).expect("i64 fits in BigInt"))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn to_f64(&self) -> f64 {
        // BigRational::to_f64 can overflow for huge numerators; the values in
        // this crate stay far away from that regime.
        num::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn is_positive(&self) -> bool {
        *self > 0.0
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Parse a scalar from either `p/q` or a decimal/integer literal.
///
/// The rational realization parses `p/q` and finite decimals exactly; `f64`
/// goes through ordinary float parsing.
pub fn parse_scalar<S: Scalar>(text: &str) -> Option<S> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(S::from_ratio(num, den));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        // finite decimal: int_part.frac_part = (int*10^k + frac) / 10^k
        let digits = frac_part.len() as u32;
        if digits > 15 {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: i64 = if int_part.is_empty() || int_part == "-" {
            0
        } else {
            int_part.parse().ok()?
        };
        let frac: i64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().ok()?
        };
        let pow = 10i64.checked_pow(digits)?;
        let mag = int.checked_abs()?.checked_mul(pow)?.checked_add(frac)?;
        let signed = if negative { -mag } else { mag };
        return Some(S::from_ratio(signed, pow));
    }
    let v: i64 = text.parse().ok()?;
    Some(S::from_int(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_ops_are_exact() {
        let a = Rational::from_ratio(1, 3);
        let b = Rational::from_ratio(1, 6);
        assert_eq!(a.clone() + b.clone(), Rational::from_ratio(1, 2));
        assert_eq!(a.clone() - b.clone(), Rational::from_ratio(1, 6));
        assert_eq!(a.clone() * b.clone(), Rational::from_ratio(1, 18));
        assert_eq!(a / b, Rational::from_int(2));
    }

    #[test]
    fn float_zero_test_uses_tolerance() {
        let x: f64 = 1e-12;
        assert!(x.approx_zero(DEFAULT_TOL));
        assert!(!x.approx_zero(1e-13));
        let r = Rational::from_ratio(1, 1_000_000_000_000);
        assert!(!r.approx_zero(DEFAULT_TOL), "exact scalars ignore tolerance");
    }

    #[test]
    fn parses_ratios_decimals_integers() {
        assert_eq!(parse_scalar::<Rational>("3/4"), Some(Rational::from_ratio(3, 4)));
        assert_eq!(parse_scalar::<Rational>("0.5"), Some(Rational::from_ratio(1, 2)));
        assert_eq!(parse_scalar::<Rational>("-1.25"), Some(Rational::from_ratio(-5, 4)));
        assert_eq!(parse_scalar::<Rational>("2"), Some(Rational::from_int(2)));
        assert_eq!(parse_scalar::<f64>("0.25"), Some(0.25));
        assert_eq!(parse_scalar::<f64>("1/2"), Some(0.5));
        assert_eq!(parse_scalar::<Rational>("1/0"), None);
    }
}
