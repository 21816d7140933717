//! Numeric abstraction used by every model computation.
//!
//! Durations are integers, but waits, start times, costs and VIKOR scores are
//! reals. All of that arithmetic is written against [`Scalar`], which is
//! implemented for `f32`, `f64` and exact 64-bit rationals. The rational
//! instantiation is handy for checking the floating point path: the
//! waiting-time formula and the VIKOR scores are rational functions of their
//! inputs, so they can be evaluated without rounding.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// A real-like number the model can be evaluated in.
pub trait Scalar:
    Copy + Num + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Absolute slack used when comparing a computed value of magnitude
    /// `scale` against a bound. Zero for exact types.
    fn tolerance(scale: Self) -> Self;

    fn is_finite(self) -> bool;

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn from_real(x: f64) -> Self {
        Self::from_f64(x).expect("value representable in scalar type")
    }

    fn to_real(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn abs_val(self) -> Self {
        if self < Self::zero() {
            Self::zero() - self
        } else {
            self
        }
    }

    /// `a <= b` up to [`Scalar::tolerance`].
    fn approx_le(a: Self, b: Self) -> bool {
        a <= b + Self::tolerance(b.abs_val().max_of(a.abs_val()))
    }

    /// `a == b` up to [`Scalar::tolerance`].
    fn approx_eq(a: Self, b: Self) -> bool {
        Self::approx_le(a, b) && Self::approx_le(b, a)
    }
}

impl Scalar for f64 {
    fn tolerance(scale: Self) -> Self {
        1e-9 * scale.abs().max(1.0)
    }

    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for f32 {
    fn tolerance(scale: Self) -> Self {
        1e-4 * scale.abs().max(1.0)
    }

    fn is_finite(self) -> bool {
        f32::is_finite(self)
    }
}

impl Scalar for Rational64 {
    fn tolerance(_scale: Self) -> Self {
        Rational64::from_integer(0)
    }

    fn is_finite(self) -> bool {
        true
    }

    fn from_real(x: f64) -> Self {
        // `FromPrimitive` approximates by continued fractions; short decimal
        // inputs such as 0.5 or 1.4 come back exact.
        Rational64::from_f64(x).expect("value representable as a 64-bit rational")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_conversion_is_exact_for_short_decimals() {
        assert_eq!(Rational64::from_real(0.5), Rational64::new(1, 2));
        assert_eq!(Rational64::from_real(1.4), Rational64::new(7, 5));
        assert_eq!(Rational64::from_real(0.7) * Rational64::from_count(2), Rational64::new(7, 5));
    }

    #[test]
    fn tolerance_scales_with_magnitude() {
        assert!(f64::approx_eq(1e6 + 1e-4, 1e6));
        assert!(!f64::approx_eq(1.0 + 1e-6, 1.0));
        assert!(!Rational64::approx_le(Rational64::new(1, 1_000_000_001), Rational64::from_integer(0)));
    }
}
