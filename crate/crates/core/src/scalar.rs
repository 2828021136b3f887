//! Scalar abstractions.
//!
//! The multilinear algebra (forms, wedge, interior product, cross product on
//! a rational metric) only needs a field, so it is written against
//! [`Scalar`] and runs unchanged on `f64`, `f32` or exact rationals. Anything
//! that takes roots, trigonometric functions or a numerical rank is written
//! against [`Real`].

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// A field element usable by the exact algebra layer.
pub trait Scalar:
    Num + Signed + FromPrimitive + ToPrimitive + Copy + PartialOrd + Debug + Send + Sync + 'static
{
    /// Magnitude below which an elimination pivot is treated as zero.
    ///
    /// Exact types return zero: only a true zero is singular.
    fn pivot_epsilon() -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer constant representable")
    }
}

impl Scalar for f64 {
    fn pivot_epsilon() -> Self {
        1e-13
    }
}

impl Scalar for f32 {
    fn pivot_epsilon() -> Self {
        1e-6
    }
}

impl Scalar for Ratio<i64> {
    fn pivot_epsilon() -> Self {
        Ratio::from_integer(0)
    }
}

impl Scalar for Ratio<i128> {
    fn pivot_epsilon() -> Self {
        Ratio::from_integer(0)
    }
}

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Scalar + Float {
    /// Converts an `f64` literal; tolerances and constants are written as `f64`.
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f64 {}
impl Real for f32 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_pivot_epsilon_is_zero() {
        assert_eq!(Ratio::<i64>::pivot_epsilon(), Ratio::from_integer(0));
        assert!(f64::pivot_epsilon() > 0.0);
    }

    #[test]
    fn literal_round_trip() {
        assert_eq!(f64::lit(0.25), 0.25);
        assert_eq!(f32::lit(0.5).to_f64_lossy(), 0.5);
        assert_eq!(Ratio::<i64>::from_int(-3), Ratio::from_integer(-3));
    }
}
