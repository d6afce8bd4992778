//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar used throughout the solver.
///
/// Implemented for `f32` and `f64`. All algorithms are written against this
/// trait; the crate root exposes `f64` aliases for the common case.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + 'static
{
    /// Machine epsilon scaled for iterative solvers.
    fn tolerance() -> Self {
        Self::epsilon() * Self::of(16.0)
    }

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::of(2.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic_sum<T: Real>(xs: &[f64]) -> T {
        xs.iter().map(|&x| T::of(x)).sum()
    }

    #[test]
    fn conversions_round_trip_for_both_widths() {
        assert_eq!(generic_sum::<f64>(&[0.5, 0.25]), 0.75);
        assert_eq!(generic_sum::<f32>(&[0.5, 0.25]), 0.75f32);
        assert_eq!(f32::of_usize(7), 7.0);
        assert!(f64::tolerance() < 1e-14);
    }
}
