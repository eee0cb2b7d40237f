//! Scalar abstraction shared by the exterior-algebra engine.
//!
//! Everything in [`crate::form`], [`crate::exterior`], [`crate::bigraded`]
//! and [`crate::lefschetz`] only needs field arithmetic, so it is written
//! against [`Scalar`]. That lets the same code run over `f64` for the
//! randomized sweeps and over exact rationals when an identity should hold
//! with zero residual. Norms and residuals need square roots and live behind
//! the narrower [`Real`] bound.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// Magnitude below which a pivot or a validation residual counts as zero.
    /// Zero for exact types.
    fn tolerance() -> Self;

    fn from_int(v: i64) -> Self;

    fn from_uint(v: u64) -> Self;

    /// Lossy conversion used only for reporting.
    fn approx_f64(&self) -> f64;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }
}

/// Floating-point scalars: everything in [`Scalar`] plus the elementary
/// functions needed for norms and random sampling.
pub trait Real: Scalar + Float + FloatConst + FromPrimitive {}

impl<T: Scalar + Float + FloatConst + FromPrimitive> Real for T {}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_uint(v: u64) -> Self {
        v as f64
    }
    fn approx_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
    fn from_int(v: i64) -> Self {
        v as f32
    }
    fn from_uint(v: u64) -> Self {
        v as f32
    }
    fn approx_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for Ratio<i128> {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(i128::from(v))
    }
    fn from_uint(v: u64) -> Self {
        Ratio::from_integer(i128::from(v))
    }
    fn approx_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        Ratio::from_integer(BigInt::from(0))
    }
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
    fn from_uint(v: u64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
    fn approx_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `n!` in exact integer arithmetic. Panics past `20!`, far beyond the
/// supported `n <= 8`.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).try_fold(1u64, |acc, v| acc.checked_mul(v)).expect("factorial overflow")
}

/// Falling factorial `n (n-1) ... (n-r+1)`.
pub fn falling_factorial(n: usize, r: usize) -> u64 {
    assert!(r <= n, "falling factorial {n}_{r}");
    ((n - r + 1) as u64..=n as u64)
        .try_fold(1u64, |acc, v| acc.checked_mul(v))
        .expect("falling factorial overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(8), 40320);
        assert_eq!(falling_factorial(5, 2), 20);
        assert_eq!(falling_factorial(4, 0), 1);
    }

    #[test]
    fn exact_ratio() {
        let half = <Ratio<i128> as Scalar>::ratio(1, 2);
        assert_eq!(half + half, <Ratio<i128> as Scalar>::from_int(1));
        assert_eq!(<f64 as Scalar>::ratio(3, 4), 0.75);
    }
}
