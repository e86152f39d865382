//! Scalar abstraction shared by every numerical module.
//!
//! All algorithms are written against [`Real`], which is implemented for
//! `f32` and `f64`. Accuracy targets quoted in the module docs refer to `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar usable by the transforms, quadratures and searches.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + FftNum
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(x: f64) -> Self;

    /// Lossy conversion to `f64` for reporting.
    fn to_f64_lossy(self) -> f64;
}

impl Real for f32 {
    #[inline]
    fn lit(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn lit(x: f64) -> Self {
        x
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Shorthand for `T::lit(x)` inside generic code.
#[inline]
pub(crate) fn c<T: Real>(x: f64) -> T {
    T::lit(x)
}

#[inline]
pub(crate) fn from_usize<T: Real>(n: usize) -> T {
    T::lit(n as f64)
}

/// Sums `values` with a fixed pairwise tree so the result does not depend
/// on how the caller partitioned the work.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        let mut acc = T::zero();
        for &v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of `f(x)` over `values` without materializing the mapped slice.
pub(crate) fn pairwise_sum_by<T: Real, U>(values: &[U], f: &impl Fn(&U) -> T) -> T {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        let mut acc = T::zero();
        for v in values {
            acc += f(v);
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum_by(&values[..mid], f) + pairwise_sum_by(&values[mid..], f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_integer_sum() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
        assert_eq!(pairwise_sum_by(&v, &|x: &f64| 2.0 * x), 1_001_000.0);
    }

    #[test]
    fn pairwise_of_empty_is_zero() {
        assert_eq!(pairwise_sum::<f32>(&[]), 0.0);
    }
}
