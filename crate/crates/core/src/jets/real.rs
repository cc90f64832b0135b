//! Scalar abstraction shared by plain floats and the dual-number types.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A scalar that smooth maps can be evaluated on.
///
/// Implemented by `f64`, by [`Dual`](super::Dual) over any `Real` (which
/// gives nested first-order duals), and by [`Dual2`](super::Dual2). Chart
/// multiplications and actions are written once, generically over this
/// trait, so the same code yields values, first and second derivatives.
pub trait Real:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(c: f64) -> Self;

    /// Square root, differentiable away from zero.
    fn sqrt(&self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }
}

impl Real for f64 {
    fn from_f64(c: f64) -> Self {
        c
    }

    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
}
