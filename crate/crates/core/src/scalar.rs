//! The real scalar type every numeric kernel in this crate is generic over.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// A real floating-point field usable as the base of complex matrices,
/// transfer matrices and the simplex tableau.
pub trait Scalar:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar (rounding for narrower types).
    fn lit(value: f64) -> Self;

    /// Widens to `f64` for reporting.
    fn to_f64_lossy(self) -> f64;

    /// Tolerance used when a caller does not supply one.
    fn default_tol() -> Self;

    /// Threshold below which a pivot candidate is treated as zero.
    fn pivot_tol() -> Self {
        Self::epsilon() * Self::lit(1024.0)
    }
}

impl Scalar for f64 {
    #[inline]
    fn lit(value: f64) -> Self {
        value
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }

    #[inline]
    fn default_tol() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    #[inline]
    fn lit(value: f64) -> Self {
        value as f32
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }

    #[inline]
    fn default_tol() -> Self {
        1e-5
    }
}
