//! Scalar abstraction for the simulation core.
//!
//! All state vectors and operators are parameterized over a real scalar so
//! the same code runs at `f32` or `f64`. The stated tolerances (1e-10 and
//! tighter) are only meaningful at `f64`; the `*64` aliases at the crate
//! root are the defaults used by the CLI and the test suite.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Floating-point scalar usable for amplitudes, widths and probabilities.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;

    /// Shorthand for converting small exact integers (dimensions, counts).
    fn from_usize(n: usize) -> Self {
        Self::from_f64(n as f64)
    }
}

impl Real for f32 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}
