//! Scalar abstraction shared by every numerical module.
//!
//! All routines are written against [`Real`] so they can be run in `f32` for
//! quick exploration or `f64` for the reported numbers. Tolerances are given
//! in `f64` literals and converted with [`Real::lit`]; in `f32` they saturate
//! at machine precision because every iterative loop also stops when it can no
//! longer make progress.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar used throughout the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts a count or index.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("integer representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

/// `x^n` by binary exponentiation. Keeps the sign of odd powers of negative
/// arguments exact, which `powf` does not.
#[inline]
pub fn powi<T: Real>(x: T, n: u32) -> T {
    let mut base = x;
    let mut exp = n;
    let mut acc = T::one();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        exp >>= 1;
    }
    acc
}

/// `x^p` for `x > 0` through the log domain.
#[inline]
pub fn pow_pos<T: Real>(x: T, p: T) -> T {
    (p * x.ln()).exp()
}
