//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("f64 literal representable in T")
}

/// Converts an integer count into `T`.
#[inline]
pub fn from_usize<T: Real>(v: usize) -> T {
    T::from_usize(v).expect("usize representable in T")
}

/// Lossy widening used for error payloads and reports.
#[inline]
pub fn to_f64<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `log(1 + u)` for complex `u`, accurate when `|u|` is small.
pub fn clog1p<T: Real>(u: Complex<T>) -> Complex<T> {
    let w = Complex::new(T::one(), T::zero()) + u;
    let d = w - Complex::new(T::one(), T::zero());
    if d == Complex::new(T::zero(), T::zero()) {
        return u;
    }
    w.ln() * (u / d)
}
