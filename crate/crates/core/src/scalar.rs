//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar the library is generic over (`f32`, `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Euler–Mascheroni constant.
    const EULER_GAMMA: Self;

    /// Converts an `f64` literal. Panics only if the type cannot represent it,
    /// which never happens for the supported float types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn from_i64_lossy(n: i64) -> Self {
        Self::from_i64(n).expect("i64 representable")
    }

    /// `max(tol, 64 eps)`: keeps f64 thresholds meaningful at lower precision.
    #[inline]
    fn tol(tol: f64) -> Self {
        Self::lit(tol).max(Self::epsilon() * Self::lit(64.0))
    }

    /// log 2 − γ.
    #[inline]
    fn gamma_tilde() -> Self {
        Self::LN_2() - Self::EULER_GAMMA
    }
}

impl Real for f32 {
    const EULER_GAMMA: Self = 0.577_215_7;
}

impl Real for f64 {
    const EULER_GAMMA: Self = 0.577_215_664_901_532_9;
}

pub(crate) fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Relative difference `|a − b| / max(|a|, |b|, tiny)`.
pub fn rel_diff<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    let scale = a.norm().max(b.norm()).max(T::min_positive_value());
    (a - b).norm() / scale
}

/// Integer power of a complex number (negative exponents allowed).
pub(crate) fn cpowi<T: Real>(z: Complex<T>, n: i64) -> Complex<T> {
    let mut base = if n < 0 { z.inv() } else { z };
    let mut e = n.unsigned_abs();
    let mut acc = Complex::new(T::one(), T::zero());
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base;
        }
        base = base * base;
        e >>= 1;
    }
    acc
}
