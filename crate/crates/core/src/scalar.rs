//! Scalar abstraction shared by the numerical kernels.
//!
//! Everything in the crate is written against [`Real`], so the same code runs
//! in `f32` for quick scans and `f64` for the reference numbers.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar usable by every routine in the crate.
pub trait Real:
    Float
    + NumAssign
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Every literal used in the crate is
    /// representable (possibly rounded) in `f32`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `i^n` for non-negative `n`, cycling through `1, i, -1, -i`.
#[inline]
pub fn i_pow<T: Real>(n: usize) -> Complex<T> {
    match n % 4 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// `exp(i * theta)`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// `(+1)^(l-1)` for bosons, `(-1)^(l-1)` for fermions, given `sign = ±1`.
#[inline]
pub fn loop_sign<T: Real>(sign: i32, l: usize) -> T {
    if sign < 0 && (l - 1) % 2 == 1 {
        -T::one()
    } else {
        T::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_pow_cycles() {
        let expected = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for n in 0..12 {
            let z: Complex<f64> = i_pow(n);
            assert_eq!((z.re, z.im), expected[n % 4]);
        }
    }

    #[test]
    fn loop_sign_alternates_for_fermions() {
        assert_eq!(loop_sign::<f64>(-1, 1), 1.0);
        assert_eq!(loop_sign::<f64>(-1, 2), -1.0);
        assert_eq!(loop_sign::<f64>(-1, 3), 1.0);
        assert_eq!(loop_sign::<f64>(1, 2), 1.0);
    }
}
