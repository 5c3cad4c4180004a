//! Scalar abstraction shared by every module.
//!
//! All algebra in this crate is written against [`Real`], so the same code
//! runs in `f64` (the default used by the CLI and the property suites) and in
//! `f32`. Coefficients are always `Complex<T>`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar usable as the real part of polynomial coefficients.
pub trait Real:
    Float
    + NumAssign
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64`, used for ordering and reporting.
    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(Self::infinity)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex coefficient type.
pub type C<T> = Complex<T>;

pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

pub(crate) fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

pub(crate) fn creal<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

pub(crate) fn ci<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::one())
}

/// `n!` as a scalar (saturates to infinity for huge `n`).
pub fn factorial<T: Real>(n: u32) -> T {
    (1..=n).fold(T::one(), |acc, k| acc * T::from_u32(k).unwrap())
}

/// Binomial coefficient `C(n, k)` as a scalar.
pub fn binomial<T: Real>(n: u32, k: u32) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, j| {
        acc * T::from_u32(n - j).unwrap() / T::from_u32(j + 1).unwrap()
    })
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling<T: Real>(n: u32, k: u32) -> T {
    if k > n {
        return T::zero();
    }
    (0..k).fold(T::one(), |acc, j| acc * T::from_u32(n - j).unwrap())
}
