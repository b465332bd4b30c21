//! Floating-point scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar usable for operator coefficients and dense matrices (f32 or f64).
pub trait Real:
    RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + FromStr + Default + Debug + Display + Send + Sync
{
    /// Coefficients whose magnitude does not exceed this are pruned from operator sums.
    fn prune_epsilon() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn deg_to_rad(self) -> Self {
        self * Self::PI() / Self::lit(180.0)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn prune_epsilon() -> Self {
        1e-14
    }
}

impl Real for f32 {
    fn prune_epsilon() -> Self {
        1e-6
    }
}

pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

/// `i^k` as a complex number.
pub(crate) fn i_pow<T: Real>(k: u8) -> Complex<T> {
    match k % 4 {
        0 => c(T::one(), T::zero()),
        1 => c(T::zero(), T::one()),
        2 => c(-T::one(), T::zero()),
        _ => c(T::zero(), -T::one()),
    }
}

pub(crate) fn abs<T: Real>(z: Complex<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}
