//! Scalar abstraction for the real field underlying all matrix algebra.
//!
//! Everything in this crate is generic over [`Scalar`], so the same code runs
//! in `f64` (the default for all quantitative work) or `f32`. Concrete type
//! aliases live at the crate root.

use nalgebra::{Complex, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar type the crate is generic over: `f32` or `f64`.
pub trait Scalar: RealField + FromPrimitive + ToPrimitive + Copy {}

impl<T> Scalar for T where T: RealField + FromPrimitive + ToPrimitive + Copy {}

/// Shorthand for lifting an `f64` literal (tolerances, constants) into `T`.
#[inline]
pub fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal not representable in scalar type")
}

/// Lossy readback for error reporting.
#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// |z| without requiring `num_traits::Float` on the component type.
#[inline]
pub fn cabs<T: Scalar>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

/// arg z ∈ (-π, π].
#[inline]
pub fn carg<T: Scalar>(z: Complex<T>) -> T {
    z.im.atan2(z.re)
}

/// r e^{iθ}.
#[inline]
pub fn polar<T: Scalar>(r: T, theta: T) -> Complex<T> {
    Complex::new(r * theta.cos(), r * theta.sin())
}
