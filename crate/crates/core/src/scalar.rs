//! Generic floating-point scalar used by the numerical core.

use nalgebra as na;
use num_traits as nt;

/// Floating-point scalar: `f32` or `f64`.
///
/// The bound combines nalgebra's `RealField` (eigensolvers, elementary
/// functions) with the `num-traits` conversions used to move counts and
/// `f64` constants into the working precision.
pub trait Scalar: Copy + nt::FromPrimitive + nt::ToPrimitive + na::RealField {}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` constant into the working scalar type.
#[inline]
pub fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("finite f64 constant")
}

/// Converts a count into the working scalar type.
#[inline]
pub fn count<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// Converts a scalar back to `f64` (used when feeding values to RNG streams
/// so that the drawn variates do not depend on the working precision).
#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().expect("scalar convertible to f64")
}
