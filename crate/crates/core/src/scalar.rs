//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating point scalar: `f32` or `f64`.
///
/// Amplitudes are `Complex<T>` over this type. All tolerances quoted in the
/// tests are for `f64`; `f32` walks work but drift at roughly `1e-6`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Tolerance for "unit norm" checks on states: `1e-10` in `f64`, looser in
/// `f32` where that is below machine precision.
pub(crate) fn unit_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(100.0))
}

/// Tolerance for accepting a matrix as a coin: `1e-8` in `f64`.
pub(crate) fn coin_tolerance<T: Real>() -> T {
    T::lit(1e-8).max(T::epsilon() * T::lit(100.0))
}
