//! Floating point scalar used for every real-valued quantity (entropy, code
//! lengths, path lengths, loads). Geometry never goes through this trait; it
//! stays on exact fixed point.

use std::fmt::{Debug, Display};
use std::iter::Sum;

/// f32 or f64
pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an unsigned integer scaled by `2^-frac_bits`.
    fn from_scaled_u128(value: u128, frac_bits: i32) -> Self {
        // u128 -> f64 rounds once; the power of two is exact.
        let v = value as f64 * 2f64.powi(-frac_bits);
        Self::from_f64(v).expect("finite")
    }

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}
