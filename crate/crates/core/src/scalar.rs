//! Scalar abstraction: every numeric routine in this crate is generic over a
//! floating-point type so the same code drives `f32` and `f64` instantiations.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar usable throughout the library (`f32` or `f64`).
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {
    /// Lossless widening for reporting and mixed-precision helpers.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar converts to f64")
    }

    /// Shorthand for converting an `f64` constant into the scalar type.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant converts to scalar")
    }

    /// Conversion from a count.
    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize converts to scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        assert_eq!(f64::of(1.5), 1.5);
        assert_eq!(f32::of(0.25), 0.25f32);
        assert_eq!(f64::of_usize(7), 7.0);
        assert_eq!(2.5f64.as_f64(), 2.5);
    }
}
