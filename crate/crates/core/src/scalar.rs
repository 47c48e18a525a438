//! Scalar abstraction shared by the density-evolution and decoder code.
//!
//! Everything that only needs ordinary floating-point arithmetic is written
//! against [`Real`], so the same recursions run in `f64` (threshold work) or
//! `f32` (fast message passing). Numerically delicate routines such as the
//! rate integrals stay in `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; every supported type can represent the
    /// values we feed it (probabilities, LLRs) up to rounding.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is convertible to every Real")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().expect("Real is convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_f32() {
        let x = <f32 as Real>::of(1.25);
        assert_eq!(x.f64(), 1.25);
    }
}
