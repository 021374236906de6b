//! Scalar abstraction for the numerical kernels.
//!
//! Everything in this crate is generic over the real scalar backing the
//! complex arithmetic. `f64` is the working precision for which the
//! documented tolerances are calibrated; `f32` instantiations are supported
//! for exactly representable fixtures (permutations, projections, dyadic
//! scalings).

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar type usable as the base field of the complex matrices.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` constant into the scalar type.
    ///
    /// Tolerances and fixture parameters are specified as `f64`; the
    /// conversion is lossy for `f32` but every constant used by the crate is
    /// in range.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("constant representable in scalar type")
    }

    /// Widen to `f64`, e.g. for reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Default relative tolerance for rank, nullspace and frame-ness decisions.
pub fn default_tolerance<R: Real>() -> R {
    R::from_f64_lossy(1e-9)
}
