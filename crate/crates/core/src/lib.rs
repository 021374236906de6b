//! Numerical laboratory for g-fusion frame families on finite-dimensional
//! complex spaces.
//!
//! The crate constructs frame families over integer windows, computes their
//! spectral frame bounds and canonical duals, solves the operator
//! representation problem `Theta_{k+1} = T Theta_k`, and checks boundedness,
//! kernel shift-invariance, window-growth divergence, linear independence and
//! perturbation stability on concrete operator families built from finite
//! cyclic groups.
//!
//! Everything is generic over the real scalar backing the complex
//! arithmetic; `f64` aliases are exported for the common case.

#![forbid(unsafe_code)]

pub mod fixtures;
pub mod frame;
pub mod framefile;
pub mod numerics;
pub mod perturbation;
pub mod representation;
pub mod sampling;
pub mod scalar;

pub use frame::{
    weighted_fusion_frame, DualFamily, FrameBounds, FrameError, FrameFamily, FrameMember,
    StructureChecks, Subspace, ValidationReport, WindowSemantics,
};
pub use numerics::{ComplexMatrix, NumericsError};
pub use scalar::{default_tolerance, Real};

/// Dense complex matrix over `f64`.
pub type Matrix64 = ComplexMatrix<f64>;
/// Dense complex matrix over `f32`.
pub type Matrix32 = ComplexMatrix<f32>;
/// Frame family over `f64`.
pub type Family64 = FrameFamily<f64>;
/// Frame family over `f32`.
pub type Family32 = FrameFamily<f32>;
