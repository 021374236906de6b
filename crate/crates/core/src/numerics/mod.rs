//! Dense complex linear-algebra kernels: matrices, Hermitian
//! eigendecomposition, SVD, rank and nullspace queries, and block least
//! squares. No frame-theory semantics live here.
//!
//! All operations are pure functions of their inputs and safe to evaluate
//! from multiple threads.

mod eigen;
mod lstsq;
pub mod matrix;
mod rotation;
mod svd;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, hermitian_inverse, HermitianEigen};
pub use lstsq::{least_squares_residual, least_squares_solve};
pub use matrix::{vec_add, vec_dot, vec_is_finite, vec_norm, vec_scale, vec_sub, ComplexMatrix};
pub use svd::{matrix_rank, nullspace_basis, operator_norm, pseudo_inverse, svd, Svd};

/// Errors surfaced by the linear-algebra kernels.
#[derive(Debug, thiserror::Error)]
pub enum NumericsError {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix is not Hermitian: deviation {deviation:e} exceeds {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },
    #[error("{context}")]
    ConvergenceFailure { context: String },
    #[error("matrix is numerically singular (eigenvalue ratio {ratio:e})")]
    Singular { ratio: f64 },
}
