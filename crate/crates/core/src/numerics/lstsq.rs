//! Block least-squares solve used by the operator-representation machinery.

use super::matrix::ComplexMatrix;
use super::svd::pseudo_inverse;
use super::NumericsError;
use crate::scalar::{default_tolerance, Real};

/// Minimize `sum_k ||X * lhs_k - rhs_k||_F^2` over `X`.
///
/// All left-hand blocks must share a row count and each right-hand block must
/// be conformable with its partner. Returns the minimum-norm solution when
/// the horizontally stacked system is rank deficient; the rank decision uses
/// the crate default relative tolerance.
pub fn least_squares_solve<R: Real>(
    lhs_blocks: &[ComplexMatrix<R>],
    rhs_blocks: &[ComplexMatrix<R>],
) -> Result<ComplexMatrix<R>, NumericsError> {
    if lhs_blocks.is_empty() || lhs_blocks.len() != rhs_blocks.len() {
        return Err(NumericsError::ShapeMismatch {
            context: format!(
                "need matching non-empty block lists, got {} lhs and {} rhs",
                lhs_blocks.len(),
                rhs_blocks.len()
            ),
        });
    }
    let n = lhs_blocks[0].rows();
    let r = rhs_blocks[0].rows();
    for (k, (l, rh)) in lhs_blocks.iter().zip(rhs_blocks).enumerate() {
        l.validate_finite()?;
        rh.validate_finite()?;
        if l.rows() != n || rh.rows() != r || l.cols() != rh.cols() {
            return Err(NumericsError::ShapeMismatch {
                context: format!("block {k} is not conformable"),
            });
        }
    }

    let lhs_refs: Vec<&ComplexMatrix<R>> = lhs_blocks.iter().collect();
    let rhs_refs: Vec<&ComplexMatrix<R>> = rhs_blocks.iter().collect();
    let stacked_lhs = ComplexMatrix::hstack(&lhs_refs);
    let stacked_rhs = ComplexMatrix::hstack(&rhs_refs);

    // X L = R  =>  min-norm X = R L^+.
    let pinv = pseudo_inverse(&stacked_lhs, default_tolerance())?;
    Ok(stacked_rhs.mul(&pinv))
}

/// Frobenius residual `sqrt(sum_k ||X lhs_k - rhs_k||_F^2)` of a candidate.
pub fn least_squares_residual<R: Real>(
    x: &ComplexMatrix<R>,
    lhs_blocks: &[ComplexMatrix<R>],
    rhs_blocks: &[ComplexMatrix<R>],
) -> R {
    let mut acc = R::zero();
    for (l, rh) in lhs_blocks.iter().zip(rhs_blocks) {
        let d = x.mul(l).sub(rh).fro_norm();
        acc = acc + d * d;
    }
    acc.sqrt()
}
