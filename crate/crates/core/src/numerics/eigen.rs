//! Hermitian eigendecomposition by the cyclic complex Jacobi method.
//!
//! Jacobi iteration keeps the working matrix unitarily similar to the input,
//! so eigenvalues carry an absolute error on the order of machine epsilon
//! times the input norm. That headroom is what lets the frame-bound and
//! spectral checks downstream run at 1e-9 relative tolerances.

use super::matrix::ComplexMatrix;
use super::rotation::{rotation_for, ComplexRotation};
use super::NumericsError;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen<R: Real> {
    pub values: Vec<R>,
    /// Unitary matrix whose `j`-th column is the eigenvector of `values[j]`.
    pub vectors: ComplexMatrix<R>,
}

/// Full Hermitian eigendecomposition.
///
/// `sym_tol` gates the precondition: the input must satisfy
/// `||m - m^H||_F <= sym_tol * ||m||_F`. The decomposition itself runs on the
/// exact Hermitian part of the input.
pub fn hermitian_eigen<R: Real>(
    m: &ComplexMatrix<R>,
    sym_tol: R,
) -> Result<HermitianEigen<R>, NumericsError> {
    m.validate_finite()?;
    if !m.is_square() {
        return Err(NumericsError::ShapeMismatch {
            context: format!(
                "eigendecomposition requires a square matrix, got {}x{}",
                m.rows(),
                m.cols()
            ),
        });
    }
    let scale = m.fro_norm();
    let deviation = m.hermitian_deviation();
    if deviation > sym_tol * scale {
        return Err(NumericsError::NotHermitian {
            deviation: deviation.as_f64(),
            tol: (sym_tol * scale).as_f64(),
        });
    }

    let n = m.rows();
    let hermitian = m.hermitian_part();
    let mut a = hermitian.clone();
    let mut v = ComplexMatrix::identity(n);

    if scale > R::zero() {
        // Rotate any off-diagonal entry above an absolute floor tied to the
        // input scale; remaining mass after convergence is O(eps * scale).
        let floor = R::epsilon() * scale / R::from_f64_lossy(n as f64);
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut rotations = 0usize;
            for p in 0..n.saturating_sub(1) {
                for q in (p + 1)..n {
                    let g = a[(p, q)];
                    if g.norm() <= floor {
                        continue;
                    }
                    rotations += 1;
                    let rot = rotation_for(a[(p, p)].re, a[(q, q)].re, g);
                    apply_two_sided(&mut a, p, q, &rot);
                    apply_right(&mut v, p, q, &rot);
                }
            }
            if rotations == 0 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(NumericsError::ConvergenceFailure {
                context: "Jacobi eigendecomposition did not converge".into(),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<R> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let values: Vec<R> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    // Internal eigenpair residual gate against the Hermitian part (the
    // operand actually decomposed; the precondition bounds its distance from
    // the input). The epsilon floor keeps the check meaningful for f32.
    let residual_tol = R::from_f64_lossy(1e-10).max(R::epsilon() * R::from_f64_lossy(256.0));
    for (j, &lambda) in values.iter().enumerate() {
        let col = vectors.column(j);
        let mv = hermitian.mul_vec(&col);
        let mut acc = R::zero();
        for (i, x) in mv.iter().enumerate() {
            let d = *x - col[i].scale(lambda);
            acc = acc + d.norm_sqr();
        }
        if acc.sqrt() > residual_tol * scale {
            return Err(NumericsError::ConvergenceFailure {
                context: format!(
                    "eigenpair residual {:e} exceeds {:e}",
                    acc.sqrt().as_f64(),
                    (residual_tol * scale).as_f64()
                ),
            });
        }
    }

    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues<R: Real>(
    m: &ComplexMatrix<R>,
    sym_tol: R,
) -> Result<Vec<R>, NumericsError> {
    hermitian_eigen(m, sym_tol).map(|e| e.values)
}

/// Inverse of a Hermitian positive-definite matrix via its eigensystem.
///
/// Fails with `Singular` when the smallest eigenvalue does not exceed
/// `rel_tol` times the largest in magnitude.
pub fn hermitian_inverse<R: Real>(
    m: &ComplexMatrix<R>,
    sym_tol: R,
    rel_tol: R,
) -> Result<ComplexMatrix<R>, NumericsError> {
    let eig = hermitian_eigen(m, sym_tol)?;
    let max_abs = eig
        .values
        .iter()
        .fold(R::zero(), |acc, &l| acc.max(l.abs()));
    let min = eig.values.first().copied().unwrap_or_else(R::zero);
    if max_abs == R::zero() || min <= rel_tol * max_abs {
        return Err(NumericsError::Singular {
            ratio: if max_abs == R::zero() {
                0.0
            } else {
                (min / max_abs).as_f64()
            },
        });
    }
    let n = m.rows();
    let q = &eig.vectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for (j, &lambda) in eig.values.iter().enumerate() {
        let col = q.column(j);
        let inv = R::one() / lambda;
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = out[(r, c)] + col[r] * col[c].conj().scale(inv);
            }
        }
    }
    Ok(out)
}

/// `a <- J^H a J` on the (p, q) plane.
fn apply_two_sided<R: Real>(
    a: &mut ComplexMatrix<R>,
    p: usize,
    q: usize,
    rot: &ComplexRotation<R>,
) {
    apply_right(a, p, q, rot);
    // Left multiplication by J^H mirrors the column update on rows.
    let n = a.cols();
    for j in 0..n {
        let rp = a[(p, j)];
        let rq = a[(q, j)];
        a[(p, j)] = rp.scale(rot.c) - rq * rot.phase.scale(rot.s);
        a[(q, j)] = rp.scale(rot.s) + rq * rot.phase.scale(rot.c);
    }
}

/// `a <- a J` on columns p and q, where
/// `J = [[c, s], [-s*conj(phase), c*conj(phase)]]`.
pub(super) fn apply_right<R: Real>(
    a: &mut ComplexMatrix<R>,
    p: usize,
    q: usize,
    rot: &ComplexRotation<R>,
) {
    let rows = a.rows();
    let phase_conj = rot.phase.conj();
    for i in 0..rows {
        let cp = a[(i, p)];
        let cq = a[(i, q)];
        a[(i, p)] = cp.scale(rot.c) - cq * phase_conj.scale(rot.s);
        a[(i, q)] = cp.scale(rot.s) + cq * phase_conj.scale(rot.c);
    }
}
