//! Singular value decomposition by one-sided Jacobi, plus the rank,
//! nullspace, operator-norm and pseudoinverse routines built on it.
//!
//! One-sided Jacobi orthogonalizes the columns of the input with unitary
//! right rotations. Small singular values come out with high relative
//! accuracy, which is what the rank and nullspace decisions at 1e-9 relative
//! tolerance rely on. The accumulated rotation product is a full unitary
//! basis of the domain, so nullspace vectors fall out of the same pass.

use num_complex::Complex;

use super::eigen::apply_right;
use super::matrix::ComplexMatrix;
use super::rotation::rotation_for;
use super::NumericsError;
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Decomposition `a = u * diag(sigma) * v^H`.
///
/// `v` is a full `cols x cols` unitary matrix. `sigma` holds the column
/// spectrum in descending order, padded with zeros up to `cols` when the
/// matrix is wide; entries beyond `min(rows, cols)` are always zero. Columns
/// of `u` matching (numerically) zero singular values are zero.
#[derive(Clone, Debug)]
pub struct Svd<R: Real> {
    pub u: ComplexMatrix<R>,
    pub sigma: Vec<R>,
    pub v: ComplexMatrix<R>,
}

/// One-sided Jacobi SVD.
pub fn svd<R: Real>(m: &ComplexMatrix<R>) -> Result<Svd<R>, NumericsError> {
    m.validate_finite()?;
    let rows = m.rows();
    let cols = m.cols();
    let mut w = m.clone();
    let mut v = ComplexMatrix::identity(cols);
    let eps = R::epsilon();
    // Columns below this norm are rotation roundoff, not signal; without the
    // floor, noise columns of a wide matrix stay mutually correlated and the
    // sweep never settles.
    let zero_floor_sq = {
        let f = eps * m.fro_norm();
        f * f
    };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotations = 0usize;
        for p in 0..cols.saturating_sub(1) {
            for q in (p + 1)..cols {
                let mut alpha = R::zero();
                let mut gamma = R::zero();
                let mut g = Complex::new(R::zero(), R::zero());
                for i in 0..rows {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    alpha = alpha + wp.norm_sqr();
                    gamma = gamma + wq.norm_sqr();
                    g = g + wp.conj() * wq;
                }
                if alpha <= zero_floor_sq || gamma <= zero_floor_sq {
                    continue;
                }
                if g.norm() <= eps * (alpha * gamma).sqrt() {
                    continue;
                }
                rotations += 1;
                let rot = rotation_for(alpha, gamma, g);
                apply_right(&mut w, p, q, &rot);
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
            context: "one-sided Jacobi SVD did not converge".into(),
        });
    }

    let mut norms: Vec<R> = (0..cols)
        .map(|j| {
            (0..rows)
                .fold(R::zero(), |acc, i| acc + w[(i, j)].norm_sqr())
                .sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));
    norms = order.iter().map(|&j| norms[j]).collect();

    let sigma_max = norms.first().copied().unwrap_or_else(R::zero);
    let drop = sigma_max * eps;
    let mut u = ComplexMatrix::zeros(rows, cols);
    for (slot, &j) in order.iter().enumerate() {
        if norms[slot] > drop {
            let inv = R::one() / norms[slot];
            for i in 0..rows {
                u[(i, slot)] = w[(i, j)].scale(inv);
            }
        }
    }
    let v_sorted = ComplexMatrix::from_fn(cols, cols, |i, j| v[(i, order[j])]);

    Ok(Svd {
        u,
        sigma: norms,
        v: v_sorted,
    })
}

/// Largest singular value.
pub fn operator_norm<R: Real>(m: &ComplexMatrix<R>) -> Result<R, NumericsError> {
    Ok(svd(m)?.sigma.first().copied().unwrap_or_else(R::zero))
}

/// Number of singular values exceeding `tol` times the largest one.
pub fn matrix_rank<R: Real>(m: &ComplexMatrix<R>, tol: R) -> Result<usize, NumericsError> {
    let sigma = svd(m)?.sigma;
    let sigma_max = sigma.first().copied().unwrap_or_else(R::zero);
    let cut = tol * sigma_max;
    Ok(sigma.iter().filter(|&&s| s > cut).count())
}

/// Orthonormal basis of `{v : ||m v|| <= tol * ||m|| * ||v||}`.
///
/// Empty when the kernel is trivial; the full standard basis for the zero
/// matrix.
pub fn nullspace_basis<R: Real>(
    m: &ComplexMatrix<R>,
    tol: R,
) -> Result<Vec<Vec<Complex<R>>>, NumericsError> {
    let dec = svd(m)?;
    let sigma_max = dec.sigma.first().copied().unwrap_or_else(R::zero);
    let cut = tol * sigma_max;
    let mut basis = Vec::new();
    for (j, &s) in dec.sigma.iter().enumerate() {
        if s <= cut {
            basis.push(dec.v.column(j));
        }
    }
    Ok(basis)
}

/// Moore-Penrose pseudoinverse with relative rank cutoff `tol`.
pub fn pseudo_inverse<R: Real>(
    m: &ComplexMatrix<R>,
    tol: R,
) -> Result<ComplexMatrix<R>, NumericsError> {
    let dec = svd(m)?;
    let sigma_max = dec.sigma.first().copied().unwrap_or_else(R::zero);
    let cut = tol * sigma_max;
    let mut out = ComplexMatrix::zeros(m.cols(), m.rows());
    for (j, &s) in dec.sigma.iter().enumerate() {
        if s <= cut || s == R::zero() {
            continue;
        }
        let inv = R::one() / s;
        let vj = dec.v.column(j);
        let uj = dec.u.column(j);
        for r in 0..m.cols() {
            for c in 0..m.rows() {
                out[(r, c)] = out[(r, c)] + vj[r] * uj[c].conj().scale(inv);
            }
        }
    }
    Ok(out)
}
