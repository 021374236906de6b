//! Seeded random sampling for probe vectors and random fixtures.
//!
//! Every consumer threads an explicit seed through `rng_from_seed`, so test
//! suites and CLI reports are reproducible bit for bit.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::numerics::{vec_dot, vec_norm, ComplexMatrix};
use crate::scalar::Real;

/// Deterministic, portable generator for a given seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (unit variance) via Box-Muller.
pub fn complex_gaussian<R: Real>(rng: &mut ChaCha8Rng) -> Complex<R> {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    let radius = (-2.0 * u1.ln()).sqrt() / 2f64.sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    Complex::new(
        R::from_f64_lossy(radius * angle.cos()),
        R::from_f64_lossy(radius * angle.sin()),
    )
}

/// Uniform draw from `[lo, hi]`.
pub fn uniform_in<R: Real>(rng: &mut ChaCha8Rng, lo: R, hi: R) -> R {
    let t = R::from_f64_lossy(rng.gen::<f64>());
    lo + (hi - lo) * t
}

/// Random unit vector in `C^n`.
pub fn random_unit_vector<R: Real>(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex<R>> {
    loop {
        let v: Vec<Complex<R>> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = vec_norm(&v);
        if norm > R::from_f64_lossy(1e-6) {
            return v.iter().map(|z| z.unscale(norm)).collect();
        }
    }
}

/// Random complex coefficient vector with independent Gaussian entries.
pub fn random_coefficients<R: Real>(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex<R>> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Matrix with `cols` orthonormal random columns in `C^rows`.
///
/// Modified Gram-Schmidt with a second orthogonalization pass; columns that
/// collapse (probability zero) are redrawn.
pub fn random_orthonormal_columns<R: Real>(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
) -> ComplexMatrix<R> {
    assert!(
        cols <= rows,
        "cannot fit {cols} orthonormal columns in C^{rows}"
    );
    let mut basis: Vec<Vec<Complex<R>>> = Vec::with_capacity(cols);
    while basis.len() < cols {
        let mut v: Vec<Complex<R>> = (0..rows).map(|_| complex_gaussian(rng)).collect();
        for _ in 0..2 {
            for b in &basis {
                let proj = vec_dot(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = *x - *y * proj;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm <= R::from_f64_lossy(1e-6) {
            continue;
        }
        basis.push(v.iter().map(|z| z.unscale(norm)).collect());
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i])
}

/// Random unitary matrix of order `n`.
pub fn random_unitary<R: Real>(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix<R> {
    random_orthonormal_columns(rng, n, n)
}
