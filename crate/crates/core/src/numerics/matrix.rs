//! Dense complex matrices in row-major storage.
//!
//! Shapes are fixed at construction and internal arithmetic asserts on
//! conformability; the public operations of this crate validate dimensions at
//! their boundaries and surface typed errors instead.

use num_complex::Complex;

use super::NumericsError;
use crate::scalar::Real;

/// Dense complex matrix with row-major entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<R: Real> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<R>>,
}

impl<R: Real> ComplexMatrix<R> {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Complex::new(R::zero(), R::zero()); rows * cols],
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(R::one(), R::zero());
        }
        m
    }

    /// Build from a closure over `(row, col)`.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex<R>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from nested row vectors; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Complex<R>>>) -> Result<Self, NumericsError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(NumericsError::ShapeMismatch {
                context: "matrix requires at least one row and one column".into(),
            });
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(NumericsError::ShapeMismatch {
                context: "rows have differing lengths".into(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Build a square matrix from real entries given row by row.
    pub fn from_real(n: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), n * n, "expected n*n entries");
        Self::from_fn(n, n, |i, j| {
            Complex::new(R::from_f64_lossy(entries[i * n + j]), R::zero())
        })
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(diag: &[Complex<R>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diagonal_real(diag: &[R]) -> Self {
        let entries: Vec<Complex<R>> = diag.iter().map(|&d| Complex::new(d, R::zero())).collect();
        Self::diagonal(&entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex<R>] {
        &self.entries
    }

    /// Reject NaN or infinite entries.
    pub fn validate_finite(&self) -> Result<(), NumericsError> {
        for z in &self.entries {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(NumericsError::NonFinite);
            }
        }
        Ok(())
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.re == R::zero() && a.im == R::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(l, j)];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex<R>]) -> Vec<Complex<R>> {
        assert_eq!(self.cols, v.len(), "vector length must match columns");
        let mut out = vec![Complex::new(R::zero(), R::zero()); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex::new(R::zero(), R::zero());
            for j in 0..self.cols {
                acc = acc + self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = *a + *b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = *a - *b;
        }
        out
    }

    pub fn scale(&self, factor: Complex<R>) -> Self {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = *a * factor;
        }
        out
    }

    pub fn scale_real(&self, factor: R) -> Self {
        self.scale(Complex::new(factor, R::zero()))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> R {
        self.entries
            .iter()
            .fold(R::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Frobenius norm of `self - self^H`; zero for Hermitian matrices.
    pub fn hermitian_deviation(&self) -> R {
        assert!(self.is_square());
        let mut acc = R::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                acc = acc + d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Exact Hermitian part `(self + self^H) / 2`.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        let half = R::from_f64_lossy(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()).scale(half)
        })
    }

    pub fn column(&self, j: usize) -> Vec<Complex<R>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, v: &[Complex<R>]) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    /// Horizontal concatenation `[a_0 | a_1 | ...]`; blocks share a row count.
    pub fn hstack(blocks: &[&Self]) -> Self {
        assert!(!blocks.is_empty());
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows));
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.cols;
        }
        out
    }

    /// Flatten to a single vector in row-major order.
    pub fn vectorize(&self) -> Vec<Complex<R>> {
        self.entries.clone()
    }

    /// Largest entry magnitude; a cheap scale estimate.
    pub fn max_abs(&self) -> R {
        self.entries
            .iter()
            .fold(R::zero(), |acc, z| acc.max(z.norm()))
    }
}

impl<R: Real> std::ops::Index<(usize, usize)> for ComplexMatrix<R> {
    type Output = Complex<R>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl<R: Real> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<R> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<R: Real>(v: &[Complex<R>]) -> R {
    v.iter().fold(R::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Inner product, conjugate-linear in the first argument.
pub fn vec_dot<R: Real>(u: &[Complex<R>], v: &[Complex<R>]) -> Complex<R> {
    assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .fold(Complex::new(R::zero(), R::zero()), |acc, (a, b)| {
            acc + a.conj() * *b
        })
}

pub fn vec_sub<R: Real>(u: &[Complex<R>], v: &[Complex<R>]) -> Vec<Complex<R>> {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| *a - *b).collect()
}

pub fn vec_add<R: Real>(u: &[Complex<R>], v: &[Complex<R>]) -> Vec<Complex<R>> {
    assert_eq!(u.len(), v.len());
    u.iter().zip(v).map(|(a, b)| *a + *b).collect()
}

pub fn vec_scale<R: Real>(v: &[Complex<R>], factor: Complex<R>) -> Vec<Complex<R>> {
    v.iter().map(|a| *a * factor).collect()
}

pub fn vec_is_finite<R: Real>(v: &[Complex<R>]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
