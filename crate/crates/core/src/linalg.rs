//! Small dense and banded linear algebra.
//!
//! Only what the estimators need: a row-major matrix, a banded Cholesky
//! factorisation for symmetric positive-definite band matrices, and a
//! Householder QR for least squares with rank detection.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major data. Panics if the length does not
    /// match the shape.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "shape mismatch");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |i| self[(i, j)])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `selfᵀ · v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, v.len(), "dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn max_abs_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Symmetric band matrix stored by its lower band.
///
/// `band[i * (p + 1) + d]` holds `A[i][i - d]` for `d = 0..=p`, where `p` is
/// the half bandwidth. Entries with `i < d` are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBand {
    n: usize,
    p: usize,
    band: Vec<f64>,
}

impl SymmetricBand {
    pub fn zeros(n: usize, half_bandwidth: usize) -> Self {
        Self {
            n,
            p: half_bandwidth,
            band: vec![0.0; n * (half_bandwidth + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn half_bandwidth(&self) -> usize {
        self.p
    }

    /// `A[i][j]` for any `i, j`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.p {
            0.0
        } else {
            self.band[hi * (self.p + 1) + d]
        }
    }

    /// Sets `A[i][j]` and `A[j][i]`. Panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        assert!(d <= self.p, "entry outside the band");
        self.band[hi * (self.p + 1) + d] = v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.p);
                let hi = (i + self.p).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Cholesky factor `L` with `A = L Lᵀ`, stored in the same band layout.
    /// O(n p²).
    pub fn cholesky(&self) -> Result<BandCholesky> {
        let (n, p) = (self.n, self.p);
        let w = p + 1;
        let mut l = vec![0.0; n * w];
        for i in 0..n {
            let j0 = i.saturating_sub(p);
            for j in j0..=i {
                // A[i][j] - sum_k L[i][k] L[j][k] over the shared band.
                let mut s = self.band[i * w + (i - j)];
                let k0 = i.saturating_sub(p).max(j.saturating_sub(p));
                for k in k0..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                if i == j {
                    if !(s > 0.0) {
                        return Err(Error::NotPositiveDefinite { row: i, pivot: s });
                    }
                    l[i * w] = libm::sqrt(s);
                } else {
                    l[i * w + (i - j)] = s / l[j * w];
                }
            }
        }
        Ok(BandCholesky { n, p, l })
    }
}

/// Banded Cholesky factor produced by [`SymmetricBand::cholesky`].
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    p: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    /// Solves `A x = b` by forward and back substitution.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let w = self.p + 1;
        let mut y = b.to_vec();
        for i in 0..self.n {
            let mut s = y[i];
            for k in i.saturating_sub(self.p)..i {
                s -= self.l[i * w + (i - k)] * y[k];
            }
            y[i] = s / self.l[i * w];
        }
        for i in (0..self.n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + self.p + 1).min(self.n) {
                s -= self.l[k * w + (k - i)] * y[k];
            }
            y[i] = s / self.l[i * w];
        }
        y
    }
}

/// Householder QR of a tall matrix, `X = Q R`.
#[derive(Debug, Clone)]
pub struct Qr {
    rows: usize,
    cols: usize,
    /// Householder vectors below the diagonal, `R` on and above it.
    qr: Matrix,
    rdiag: Vec<f64>,
    col_norms: Vec<f64>,
}

impl Qr {
    pub fn new(x: &Matrix) -> Result<Self> {
        let (m, n) = (x.rows(), x.cols());
        if m < n {
            return Err(Error::InvalidArgument("QR needs at least as many rows as columns"));
        }
        let col_norms = (0..n)
            .map(|j| libm::sqrt(x.column(j).map(|v| v * v).sum()))
            .collect();
        let mut a = x.clone();
        let mut rdiag = vec![0.0; n];
        for k in 0..n {
            let mut norm = 0.0f64;
            for i in k..m {
                norm = libm::hypot(norm, a[(i, k)]);
            }
            if norm != 0.0 {
                if a[(k, k)] < 0.0 {
                    norm = -norm;
                }
                for i in k..m {
                    a[(i, k)] /= norm;
                }
                a[(k, k)] += 1.0;
                for j in k + 1..n {
                    let mut s = 0.0;
                    for i in k..m {
                        s += a[(i, k)] * a[(i, j)];
                    }
                    s = -s / a[(k, k)];
                    for i in k..m {
                        let v = a[(i, k)];
                        a[(i, j)] += s * v;
                    }
                }
            }
            rdiag[k] = -norm;
        }
        Ok(Self {
            rows: m,
            cols: n,
            qr: a,
            rdiag,
            col_norms,
        })
    }

    /// Columns whose diagonal of `R` is negligible relative to the norm of
    /// the original column. An all-zero column is always flagged.
    pub fn deficient_columns(&self, rel_tol: f64) -> Vec<usize> {
        (0..self.cols)
            .filter(|&j| self.rdiag[j].abs() <= rel_tol * self.col_norms[j])
            .collect()
    }

    /// `Qᵀ y`.
    pub fn qt_mul(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.rows);
        let mut v = y.to_vec();
        for k in 0..self.cols {
            if self.rdiag[k] == 0.0 {
                continue;
            }
            let mut s = 0.0;
            for (i, vi) in v.iter().enumerate().skip(k) {
                s += self.qr[(i, k)] * vi;
            }
            s = -s / self.qr[(k, k)];
            for (i, vi) in v.iter_mut().enumerate().skip(k) {
                *vi += s * self.qr[(i, k)];
            }
        }
        v
    }

    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.rdiag[i]
        } else if i < j {
            self.qr[(i, j)]
        } else {
            0.0
        }
    }

    /// Least-squares coefficients. Assumes full column rank.
    pub fn solve_least_squares(&self, y: &[f64]) -> Vec<f64> {
        let qty = self.qt_mul(y);
        let n = self.cols;
        let mut beta = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = qty[i];
            for j in i + 1..n {
                s -= self.r(i, j) * beta[j];
            }
            beta[i] = s / self.rdiag[i];
        }
        beta
    }

    /// `(XᵀX)⁻¹ = R⁻¹ R⁻ᵀ`. Assumes full column rank.
    pub fn xtx_inverse(&self) -> Matrix {
        let n = self.cols;
        // Upper-triangular inverse of R, column by column.
        let mut rinv = Matrix::zeros(n, n);
        for j in 0..n {
            rinv[(j, j)] = 1.0 / self.rdiag[j];
            for i in (0..j).rev() {
                let mut s = 0.0;
                for k in i + 1..=j {
                    s += self.r(i, k) * rinv[(k, j)];
                }
                rinv[(i, j)] = -s / self.rdiag[i];
            }
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let s: f64 = (i.max(j)..n).map(|k| rinv[(i, k)] * rinv[(j, k)]).sum();
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }
}
