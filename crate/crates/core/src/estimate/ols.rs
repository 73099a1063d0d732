use alloc::string::ToString;
use alloc::vec::Vec;

use super::frame::{ModelFrame, COLUMN_NAMES};
use crate::linalg::{Matrix, Qr};
use crate::{Error, Result};

/// Relative size of an `R` diagonal entry, against the norm of its column,
/// below which the column is treated as linearly dependent.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Coefficients and residuals of an OLS fit.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub beta: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// Full least-squares output, including `(XᵀX)⁻¹`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub beta: Vec<f64>,
    pub residuals: Vec<f64>,
    pub xtx_inv: Matrix,
    pub rss: f64,
}

impl LeastSquares {
    /// Classical (homoskedastic) standard error of coefficient `i`,
    /// with `rss / (n − k)` as the error variance.
    pub fn classical_se(&self, i: usize) -> f64 {
        let n = self.residuals.len();
        let k = self.beta.len();
        libm::sqrt(self.rss / (n - k) as f64 * self.xtx_inv[(i, i)])
    }
}

/// OLS by Householder QR. `names` label the columns in rank errors.
pub fn least_squares(x: &Matrix, y: &[f64], names: &[&str]) -> Result<LeastSquares> {
    let (n, k) = (x.rows(), x.cols());
    if y.len() != n {
        return Err(Error::InvalidArgument("regressand length differs from row count"));
    }
    if n <= k {
        return Err(Error::InsufficientData { needed: k + 1, got: n });
    }
    let qr = Qr::new(x)?;
    let bad = qr.deficient_columns(RANK_TOLERANCE);
    if !bad.is_empty() {
        return Err(Error::RankDeficient {
            columns: bad
                .iter()
                .map(|&j| names.get(j).map_or_else(|| alloc::format!("x{j}"), |s| s.to_string()))
                .collect(),
        });
    }
    let beta = qr.solve_least_squares(y);
    let fitted = x.mul_vec(&beta);
    let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let rss = residuals.iter().map(|e| e * e).sum();
    Ok(LeastSquares {
        beta,
        residuals,
        xtx_inv: qr.xtx_inverse(),
        rss,
    })
}

/// OLS of the frame's regressand on its five regressors.
pub fn ols(f: &ModelFrame) -> Result<OlsFit> {
    let ls = least_squares(&f.x, &f.y, &COLUMN_NAMES)?;
    Ok(OlsFit {
        beta: ls.beta,
        residuals: ls.residuals,
    })
}
