use alloc::vec::Vec;

use super::frame::{ModelFrame, COLUMN_NAMES};
use crate::linalg::{Matrix, Qr};
use crate::{Error, Result};

/// Newey–West rule of thumb, `floor(4 · (n / 100)^(2/9))`.
pub fn default_bandwidth(n: usize) -> usize {
    libm::floor(4.0 * libm::pow(n as f64 / 100.0, 2.0 / 9.0)) as usize
}

/// Bartlett kernel weight `1 − ℓ / (B + 1)` for `ℓ ≤ B`, zero beyond.
pub fn bartlett_weight(lag: usize, bandwidth: usize) -> f64 {
    if lag > bandwidth {
        0.0
    } else {
        1.0 - lag as f64 / (bandwidth as f64 + 1.0)
    }
}

/// Sandwich `A S A` with `A = (XᵀX)⁻¹` and
///
/// ```text
/// S = Σ_t e_t² x_t x_tᵀ + Σ_{ℓ=1..B} w_ℓ Σ_t e_t e_{t−ℓ} (x_t x_{t−ℓ}ᵀ + x_{t−ℓ} x_tᵀ)
/// ```
///
/// With `B = 0` this is White's heteroskedasticity-consistent estimator.
pub fn hac_covariance(x: &Matrix, residuals: &[f64], bandwidth: usize, xtx_inv: &Matrix) -> Matrix {
    let (n, k) = (x.rows(), x.cols());
    assert_eq!(residuals.len(), n, "one residual per row");
    // Score vectors u_t = e_t x_t.
    let scores: Vec<f64> = (0..n)
        .flat_map(|t| x.row(t).iter().map(move |v| v * residuals[t]))
        .collect();
    let u = |t: usize| &scores[t * k..(t + 1) * k];
    let mut s = Matrix::zeros(k, k);
    for t in 0..n {
        let ut = u(t);
        for i in 0..k {
            for j in 0..k {
                s[(i, j)] += ut[i] * ut[j];
            }
        }
    }
    for lag in 1..=bandwidth.min(n.saturating_sub(1)) {
        let w = bartlett_weight(lag, bandwidth);
        let mut gamma = Matrix::zeros(k, k);
        for t in lag..n {
            let (a, b) = (u(t), u(t - lag));
            for i in 0..k {
                for j in 0..k {
                    gamma[(i, j)] += a[i] * b[j];
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                s[(i, j)] += w * (gamma[(i, j)] + gamma[(j, i)]);
            }
        }
    }
    let mut cov = xtx_inv.matmul(&s).matmul(xtx_inv);
    for i in 0..k {
        for j in 0..i {
            let m = 0.5 * (cov[(i, j)] + cov[(j, i)]);
            cov[(i, j)] = m;
            cov[(j, i)] = m;
        }
    }
    cov
}

/// Newey–West covariance of the frame's OLS coefficients.
pub fn newey_west(f: &ModelFrame, residuals: &[f64], bandwidth: usize) -> Result<Matrix> {
    if residuals.len() != f.nobs() {
        return Err(Error::InvalidArgument("residual length differs from frame rows"));
    }
    let qr = Qr::new(&f.x)?;
    let bad = qr.deficient_columns(super::ols::RANK_TOLERANCE);
    if !bad.is_empty() {
        return Err(Error::RankDeficient {
            columns: bad.iter().map(|&j| COLUMN_NAMES[j].into()).collect(),
        });
    }
    Ok(hac_covariance(&f.x, residuals, bandwidth, &qr.xtx_inverse()))
}
