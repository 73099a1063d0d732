//! Unit-root tests with an intercept: augmented Dickey–Fuller with SIC lag
//! selection and Phillips–Perron with a Bartlett long-run variance.
//!
//! Both report MacKinnon (1994) asymptotic p-values for the constant-only
//! case.

use alloc::vec::Vec;

use crate::dist::normal_cdf;
use crate::estimate::{default_bandwidth, least_squares, LeastSquares};
use crate::linalg::Matrix;
use crate::series::QuarterlySeries;
use crate::{Error, Result};

/// Largest augmentation lag considered by [`adf`].
pub const DEFAULT_MAX_LAG: usize = 13;

/// Shortest series [`pp`] accepts.
pub const PP_MIN_LEN: usize = 10;

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Deterministic {
    #[default]
    Intercept,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnitRootResult {
    pub statistic: f64,
    pub p_value: f64,
    /// Augmentation lag (ADF) or kernel bandwidth (PP).
    pub lags_or_bandwidth: usize,
    /// Observations in the test regression.
    pub nobs: usize,
    pub deterministic: Deterministic,
}

/// Schwarz criterion `log(RSS/n) + k·log(n)/n`.
pub fn sic(residuals: &[f64], k: usize, n: usize) -> f64 {
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let n = n as f64;
    libm::log(rss / n) + k as f64 * libm::log(n) / n
}

const TAU_MAX: f64 = 2.74;
const TAU_MIN: f64 = -18.83;
const TAU_STAR: f64 = -1.61;
const SMALL_P: [f64; 3] = [2.1659, 1.4412, 0.038269];
const LARGE_P: [f64; 4] = [1.7339, 0.93202, -0.12745, -0.010368];

/// MacKinnon approximate p-value for a Dickey–Fuller type t-statistic,
/// constant only, one variable.
pub fn mackinnon_p_value(stat: f64) -> f64 {
    if stat.is_nan() {
        return f64::NAN;
    }
    if stat > TAU_MAX {
        return 1.0;
    }
    if stat < TAU_MIN {
        return 0.0;
    }
    let coefs: &[f64] = if stat <= TAU_STAR { &SMALL_P } else { &LARGE_P };
    let poly = coefs.iter().rev().fold(0.0, |acc, c| acc * stat + c);
    normal_cdf(poly)
}

fn check_not_constant(y: &[f64]) -> Result<()> {
    if y.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::Degenerate("constant series"));
    }
    Ok(())
}

fn diffs(y: &[f64]) -> Vec<f64> {
    y.windows(2).map(|w| w[1] - w[0]).collect()
}

/// ADF regression with `lag` augmentation terms over `t = first..T−1`.
fn adf_regression(y: &[f64], dy: &[f64], lag: usize, first: usize) -> Result<LeastSquares> {
    let n = y.len() - first;
    // Row r is time t = first + r; dy[t − 1] = y_t − y_{t−1}.
    let x = Matrix::from_fn(n, lag + 2, |r, j| {
        let t = first + r;
        match j {
            0 => 1.0,
            1 => y[t - 1],
            _ => dy[t - j],
        }
    });
    let rhs: Vec<f64> = (first..y.len()).map(|t| dy[t - 1]).collect();
    least_squares(&x, &rhs, &["const", "y_lag"]).map_err(degenerate)
}

fn degenerate(e: Error) -> Error {
    match e {
        Error::RankDeficient { .. } => Error::Degenerate("collinear test regression"),
        e => e,
    }
}

fn t_on_level(ls: &LeastSquares) -> Result<f64> {
    let se = ls.classical_se(1);
    if !(se > 0.0) {
        return Err(Error::Degenerate("perfect fit"));
    }
    Ok(ls.beta[1] / se)
}

/// ADF test on a contiguous sample with a fixed augmentation lag, using
/// every usable observation.
pub fn adf_fixed_lag(y: &[f64], lag: usize) -> Result<UnitRootResult> {
    let needed = 2 * lag + 4;
    if y.len() < needed {
        return Err(Error::SeriesTooShort { needed, got: y.len() });
    }
    check_not_constant(y)?;
    let dy = diffs(y);
    let ls = adf_regression(y, &dy, lag, lag + 1)?;
    let statistic = t_on_level(&ls)?;
    Ok(UnitRootResult {
        statistic,
        p_value: mackinnon_p_value(statistic),
        lags_or_bandwidth: lag,
        nobs: ls.residuals.len(),
        deterministic: Deterministic::Intercept,
    })
}

/// ADF test on a contiguous sample. Lags `0..=max_lag` are compared by
/// [`sic`] on the common sample `t = max_lag+1..T−1`, ties going to the
/// shorter lag; the chosen lag is then refitted on its own maximal sample.
pub fn adf_values(y: &[f64], max_lag: usize) -> Result<UnitRootResult> {
    let needed = 2 * max_lag + 4;
    if y.len() < needed {
        return Err(Error::SeriesTooShort { needed, got: y.len() });
    }
    check_not_constant(y)?;
    let dy = diffs(y);
    let n = y.len() - 1 - max_lag;
    let mut best: Option<(usize, f64)> = None;
    for lag in 0..=max_lag {
        let ls = adf_regression(y, &dy, lag, max_lag + 1)?;
        let ic = sic(&ls.residuals, lag + 2, n);
        if best.map_or(true, |(_, b)| ic < b) {
            best = Some((lag, ic));
        }
    }
    let (lag, _) = best.expect("at least lag 0 is evaluated");
    adf_fixed_lag(y, lag)
}

/// ADF on the longest run of consecutive observations of `s`.
pub fn adf(s: &QuarterlySeries, max_lag: usize) -> Result<UnitRootResult> {
    let run = s.longest_present_run()?;
    let y: Vec<f64> = run.present().collect();
    adf_values(&y, max_lag)
}

/// Long-run variance bandwidth for [`pp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PpBandwidth {
    /// `floor(4·(N/100)^(2/9))`.
    #[default]
    Rule,
    /// Newey–West (1994) data-driven choice for the Bartlett kernel.
    NeweyWest1994,
    Manual(usize),
}

/// Residual autocovariances `γ_j = (1/N) Σ u_t u_{t−j}` for `j = 0..=max`.
fn autocovariances(u: &[f64], max: usize) -> Vec<f64> {
    let n = u.len() as f64;
    (0..=max)
        .map(|j| u[j..].iter().zip(u).map(|(a, b)| a * b).sum::<f64>() / n)
        .collect()
}

/// Newey–West (1994) Bartlett bandwidth from residuals `u`:
/// with `m = floor(4·(T/100)^(2/9))` pilot lags,
/// `ŝ1 = 2 Σ j·σ_j`, `ŝ0 = σ_0 + 2 Σ σ_j` and
/// `B = floor(1.1447·((ŝ1/ŝ0)²)^(1/3)·T^(1/3))`.
pub fn nw_auto_bandwidth(u: &[f64]) -> usize {
    let t = u.len();
    if t < 2 {
        return 0;
    }
    let m = default_bandwidth(t).min(t - 1);
    let sigma = autocovariances(u, m);
    let s1: f64 = 2.0 * (1..=m).map(|j| j as f64 * sigma[j]).sum::<f64>();
    let s0: f64 = sigma[0] + 2.0 * sigma[1..].iter().sum::<f64>();
    if !(s0 != 0.0) {
        return 0;
    }
    let gamma = 1.1447 * libm::cbrt((s1 / s0) * (s1 / s0));
    let b = libm::floor(gamma * libm::cbrt(t as f64));
    if b.is_finite() {
        (b as usize).min(t - 1)
    } else {
        0
    }
}

/// Phillips–Perron test on a contiguous sample.
///
/// Regresses `Δy_t` on a constant and `y_{t−1}` and corrects the t-statistic
/// with the Bartlett long-run variance `f0` of the residuals:
///
/// ```text
/// t_pp = t·√(γ0/f0) − N·(f0 − γ0)·se(γ) / (2·√f0·s)
/// ```
pub fn pp_values(y: &[f64], bandwidth: PpBandwidth) -> Result<UnitRootResult> {
    if y.len() < PP_MIN_LEN {
        return Err(Error::SeriesTooShort {
            needed: PP_MIN_LEN,
            got: y.len(),
        });
    }
    check_not_constant(y)?;
    let dy = diffs(y);
    let ls = adf_regression(y, &dy, 0, 1)?;
    let t = t_on_level(&ls)?;
    let u = &ls.residuals;
    let n = u.len();
    let b = match bandwidth {
        PpBandwidth::Rule => default_bandwidth(n),
        PpBandwidth::NeweyWest1994 => nw_auto_bandwidth(u),
        PpBandwidth::Manual(b) => b,
    }
    .min(n - 1);
    let gamma = autocovariances(u, b);
    let gamma0 = gamma[0];
    let f0 = gamma0
        + 2.0
            * (1..=b)
                .map(|j| (1.0 - j as f64 / (b as f64 + 1.0)) * gamma[j])
                .sum::<f64>();
    if !(f0 > 0.0) {
        return Err(Error::Degenerate("non-positive long-run variance"));
    }
    let s = libm::sqrt(ls.rss / (n - 2) as f64);
    let se = ls.classical_se(1);
    let statistic = t * libm::sqrt(gamma0 / f0)
        - n as f64 * (f0 - gamma0) * se / (2.0 * libm::sqrt(f0) * s);
    Ok(UnitRootResult {
        statistic,
        p_value: mackinnon_p_value(statistic),
        lags_or_bandwidth: b,
        nobs: n,
        deterministic: Deterministic::Intercept,
    })
}

/// Phillips–Perron with the rule-of-thumb bandwidth.
pub fn pp(s: &QuarterlySeries) -> Result<UnitRootResult> {
    pp_with(s, PpBandwidth::Rule)
}

/// Phillips–Perron on the longest run of consecutive observations of `s`.
pub fn pp_with(s: &QuarterlySeries, bandwidth: PpBandwidth) -> Result<UnitRootResult> {
    let run = s.longest_present_run()?;
    let y: Vec<f64> = run.present().collect();
    pp_values(&y, bandwidth)
}

#[cfg(test)]
mod tests;
