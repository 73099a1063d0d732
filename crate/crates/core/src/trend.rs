//! Hodrick–Prescott trend extraction, NAIRU and the unemployment gap.
//!
//! The HP trend `τ` minimises `Σ(y_t − τ_t)² + λ Σ(Δ²τ_t)²`, i.e. solves
//! `(I + λ DᵀD) τ = y` with `D` the `(n−2)×n` second-difference operator.
//! The matrix is pentadiagonal and symmetric positive definite, so a banded
//! Cholesky factorisation solves it in O(n). Its condition number grows like
//! `16λ`; one step of iterative refinement brings the residual of the
//! normal equations back to rounding level and makes a straight line its
//! own trend.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::SymmetricBand;
use crate::series::{shifted_log, QuarterlySeries};
use crate::{Error, Result};

/// Trend/cycle split of a series. `trend + cycle` reproduces the input.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrendDecomposition {
    pub trend: QuarterlySeries,
    pub cycle: QuarterlySeries,
    pub lambda: f64,
}

/// Smoothing parameter for a sampling frequency:
/// `(periods_per_year / 4)^x · 1600`. `x = 2` is the Hodrick–Prescott
/// recommendation, `x = 4` the Ravn–Uhlig one; both give 1600 for quarterly
/// data.
pub fn ravn_uhlig_lambda(periods_per_year: u32, x: f64) -> f64 {
    libm::pow(periods_per_year as f64 / 4.0, x) * 1600.0
}

/// HP cycle of a fully observed slice.
pub fn hp_cycle_values(y: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let n = y.len();
    if n < 4 {
        return Err(Error::SeriesTooShort { needed: 4, got: n });
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument("lambda must be finite and non-negative"));
    }
    if lambda == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut a = SymmetricBand::zeros(n, 2);
    for i in 0..n {
        a.set(i, i, 1.0);
    }
    // I + λDᵀD, one second-difference row at a time
    const ROW: [f64; 3] = [1.0, -2.0, 1.0];
    for i in 0..n - 2 {
        for p in 0..3 {
            for q in 0..=p {
                a.set(i + p, i + q, a.get(i + p, i + q) + lambda * ROW[p] * ROW[q]);
            }
        }
    }
    let chol = a.cholesky()?;
    let mut trend = chol.solve(y);
    // One refinement step keeps exact-linear inputs exact.
    let r: Vec<f64> = normal_lhs(&trend, lambda).iter().zip(y).map(|(l, v)| l - v).collect();
    for (t, d) in trend.iter_mut().zip(chol.solve(&r)) {
        *t -= d;
    }
    Ok(y.iter().zip(&trend).map(|(v, t)| v - t).collect())
}

/// HP trend of a fully observed slice.
pub fn hp_trend_values(y: &[f64], lambda: f64) -> Result<Vec<f64>> {
    let cycle = hp_cycle_values(y, lambda)?;
    Ok(y.iter().zip(&cycle).map(|(a, c)| a - c).collect())
}

fn second_differences(y: &[f64]) -> impl Iterator<Item = f64> + '_ {
    y.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2])
}

/// `‖(I + λDᵀD) τ − y‖∞`, the residual of the first-order conditions.
pub fn optimality_residual(y: &[f64], trend: &[f64], lambda: f64) -> f64 {
    normal_lhs(trend, lambda)
        .iter()
        .zip(y)
        .map(|(l, v)| (l - v).abs())
        .fold(0.0, f64::max)
}

/// `(I + λDᵀD) τ`.
fn normal_lhs(trend: &[f64], lambda: f64) -> Vec<f64> {
    let mut lhs = trend.to_vec();
    for (i, d) in second_differences(trend).enumerate() {
        lhs[i] += lambda * d;
        lhs[i + 1] -= 2.0 * lambda * d;
        lhs[i + 2] += lambda * d;
    }
    lhs
}

/// Sum of squared second differences, the roughness penalised by λ.
pub fn roughness(values: &[f64]) -> f64 {
    second_differences(values).map(|d| d * d).sum()
}

/// HP-filters the series between its first and last present value.
///
/// Leading and trailing missing values are dropped; interior gaps are an
/// error.
pub fn hp_filter(s: &QuarterlySeries, lambda: f64) -> Result<TrendDecomposition> {
    let run = s.trim().map_err(|_| Error::SeriesTooShort { needed: 4, got: 0 })?;
    if let Some(t) = run.values().iter().position(Option::is_none) {
        return Err(Error::NonContiguous {
            first_gap: run.start().offset(t as i64),
        });
    }
    let y: Vec<f64> = run.present().collect();
    let cycle = hp_cycle_values(&y, lambda)?;
    let trend: Vec<f64> = y.iter().zip(&cycle).map(|(a, c)| a - c).collect();
    let name = s.name();
    Ok(TrendDecomposition {
        trend: QuarterlySeries::from_values(
            s.country(),
            alloc::format!("{name} trend"),
            run.start(),
            &trend,
        )?,
        cycle: QuarterlySeries::from_values(
            s.country(),
            alloc::format!("{name} cycle"),
            run.start(),
            &cycle,
        )?,
        lambda,
    })
}

/// The HP trend of an unemployment series.
pub fn nairu(u: &QuarterlySeries, lambda: f64) -> Result<QuarterlySeries> {
    Ok(hp_filter(u, lambda)?.trend.with_name("nairu"))
}

/// How the unemployment gap is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GapMode {
    /// `u − u*` on rates.
    #[default]
    Levels,
    /// `log(u + c) − trend(log(u + c))`.
    Logs,
}

/// Unemployment minus its HP trend, i.e. the HP cycle.
pub fn unemployment_gap(
    u: &QuarterlySeries,
    mode: GapMode,
    c: f64,
    lambda: f64,
) -> Result<QuarterlySeries> {
    let base = match mode {
        GapMode::Levels => u.clone(),
        GapMode::Logs => shifted_log(u, c)?,
    };
    Ok(hp_filter(&base, lambda)?.cycle.with_name("unemployment gap"))
}
