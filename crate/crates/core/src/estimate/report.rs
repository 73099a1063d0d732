use super::frame::{build_frame, ModelFrame, Spec, TransformConfig, COLUMN_NAMES};
use super::hac::{default_bandwidth, hac_covariance};
use super::inference::{combine, stars, Coef, CombinedCoefficient, RegressionResult};
use super::ols::least_squares;
use crate::regime::{recession_dummy_with, RecessionRule};
use crate::{CountryCode, CountryDataset, Error, MarketClass, Result};

/// Everything that shapes a single-country estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateConfig {
    pub transform: TransformConfig,
    pub recession_rule: RecessionRule,
    /// HAC truncation lag; `None` uses [`default_bandwidth`] of the row count.
    pub hac_bandwidth: Option<usize>,
}

/// OLS with Newey–West standard errors.
///
/// A frame without recession rows cannot identify the interaction terms, so
/// they are dropped and the result has three coefficients instead of five.
pub fn fit_frame(f: &ModelFrame, bandwidth: Option<usize>) -> Result<RegressionResult> {
    let n = f.nobs();
    let cols: &[usize] = if f.recession_rows() == 0 {
        &[0, 1, 2]
    } else {
        &[0, 1, 2, 3, 4]
    };
    let x = f.x.select_columns(cols);
    let names: alloc::vec::Vec<&str> = cols.iter().map(|&j| COLUMN_NAMES[j]).collect();
    let ls = least_squares(&x, &f.y, &names)?;
    let bandwidth = bandwidth.unwrap_or_else(|| default_bandwidth(n));
    let hac_cov = hac_covariance(&x, &ls.residuals, bandwidth, &ls.xtx_inv);
    Ok(RegressionResult {
        beta: ls.beta,
        hac_cov,
        residuals: ls.residuals,
        nobs: n,
        bandwidth,
    })
}

/// One row of the regression table.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountryReport {
    pub country: CountryCode,
    pub market_class: MarketClass,
    pub spec: Spec,
    pub tranquil_infl: Coef,
    pub tranquil_gap: Coef,
    /// Empty when the sample has no recession quarter.
    pub recession_infl: Option<Coef>,
    pub recession_gap: Option<Coef>,
    pub combined_infl: Option<CombinedCoefficient>,
    pub combined_gap: Option<CombinedCoefficient>,
    pub constant: Coef,
    pub obs: usize,
    pub recession_obs: usize,
    pub bandwidth: usize,
}

/// Coefficient family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Coefficient {
    Inflation,
    Gap,
    /// Only defined for the tranquil regime.
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Regime {
    Tranquil,
    Recession,
}

impl CountryReport {
    pub fn coef(&self, regime: Regime, c: Coefficient) -> Option<&Coef> {
        match (regime, c) {
            (Regime::Tranquil, Coefficient::Inflation) => Some(&self.tranquil_infl),
            (Regime::Tranquil, Coefficient::Gap) => Some(&self.tranquil_gap),
            (Regime::Tranquil, Coefficient::Constant) => Some(&self.constant),
            (Regime::Recession, Coefficient::Inflation) => self.recession_infl.as_ref(),
            (Regime::Recession, Coefficient::Gap) => self.recession_gap.as_ref(),
            (Regime::Recession, Coefficient::Constant) => None,
        }
    }
}

/// Estimates one country under `spec`.
pub fn estimate_country(d: &CountryDataset, spec: Spec, cfg: &EstimateConfig) -> Result<CountryReport> {
    let regimes = recession_dummy_with(&d.gdp, cfg.recession_rule)?;
    let frame = build_frame(d, spec, &regimes, &cfg.transform)?;
    let fit = fit_frame(&frame, cfg.hac_bandwidth)?;
    let df = fit.df();
    let (combined_infl, combined_gap) = if fit.beta.len() == 5 {
        (Some(combine(&fit, 1, 3)?), Some(combine(&fit, 2, 4)?))
    } else {
        (None, None)
    };
    let as_coef = |c: CombinedCoefficient| Coef {
        value: c.value,
        se: c.se_reported,
        stars: stars(c.value, c.se_reported, df),
    };
    Ok(CountryReport {
        country: d.code,
        market_class: d.market_class,
        spec,
        tranquil_infl: fit.coef(1),
        tranquil_gap: fit.coef(2),
        recession_infl: combined_infl.map(as_coef),
        recession_gap: combined_gap.map(as_coef),
        combined_infl,
        combined_gap,
        constant: fit.coef(0),
        obs: fit.nobs,
        recession_obs: frame.recession_rows(),
        bandwidth: fit.bandwidth,
    })
}

/// Which countries enter an average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum SignificanceFilter {
    #[default]
    All,
    /// At least the 10% level.
    Significant,
}

/// A class-level average of one coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Selection {
    pub class: MarketClass,
    pub spec: Spec,
    pub regime: Regime,
    pub coefficient: Coefficient,
    pub filter: SignificanceFilter,
}

/// Mean of the selected coefficient over countries of the class, grouping
/// by each report's own market class.
pub fn aggregate_fractions(reports: &[CountryReport], sel: &Selection) -> Result<f64> {
    aggregate_fractions_by(reports, sel, |r| r.market_class)
}

/// As [`aggregate_fractions`] with a caller-supplied grouping.
pub fn aggregate_fractions_by(
    reports: &[CountryReport],
    sel: &Selection,
    class_of: impl Fn(&CountryReport) -> MarketClass,
) -> Result<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for r in reports {
        if r.spec != sel.spec || class_of(r) != sel.class {
            continue;
        }
        let Some(c) = r.coef(sel.regime, sel.coefficient) else {
            continue;
        };
        if sel.filter == SignificanceFilter::Significant && !c.stars.is_significant() {
            continue;
        }
        sum += c.value;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptySelection);
    }
    Ok(sum / n as f64)
}
