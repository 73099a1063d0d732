//! Estimation of the regime-interacted Phillips curve
//!
//! ```text
//! π_t = β0 + β1·π^e_t + β2·gap_t + β3·π^e_t·D_t + β4·gap_t·D_t + ε_t
//! ```
//!
//! where `π^e` is lagged inflation (backward-looking) or survey-expected
//! inflation (forward-looking) and `D` is the recession dummy. β1 and β2
//! describe tranquil quarters; β1+β3 and β2+β4 describe recessions.

mod frame;
mod hac;
mod inference;
mod ols;
mod report;

pub use frame::{build_frame, ModelFrame, Spec, TransformConfig, COLUMN_NAMES, MIN_FRAME_ROWS};
pub use hac::{bartlett_weight, default_bandwidth, hac_covariance, newey_west};
pub use inference::{combine, stars, Coef, CombinedCoefficient, RegressionResult, Significance};
pub use ols::{least_squares, ols, LeastSquares, OlsFit, RANK_TOLERANCE};
pub use report::{
    aggregate_fractions, aggregate_fractions_by, estimate_country, fit_frame, Coefficient,
    CountryReport, EstimateConfig, Regime, Selection, SignificanceFilter,
};
