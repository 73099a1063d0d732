use std::path::PathBuf;

use ncpc_core::estimate::{EstimateConfig, Spec};
use ncpc_core::unitroot::{PpBandwidth, DEFAULT_MAX_LAG};
use ncpc_core::CountryCode;
use serde::Serialize;
use thiserror::Error;

/// Environment variable naming the default panel file.
pub const DATA_ENV: &str = "NCPC_DATA";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecSelection {
    Backward,
    Forward,
    #[default]
    Both,
}

impl SpecSelection {
    pub fn specs(self) -> &'static [Spec] {
        match self {
            SpecSelection::Backward => &[Spec::Backward],
            SpecSelection::Forward => &[Spec::Forward],
            SpecSelection::Both => &Spec::BOTH,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Markdown,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub data: PathBuf,
    pub specs: SpecSelection,
    /// `None` runs every country in the panel.
    pub countries: Option<Vec<CountryCode>>,
    pub estimate: EstimateConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Worker threads for per-country work.
    pub jobs: usize,
    pub pp_bandwidth: PpBandwidth,
    pub max_lag: usize,
    /// Directory of golden CSV files; `None` uses the published tables.
    pub golden: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(data: impl Into<PathBuf>) -> Self {
        Self {
            data: data.into(),
            specs: SpecSelection::Both,
            countries: None,
            estimate: EstimateConfig::default(),
            format: Format::Markdown,
            out: None,
            jobs: 1,
            pp_bandwidth: PpBandwidth::NeweyWest1994,
            max_lag: DEFAULT_MAX_LAG,
            golden: None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let t = &self.estimate.transform;
        if !(t.lambda > 0.0) || !t.lambda.is_finite() {
            return Err(ConfigError("lambda must be positive and finite".into()));
        }
        if !(t.shift >= 0.0) || !t.shift.is_finite() {
            return Err(ConfigError("shift constant must be non-negative".into()));
        }
        if self.jobs == 0 {
            return Err(ConfigError("jobs must be at least 1".into()));
        }
        if matches!(&self.countries, Some(c) if c.is_empty()) {
            return Err(ConfigError("empty country filter".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid configuration: {0}")]
pub struct ConfigError(pub String);
