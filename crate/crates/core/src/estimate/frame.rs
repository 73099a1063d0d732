use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::linalg::Matrix;
use crate::quarter::Window;
use crate::regime::RegimeSeries;
use crate::series::{inflation_proxy, lag, CountryDataset, QuarterlySeries};
use crate::trend::{unemployment_gap, GapMode};
use crate::{CountryCode, Error, Quarter, Result};

/// Regressor names, in column order.
pub const COLUMN_NAMES: [&str; 5] = ["const", "infl_term", "u_gap", "infl_term_x_d", "u_gap_x_d"];

/// Frames with fewer complete rows are rejected.
pub const MIN_FRAME_ROWS: usize = 10;

/// Expectation proxy of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Spec {
    /// `π^e_t = π_{t−1}`.
    Backward,
    /// `π^e_t` is the survey expectation `E_t(π_{t+1})`.
    Forward,
}

impl Spec {
    pub const BOTH: [Spec; 2] = [Spec::Backward, Spec::Forward];

    pub fn as_str(self) -> &'static str {
        match self {
            Spec::Backward => "backward",
            Spec::Forward => "forward",
        }
    }
}

impl fmt::Display for Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Spec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "backward" => Ok(Spec::Backward),
            "forward" => Ok(Spec::Forward),
            _ => Err(Error::InvalidArgument("spec must be backward or forward")),
        }
    }
}

/// How raw levels become model variables.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransformConfig {
    /// Constant added before taking logs.
    pub shift: f64,
    /// HP smoothing parameter for the NAIRU.
    pub lambda: f64,
    pub gap_mode: GapMode,
    /// Sample quarters. The NAIRU is extracted from unemployment inside this
    /// window and frame rows are restricted to it.
    pub window: Window,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self {
            shift: 1.0,
            lambda: 1600.0,
            gap_mode: GapMode::Levels,
            window: Window::default_sample(),
        }
    }
}

/// Complete-case design for one country and specification.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelFrame {
    pub country: CountryCode,
    pub spec: Spec,
    pub quarters: Vec<Quarter>,
    pub y: Vec<f64>,
    /// Columns as in [`COLUMN_NAMES`].
    pub x: Matrix,
    pub dummy: Vec<f64>,
}

impl ModelFrame {
    /// Assembles a frame from aligned columns. `dummy` entries must be 0 or 1.
    pub fn from_parts(
        country: CountryCode,
        spec: Spec,
        quarters: Vec<Quarter>,
        y: Vec<f64>,
        infl_term: &[f64],
        gap: &[f64],
        dummy: Vec<f64>,
    ) -> Result<Self> {
        let n = y.len();
        if quarters.len() != n || infl_term.len() != n || gap.len() != n || dummy.len() != n {
            return Err(Error::InvalidArgument("frame columns differ in length"));
        }
        if dummy.iter().any(|d| *d != 0.0 && *d != 1.0) {
            return Err(Error::InvalidArgument("dummy must be 0 or 1"));
        }
        let x = Matrix::from_fn(n, 5, |i, j| match j {
            0 => 1.0,
            1 => infl_term[i],
            2 => gap[i],
            3 => infl_term[i] * dummy[i],
            _ => gap[i] * dummy[i],
        });
        Ok(Self {
            country,
            spec,
            quarters,
            y,
            x,
            dummy,
        })
    }

    pub fn nobs(&self) -> usize {
        self.y.len()
    }

    pub fn recession_rows(&self) -> usize {
        self.dummy.iter().filter(|d| **d == 1.0).count()
    }
}

/// Builds the design for `spec`.
///
/// * regressand: inflation, the first difference of `log(cpi + c)`;
/// * expectation term: lagged inflation, or the same transform of the
///   expected-CPI series (used as published, no re-timing);
/// * gap: unemployment minus its HP trend, extracted inside the window;
/// * interactions with the recession dummy.
///
/// Rows with any missing component are dropped.
pub fn build_frame(
    d: &CountryDataset,
    spec: Spec,
    regimes: &RegimeSeries,
    cfg: &TransformConfig,
) -> Result<ModelFrame> {
    let y = inflation_proxy(&d.cpi, cfg.shift)?;
    let infl_term = match spec {
        Spec::Backward => lag(&y, 1)?,
        Spec::Forward => inflation_proxy(&d.expected_cpi, cfg.shift)?,
    };
    let gap = window_gap(&d.unemployment, cfg)?;
    let mut quarters = Vec::new();
    let (mut ys, mut infl, mut gaps, mut dummy) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for t in 0..cfg.window.len() {
        let q = cfg.window.start.offset(t as i64);
        let row = (|| {
            Some((
                y.get(q)?,
                infl_term.get(q)?,
                gap.as_ref()?.get(q)?,
                regimes.get(q)?,
            ))
        })();
        if let Some((yv, iv, gv, dv)) = row {
            quarters.push(q);
            ys.push(yv);
            infl.push(iv);
            gaps.push(gv);
            dummy.push(if dv { 1.0 } else { 0.0 });
        }
    }
    if ys.len() < MIN_FRAME_ROWS {
        return Err(Error::EmptyFrame {
            rows: ys.len(),
            min: MIN_FRAME_ROWS,
        });
    }
    ModelFrame::from_parts(d.code, spec, quarters, ys, &infl, &gaps, dummy)
}

/// Unemployment gap inside the window; `None` when unemployment has no
/// observation there.
fn window_gap(u: &QuarterlySeries, cfg: &TransformConfig) -> Result<Option<QuarterlySeries>> {
    let Ok(inside) = u.restrict(cfg.window) else {
        return Ok(None);
    };
    if inside.present_count() == 0 {
        return Ok(None);
    }
    unemployment_gap(&inside, cfg.gap_mode, cfg.shift, cfg.lambda).map(Some)
}
