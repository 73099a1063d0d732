use alloc::vec::Vec;
use core::fmt;

use crate::dist::student_t_two_sided;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Coefficients with their HAC covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub beta: Vec<f64>,
    pub hac_cov: Matrix,
    pub residuals: Vec<f64>,
    pub nobs: usize,
    pub bandwidth: usize,
}

impl RegressionResult {
    pub fn se(&self, i: usize) -> f64 {
        libm::sqrt(self.hac_cov[(i, i)].max(0.0))
    }

    /// Residual degrees of freedom, `nobs − k`.
    pub fn df(&self) -> usize {
        self.nobs - self.beta.len()
    }

    pub fn coef(&self, i: usize) -> Coef {
        let se = self.se(i);
        Coef {
            value: self.beta[i],
            se,
            stars: stars(self.beta[i], se, self.df()),
        }
    }
}

/// Recession-regime coefficient `β_i + β_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CombinedCoefficient {
    pub value: f64,
    /// `√(SE_i² + SE_j²)`, ignoring the covariance. This is the reported
    /// figure.
    pub se_reported: f64,
    /// `√(SE_i² + SE_j² + 2 Cov_ij)`.
    pub se_exact: Option<f64>,
}

/// Sums coefficients `i` and `j`.
///
/// Fails with [`Error::NegativeRadicand`] only when even the
/// covariance-free variance is negative; a negative exact variance just
/// leaves `se_exact` empty.
pub fn combine(r: &RegressionResult, i: usize, j: usize) -> Result<CombinedCoefficient> {
    let k = r.beta.len();
    if i >= k || j >= k {
        return Err(Error::InvalidArgument("coefficient index out of range"));
    }
    let (vi, vj, cij) = (r.hac_cov[(i, i)], r.hac_cov[(j, j)], r.hac_cov[(i, j)]);
    let plain = vi + vj;
    if plain < 0.0 {
        return Err(Error::NegativeRadicand { radicand: plain });
    }
    let exact = plain + 2.0 * cij;
    Ok(CombinedCoefficient {
        value: r.beta[i] + r.beta[j],
        se_reported: libm::sqrt(plain),
        se_exact: (exact >= 0.0).then(|| libm::sqrt(exact)),
    })
}

/// Two-sided significance level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Significance {
    None,
    P10,
    P5,
    P1,
}

impl Significance {
    pub fn stars(self) -> &'static str {
        match self {
            Significance::None => "",
            Significance::P10 => "*",
            Significance::P5 => "**",
            Significance::P1 => "***",
        }
    }

    pub fn is_significant(self) -> bool {
        self != Significance::None
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.stars())
    }
}

/// Significance of `value / se` under Student-t with `df` degrees of freedom.
pub fn stars(value: f64, se: f64, df: usize) -> Significance {
    if !(se > 0.0) || df == 0 || !value.is_finite() {
        return Significance::None;
    }
    let p = student_t_two_sided(value / se, df as f64);
    if p < 0.01 {
        Significance::P1
    } else if p < 0.05 {
        Significance::P5
    } else if p < 0.10 {
        Significance::P10
    } else {
        Significance::None
    }
}

/// A coefficient as reported.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Coef {
    pub value: f64,
    pub se: f64,
    pub stars: Significance,
}
