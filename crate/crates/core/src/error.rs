use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("value {value} at {quarter} is not positive after adding shift {shift}")]
    NonPositiveAfterShift {
        quarter: crate::Quarter,
        value: f64,
        shift: f64,
    },
    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("insufficient data: need at least {needed} present values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("series has interior missing values (first gap at {first_gap})")]
    NonContiguous { first_gap: crate::Quarter },
    #[error("GDP value {value} at {quarter} is not positive")]
    NonPositiveGdp { quarter: crate::Quarter, value: f64 },
    #[error("model frame has only {rows} complete rows (minimum {min})")]
    EmptyFrame { rows: usize, min: usize },
    #[error("regressor matrix is rank deficient in columns {columns:?}")]
    RankDeficient { columns: Vec<String> },
    #[error("combined variance radicand is negative ({radicand})")]
    NegativeRadicand { radicand: f64 },
    #[error("no reports match the selection")]
    EmptySelection,
    #[error("degenerate regression: {0}")]
    Degenerate(&'static str),
    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("series do not overlap")]
    NoOverlap,
    #[error("country mismatch: expected {expected}, found {found}")]
    CountryMismatch {
        expected: crate::CountryCode,
        found: crate::CountryCode,
    },
    #[error("invalid quarter `{0}`")]
    InvalidQuarter(String),
    #[error("invalid country code `{0}`")]
    InvalidCountryCode(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
