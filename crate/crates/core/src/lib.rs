//! Numerical core for estimating the Neo-Classical Phillips Curve with
//! recession-regime interactions on quarterly country panels.
//!
//! The crate is `no_std` (it needs `alloc`) and has no IO. Everything here is
//! a pure function over immutable values:
//!
//! * [`series`]: quarterly containers and the log/difference/lag transforms
//!   that turn raw CPI and unemployment levels into model proxies.
//! * [`trend`]: Hodrick–Prescott filtering, NAIRU and the unemployment gap.
//! * [`regime`]: the recession dummy derived from GDP growth.
//! * [`estimate`]: model frames, OLS, Newey–West covariance, combined regime
//!   coefficients and significance stars.
//! * [`unitroot`]: ADF (SIC lag selection) and Phillips–Perron tests with
//!   MacKinnon p-values.
#![no_std]

extern crate alloc;

pub mod dist;
pub mod error;
pub mod estimate;
pub mod linalg;
pub mod quarter;
pub mod regime;
pub mod series;
pub mod trend;
pub mod unitroot;

pub use error::{Error, Result};
pub use quarter::{Quarter, Window};
pub use series::{CountryCode, CountryDataset, MarketClass, QuarterlySeries};
