//! Quarterly time-series econometrics.
//!
//! OLS with classical inference ([`linreg`]), univariate autoregressions
//! ([`autoregression`]), unit-root and structural-break tests
//! ([`stability`]), vector autoregressions with Granger causality
//! ([`var`]), Engle–Granger cointegration ([`cointegration`]) and seeded
//! data generators for Monte Carlo work ([`simulate`]).

pub mod autoregression;
pub mod cointegration;
mod companion;
pub mod decision;
pub mod error;
pub mod linreg;
pub mod series;
pub mod simulate;
pub mod stability;
pub mod var;

pub use decision::{CriticalValues, Decisions, Level};
pub use error::{Error, Result};
pub use series::{QuarterIndex, Series};
