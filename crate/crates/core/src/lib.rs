//! Credit-spread benchmark engine.
//!
//! Builds the AXI/FXI credit-spread indices from transaction-level funding
//! data, composes credit-sensitive reference rates, replays loan
//! profitability through stress windows, and evaluates the risk-adjusted
//! spread discount that credit-sensitive pricing supports.
//!
//! Rates and spreads are percent per annum throughout; volumes are USD.

pub mod calendar;
pub mod data_io;
pub mod error;
pub mod index_engine;
pub mod loan_pricing;
pub mod rate_builder;
pub mod risk_analytics;
pub mod series;
pub mod stats_lab;

pub use calendar::BusinessCalendar;
pub use error::{Error, Result};
pub use series::{IndexSeries, RateKind, RateSeries};
