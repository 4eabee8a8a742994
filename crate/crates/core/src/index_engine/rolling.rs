use chrono::NaiveDate;

use crate::calendar::BusinessCalendar;
use crate::error::{Error, Result};
use crate::series::IndexSeries;

use super::DailySpreadDecomposition;

/// Which date a trailing window's mean is stamped on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowAlignment {
    /// Mean of the `window` observations ending at and including `t`, published at `t`.
    #[default]
    EndingAt,
    /// Same mean, published on the next business day, so the value at `t`
    /// averages the `window` observations strictly before `t`.
    Preceding,
}

/// Trailing arithmetic mean over `window` observations. Dates with fewer than
/// `window` observations available are omitted.
pub fn rolling_mean(series: &IndexSeries, window: usize) -> Result<IndexSeries> {
    if window == 0 {
        return Err(Error::InvalidParameter("rolling window must be positive".into()));
    }
    let pts = series.points();
    let points = (window..=pts.len())
        .map(|end| {
            let slice = &pts[end - window..end];
            let mean = slice.iter().map(|(_, v)| v).sum::<f64>() / window as f64;
            (slice[window - 1].0, mean)
        })
        .collect();
    Ok(IndexSeries::new(series.name.clone(), points)?
        .with_unit(series.unit.clone())
        .with_calendar(series.calendar.clone()))
}

/// Rolling index from a daily spread series.
pub fn rolling_index(
    daily: &IndexSeries,
    window: usize,
    alignment: WindowAlignment,
    calendar: &BusinessCalendar,
) -> Result<IndexSeries> {
    let ending = rolling_mean(daily, window)?;
    match alignment {
        WindowAlignment::EndingAt => Ok(ending),
        WindowAlignment::Preceding => {
            let shifted: Vec<(NaiveDate, f64)> = ending
                .points()
                .iter()
                .map(|(d, v)| (calendar.next_business_day(*d), *v))
                .collect();
            Ok(IndexSeries::new(ending.name.clone(), shifted)?
                .with_unit(ending.unit.clone())
                .with_calendar(ending.calendar.clone()))
        }
    }
}

/// Average LT share of maturity-weighted volume over the whole slice.
pub fn lt_weight_fraction_window(decompositions: &[DailySpreadDecomposition]) -> Result<f64> {
    if decompositions.is_empty() {
        return Err(Error::NoData("empty LT weight window".into()));
    }
    let sum: f64 = decompositions.iter().map(|d| d.lt_maturity_share()).sum();
    Ok(sum / decompositions.len() as f64)
}

/// Rolling `window`-day average of the daily LT share of maturity-weighted volume.
pub fn lt_weight_fraction(decompositions: &[DailySpreadDecomposition], window: usize) -> Result<IndexSeries> {
    if decompositions.is_empty() {
        return Err(Error::NoData("no decompositions for LT weight".into()));
    }
    let daily = IndexSeries::new(
        "LT weight",
        decompositions.iter().map(|d| (d.date, d.lt_maturity_share())).collect(),
    )?;
    rolling_mean(&daily, window)
}
