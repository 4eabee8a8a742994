//! Reference-rate construction: compounded and simple averages, credit-sensitive
//! composites, income-equivalent spread calibration and the LIBOR proxy.

use chrono::{Days, NaiveDate};

use crate::calendar::BusinessCalendar;
use crate::error::{Error, Result};
use crate::index_engine::rolling_mean;
use crate::series::{IndexSeries, RateKind, RateSeries};

/// ACT/360.
pub const DAY_COUNT_BASIS: f64 = 360.0;
pub const COMPOUND_WINDOW_DAYS: u64 = 30;
pub const SIMPLE_WINDOW_BUSINESS_DAYS: usize = 21;
/// Fixed spread added to 3-month term SOFR once LIBOR stopped being representative.
pub const LIBOR_FALLBACK_SPREAD_BP: f64 = 11.48;

/// Annualized compounded rate, in percent, of `(rate %, day count)` periods:
/// `[Π(1 + r·n/360) − 1] · 360 / Σn`.
pub fn compound_rate(periods: &[(f64, u64)]) -> Result<f64> {
    let days: u64 = periods.iter().map(|(_, n)| n).sum();
    if days == 0 {
        return Err(Error::InvalidParameter("compounding window covers zero days".into()));
    }
    let growth: f64 = periods
        .iter()
        .map(|(r, n)| 1.0 + r / 100.0 * *n as f64 / DAY_COUNT_BASIS)
        .product();
    Ok((growth - 1.0) * DAY_COUNT_BASIS / days as f64 * 100.0)
}

/// Compounded average over the calendar days `[end - window_days, end)`.
///
/// Each calendar day accrues at the rate published on the latest business day
/// on or before it, so a Friday fixing carries `n = 3` across a weekend.
pub fn compounded_average_at(
    overnight: &IndexSeries,
    calendar: &BusinessCalendar,
    end: NaiveDate,
    window_days: u64,
) -> Result<f64> {
    if window_days == 0 {
        return Err(Error::InvalidParameter("compounding window must be positive".into()));
    }
    let first = overnight
        .first_date()
        .ok_or_else(|| Error::NoData(format!("{} is empty", overnight.name)))?;
    let start = end - Days::new(window_days);
    let mut periods: Vec<(NaiveDate, f64, u64)> = Vec::new();
    for day in start.iter_days().take(window_days as usize) {
        let fixing = calendar.business_day_on_or_before(day);
        if fixing < first {
            return Err(Error::NoData(format!(
                "{}: history starts {first}, window needs {fixing}",
                overnight.name
            )));
        }
        let rate = overnight.get(fixing).ok_or_else(|| Error::MissingData {
            date: fixing,
            context: format!("{} has no fixing for a business day", overnight.name),
        })?;
        match periods.last_mut() {
            Some((d, _, n)) if *d == fixing => *n += 1,
            _ => periods.push((fixing, rate, 1)),
        }
    }
    let flat: Vec<(f64, u64)> = periods.iter().map(|(_, r, n)| (*r, *n)).collect();
    compound_rate(&flat)
}

/// Compounded average published on each fixing date with a full window of
/// history. Dates without enough history are skipped; a business day with no
/// fixing inside a window is an error.
pub fn compounded_average(
    overnight: &RateSeries,
    calendar: &BusinessCalendar,
    window_days: u64,
) -> Result<RateSeries> {
    let mut points = Vec::new();
    for date in overnight.series.dates() {
        match compounded_average_at(&overnight.series, calendar, date, window_days) {
            Ok(v) => points.push((date, v)),
            Err(Error::NoData(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let name = format!("{} {}d compound", overnight.name(), window_days);
    Ok(RateSeries::new(
        RateKind::Average30dCompound,
        IndexSeries::new(name, points)?.with_calendar(calendar.id()),
    ))
}

/// Trailing simple average over `window` observations.
pub fn simple_rolling_average(series: &RateSeries, window: usize) -> Result<RateSeries> {
    let mut avg = rolling_mean(&series.series, window)?;
    avg.name = format!("{} {}bd simple", series.name(), window);
    Ok(RateSeries::new(RateKind::Average21bdSimple, avg))
}

/// Simple 21-business-day average minus 30-day compounded average of the same
/// daily series. Both windows end on and include the published date; dates
/// where either side is unavailable are omitted.
pub fn averaging_method_gap(daily: &IndexSeries, calendar: &BusinessCalendar) -> Result<IndexSeries> {
    let simple = rolling_mean(daily, SIMPLE_WINDOW_BUSINESS_DAYS)?;
    let points = simple
        .points()
        .iter()
        .filter_map(|(date, s)| {
            compounded_average_at(daily, calendar, *date + Days::new(1), COMPOUND_WINDOW_DAYS)
                .ok()
                .map(|c| (*date, s - c))
        })
        .collect();
    IndexSeries::new(format!("{} simple minus compound", daily.name), points)
}

/// Reference rate plus fixed spread plus `c` times AXI.
#[derive(Debug, Clone)]
pub struct CompositeRateSpec {
    pub reference: RateSeries,
    pub fixed_spread: f64,
    pub sensitivity: f64,
}

impl CompositeRateSpec {
    pub fn new(reference: RateSeries, fixed_spread: f64, sensitivity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&sensitivity) {
            return Err(Error::InvalidParameter(format!(
                "credit sensitivity {sensitivity} outside [0, 1]"
            )));
        }
        if !fixed_spread.is_finite() {
            return Err(Error::InvalidParameter("fixed spread must be finite".into()));
        }
        Ok(Self {
            reference,
            fixed_spread,
            sensitivity,
        })
    }
}

/// `R_t + s + c·AXI_t` on the dates both inputs share.
pub fn credit_sensitive_rate(spec: &CompositeRateSpec, axi: &IndexSeries) -> Result<RateSeries> {
    let joined = spec.reference.series.inner_join(axi);
    if joined.is_empty() {
        return Err(Error::EmptyIntersection(format!("{} and {}", spec.reference.name(), axi.name)));
    }
    let points = joined
        .into_iter()
        .map(|(d, r, a)| (d, r + spec.fixed_spread + spec.sensitivity * a))
        .collect();
    let name = format!(
        "{} + {} + {}*{}",
        spec.reference.name(),
        spec.fixed_spread,
        spec.sensitivity,
        axi.name
    );
    Ok(RateSeries::new(
        RateKind::Composite,
        IndexSeries::new(name, points)?.with_calendar(axi.calendar.clone()),
    ))
}

/// Spread that makes `base + spread` earn the same average income as `target`:
/// `mean(target) − mean(base)` over shared dates.
pub fn calibrate_equivalent_spread(target: &IndexSeries, base: &IndexSeries) -> Result<f64> {
    let joined = target.inner_join(base);
    if joined.is_empty() {
        return Err(Error::EmptyIntersection(format!("{} and {}", target.name, base.name)));
    }
    let n = joined.len() as f64;
    let mean_target = joined.iter().map(|(_, t, _)| t).sum::<f64>() / n;
    let mean_base = joined.iter().map(|(_, _, b)| b).sum::<f64>() / n;
    Ok(mean_target - mean_base)
}

/// Term SOFR plus a fixed spread in basis points.
pub fn libor_proxy(term_sofr: &RateSeries, spread_bp: f64) -> Result<RateSeries> {
    if term_sofr.series.is_empty() {
        return Err(Error::NoData(format!("{} is empty", term_sofr.name())));
    }
    let series = term_sofr
        .series
        .map(format!("{} + {spread_bp}bp", term_sofr.name()), |v| v + spread_bp / 100.0)?;
    Ok(RateSeries::new(RateKind::Proxy, series))
}

/// Published LIBOR through `cutover` (inclusive), proxy values afterwards.
pub fn splice_libor(libor: &RateSeries, proxy: &RateSeries, cutover: NaiveDate) -> Result<RateSeries> {
    let points = libor
        .series
        .points()
        .iter()
        .filter(|(d, _)| *d <= cutover)
        .chain(proxy.series.points().iter().filter(|(d, _)| *d > cutover))
        .copied()
        .collect();
    Ok(RateSeries::new(
        RateKind::Libor,
        IndexSeries::new(libor.name().to_string(), points)?,
    ))
}
