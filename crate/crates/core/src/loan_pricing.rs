//! Revolving-credit-line profitability under alternative indexing schemes.
//!
//! Interest accrues daily on calendar days with a 360-day base. A loan earns
//! its contractual rate and pays the bank's true funding cost (SOFR + AXI);
//! cumulative profit is the running sum of the daily difference.

use chrono::{Days, Months, NaiveDate};
use serde::Serialize;

use crate::calendar::BusinessCalendar;
use crate::error::{Error, Result};
use crate::series::{IndexSeries, RateSeries};

pub const LOAN_DAY_COUNT_BASE: f64 = 360.0;

/// A non-amortizing credit line indexed to `rate`.
#[derive(Debug, Clone)]
pub struct LoanSpec {
    pub name: String,
    /// USD.
    pub notional: f64,
    /// All-in contractual loan rate, percent per annum.
    pub rate: RateSeries,
    pub day_count_base: f64,
    pub amortizing: bool,
}

impl LoanSpec {
    pub fn new(name: impl Into<String>, notional: f64, rate: RateSeries) -> Result<Self> {
        if !(notional.is_finite() && notional > 0.0) {
            return Err(Error::InvalidParameter(format!("notional {notional} must be positive")));
        }
        Ok(Self {
            name: name.into(),
            notional,
            rate,
            day_count_base: LOAN_DAY_COUNT_BASE,
            amortizing: false,
        })
    }
}

/// One day of interest: `notional · rate / 360`, rate in percent.
pub fn daily_accrual(rate: f64, notional: f64) -> f64 {
    notional * rate / 100.0 / LOAN_DAY_COUNT_BASE
}

/// Cumulative profit by accrual date.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfitPath {
    pub loan: String,
    pub points: Vec<(NaiveDate, f64)>,
}

impl ProfitPath {
    pub fn final_profit(&self) -> f64 {
        self.points.last().map(|(_, p)| *p).unwrap_or(0.0)
    }
}

/// Rate accruing on `day`: the fixing on that day, or the last fixing before it
/// when `day` is not a business day.
fn accrual_rate(series: &IndexSeries, calendar: &BusinessCalendar, day: NaiveDate) -> Result<f64> {
    if let Some(v) = series.get(day) {
        return Ok(v);
    }
    if !calendar.is_business_day(day) {
        if let Some((_, v)) = series.latest_on_or_before(day) {
            return Ok(v);
        }
    }
    Err(Error::MissingData {
        date: day,
        context: format!("{} does not cover the accrual period", series.name),
    })
}

/// Running profit over the accrual days `start+1 ..= start+horizon_days`.
pub fn cumulative_profit(
    loan: &LoanSpec,
    funding: &RateSeries,
    calendar: &BusinessCalendar,
    start: NaiveDate,
    horizon_days: u64,
) -> Result<ProfitPath> {
    // Sum percent-days first and scale once so fixed-spread loans accrue without drift.
    let scale = loan.notional / 100.0 / loan.day_count_base;
    let mut spread_days = 0.0;
    let mut points = Vec::with_capacity(horizon_days as usize);
    for offset in 1..=horizon_days {
        let day = start + Days::new(offset);
        let loan_rate = accrual_rate(&loan.rate.series, calendar, day)?;
        let funding_rate = accrual_rate(&funding.series, calendar, day)?;
        spread_days += loan_rate - funding_rate;
        points.push((day, spread_days * scale));
    }
    Ok(ProfitPath {
        loan: loan.name.clone(),
        points,
    })
}

/// A named stress anchor, e.g. the pandemic onset.
#[derive(Debug, Clone, PartialEq)]
pub struct StressWindow {
    pub name: String,
    pub start: NaiveDate,
}

/// Profit advantage of `benchmark` over `alternative` after one horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressCell {
    pub horizon_months: u32,
    pub horizon_days: u64,
    /// USD.
    pub profit_difference: f64,
    /// Difference ÷ notional ÷ (days/360), in basis points.
    pub annualized_bp: f64,
    /// Difference ÷ notional, in basis points.
    pub period_bp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StressRow {
    pub window: String,
    pub benchmark: String,
    pub alternative: String,
    pub cells: Vec<StressCell>,
}

pub const DEFAULT_HORIZONS_MONTHS: [u32; 3] = [1, 3, 12];

/// Table of `benchmark` vs each alternative, per stress window and horizon.
pub fn stress_report(
    benchmark: &LoanSpec,
    alternatives: &[LoanSpec],
    funding: &RateSeries,
    calendar: &BusinessCalendar,
    windows: &[StressWindow],
    horizons_months: &[u32],
) -> Result<Vec<StressRow>> {
    let mut rows = Vec::new();
    for window in windows {
        let longest = horizons_months.iter().copied().max().unwrap_or(0);
        let longest_days = horizon_days(window.start, longest)?;
        let bench_path = cumulative_profit(benchmark, funding, calendar, window.start, longest_days)?;
        for alt in alternatives {
            if alt.notional != benchmark.notional {
                return Err(Error::InvalidParameter(format!(
                    "{} and {} have different notionals",
                    benchmark.name, alt.name
                )));
            }
            let alt_path = cumulative_profit(alt, funding, calendar, window.start, longest_days)?;
            let cells = horizons_months
                .iter()
                .map(|&months| {
                    let days = horizon_days(window.start, months)?;
                    let diff = profit_at(&bench_path, days) - profit_at(&alt_path, days);
                    Ok(StressCell {
                        horizon_months: months,
                        horizon_days: days,
                        profit_difference: diff,
                        annualized_bp: if days == 0 {
                            0.0
                        } else {
                            diff / benchmark.notional / (days as f64 / LOAN_DAY_COUNT_BASE) * 1e4
                        },
                        period_bp: diff / benchmark.notional * 1e4,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(StressRow {
                window: window.name.clone(),
                benchmark: benchmark.name.clone(),
                alternative: alt.name.clone(),
                cells,
            });
        }
    }
    Ok(rows)
}

fn profit_at(path: &ProfitPath, days: u64) -> f64 {
    if days == 0 {
        0.0
    } else {
        path.points[days as usize - 1].1
    }
}

/// Calendar days from `start` to `start + months` calendar months.
pub fn horizon_days(start: NaiveDate, months: u32) -> Result<u64> {
    let end = start
        .checked_add_months(Months::new(months))
        .ok_or_else(|| Error::InvalidParameter(format!("{start} + {months} months overflows")))?;
    Ok((end - start).num_days() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::RateKind;
    use proptest::prelude::*;

    fn d0() -> NaiveDate {
        NaiveDate::from_ymd_opt(2020, 3, 1).unwrap()
    }

    fn series(kind: RateKind, name: &str, f: impl Fn(u64) -> f64, days: u64) -> RateSeries {
        RateSeries::from_points(kind, name, (0..days).map(|i| (d0() + Days::new(i), f(i))).collect()).unwrap()
    }

    #[test]
    fn accrual_examples() {
        assert!((daily_accrual(3.6, 1e6) - 100.0).abs() < 1e-9);
        assert_eq!(daily_accrual(0.0, 5e6), 0.0);
        let total: f64 = (0..90).map(|_| daily_accrual(1.0, 1e6)).sum();
        assert!((total - 2500.0).abs() < 1e-9);
    }

    #[test]
    fn fixed_spread_over_funding() {
        let funding = series(RateKind::Composite, "funding", |i| 1.5 + (i as f64 * 0.37).sin(), 120);
        let loan_rate = funding.series.map("loan", |v| v + 1.0).unwrap();
        let loan = LoanSpec::new("loan", 1e6, RateSeries::new(RateKind::Composite, loan_rate)).unwrap();
        let path = cumulative_profit(&loan, &funding, &BusinessCalendar::every_day(), d0(), 90).unwrap();
        assert!((path.points[0].1 - 10_000.0 / 360.0).abs() < 1e-9);
        assert!((path.final_profit() - 2500.0).abs() < 1e-8);
    }

    #[test]
    fn identical_rates_give_flat_zero() {
        let funding = series(RateKind::Composite, "f", |i| i as f64 * 0.01, 40);
        let loan = LoanSpec::new("l", 1e6, funding.clone()).unwrap();
        let path = cumulative_profit(&loan, &funding, &BusinessCalendar::every_day(), d0(), 30).unwrap();
        assert!(path.points.iter().all(|(_, p)| *p == 0.0));
    }

    #[test]
    fn funding_spike_shortfall() {
        // SOFR flat 1%, AXI jumps from 0.5% to 1.5% for 90 days.
        let axi = |i: u64| if (1..=90).contains(&i) { 1.5 } else { 0.5 };
        let funding = series(RateKind::Composite, "funding", |i| 1.0 + axi(i), 120);
        let cs = series(RateKind::Composite, "cs", |i| 1.0 + axi(i) + 1.0, 120);
        let sofr_only = series(RateKind::Composite, "sofr_only", |_| 1.0 + 0.5 + 1.0, 120);
        let cal = BusinessCalendar::every_day();
        let a = cumulative_profit(&LoanSpec::new("cs", 1e6, cs).unwrap(), &funding, &cal, d0(), 90).unwrap();
        let b = cumulative_profit(&LoanSpec::new("so", 1e6, sofr_only).unwrap(), &funding, &cal, d0(), 90).unwrap();
        assert!((a.final_profit() - b.final_profit() - 2500.0).abs() < 1e-8);
    }

    #[test]
    fn coverage_gap_names_the_date() {
        let funding = series(RateKind::Composite, "f", |_| 1.0, 10);
        let loan = LoanSpec::new("l", 1e6, funding.clone()).unwrap();
        let err = cumulative_profit(&loan, &funding, &BusinessCalendar::every_day(), d0(), 20).unwrap_err();
        match err {
            Error::MissingData { date, .. } => assert_eq!(date, d0() + Days::new(10)),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn weekend_carries_friday_rate() {
        let cal = BusinessCalendar::weekdays();
        let start = NaiveDate::from_ymd_opt(2024, 1, 4).unwrap(); // Thursday
        let pts: Vec<(NaiveDate, f64)> = cal
            .business_days(start, start + Days::new(10))
            .into_iter()
            .map(|d| (d, 3.6))
            .collect();
        let rate = RateSeries::from_points(RateKind::Composite, "l", pts).unwrap();
        let zero = RateSeries::new(RateKind::Composite, rate.series.map("f", |_| 0.0).unwrap());
        let path = cumulative_profit(&LoanSpec::new("l", 1e6, rate).unwrap(), &zero, &cal, start, 4).unwrap();
        assert!((path.final_profit() - 400.0).abs() < 1e-9);
    }

    #[test]
    fn identical_schemes_report_zero() {
        let funding = series(RateKind::Composite, "f", |i| 2.0 + (i as f64).cos(), 400);
        let loan = LoanSpec::new("a", 1e6, funding.clone()).unwrap();
        let windows = [StressWindow { name: "w".into(), start: d0() }];
        let rows = stress_report(&loan, std::slice::from_ref(&loan), &funding, &BusinessCalendar::every_day(), &windows, &DEFAULT_HORIZONS_MONTHS).unwrap();
        assert_eq!(rows.len(), 1);
        for c in &rows[0].cells {
            assert_eq!(c.annualized_bp, 0.0);
            assert_eq!(c.period_bp, 0.0);
        }
        assert_eq!(rows[0].cells[1].horizon_days, 92);
    }

    #[test]
    fn horizon_lengths_follow_calendar_months() {
        assert_eq!(horizon_days(d0(), 1).unwrap(), 31);
        assert_eq!(horizon_days(d0(), 12).unwrap(), 365);
    }

    proptest! {
        #[test]
        fn path_independence(rates in prop::collection::vec(-1.0f64..10.0, 60), s in -2.0f64..4.0, days in 1u64..59) {
            let funding = series(RateKind::Composite, "f", |i| rates[i as usize], 60);
            let loan_rate = funding.series.map("l", |v| v + s).unwrap();
            let loan = LoanSpec::new("l", 1e6, RateSeries::new(RateKind::Composite, loan_rate)).unwrap();
            let p = cumulative_profit(&loan, &funding, &BusinessCalendar::every_day(), d0(), days).unwrap();
            let expected = 1e6 * s / 100.0 * days as f64 / 360.0;
            prop_assert!((p.final_profit() - expected).abs() < 1e-6);
        }

        #[test]
        fn antisymmetry_and_additivity(a in prop::collection::vec(0.0f64..8.0, 80), b in prop::collection::vec(0.0f64..8.0, 80), split in 1u64..40, rest in 1u64..39) {
            let cal = BusinessCalendar::every_day();
            let fa = series(RateKind::Composite, "a", |i| a[i as usize], 80);
            let fb = series(RateKind::Composite, "b", |i| b[i as usize], 80);
            let la = LoanSpec::new("a", 1e6, fa.clone()).unwrap();
            let lb = LoanSpec::new("b", 1e6, fb.clone()).unwrap();
            let w = [StressWindow { name: "w".into(), start: d0() }];
            let ab = stress_report(&la, std::slice::from_ref(&lb), &fb, &cal, &w, &[1]).unwrap();
            let ba = stress_report(&lb, std::slice::from_ref(&la), &fb, &cal, &w, &[1]).unwrap();
            prop_assert!((ab[0].cells[0].annualized_bp + ba[0].cells[0].annualized_bp).abs() < 1e-9);

            let whole = cumulative_profit(&la, &fb, &cal, d0(), split + rest).unwrap().final_profit();
            let first = cumulative_profit(&la, &fb, &cal, d0(), split).unwrap().final_profit();
            let second = cumulative_profit(&la, &fb, &cal, d0() + Days::new(split), rest).unwrap().final_profit();
            prop_assert!((whole - first - second).abs() < 1e-6);
        }
    }
}
