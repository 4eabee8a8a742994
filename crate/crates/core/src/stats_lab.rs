//! Correlation and causality analyses between AXI and its candidate drivers.

use std::collections::BTreeMap;
use std::str::FromStr;

use chrono::{Datelike, Days, NaiveDate};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use crate::error::{Error, Result};
use crate::series::IndexSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformKind {
    None,
    Difference,
    LogDifference,
}

impl FromStr for TransformKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(TransformKind::None),
            "difference" | "diff" => Ok(TransformKind::Difference),
            "log_difference" | "logdiff" => Ok(TransformKind::LogDifference),
            other => Err(Error::InvalidParameter(format!("unknown transform '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frequency {
    Daily,
    Weekly,
    Monthly,
    Quarterly,
}

impl FromStr for Frequency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "daily" => Ok(Frequency::Daily),
            "weekly" => Ok(Frequency::Weekly),
            "monthly" => Ok(Frequency::Monthly),
            "quarterly" => Ok(Frequency::Quarterly),
            other => Err(Error::InvalidParameter(format!("unknown frequency '{other}'"))),
        }
    }
}

impl Frequency {
    /// First day of the period containing `date`. Weeks are ISO weeks starting Monday.
    pub fn period_start(&self, date: NaiveDate) -> NaiveDate {
        match self {
            Frequency::Daily => date,
            Frequency::Weekly => date - Days::new(date.weekday().num_days_from_monday() as u64),
            Frequency::Monthly => date.with_day(1).expect("day 1 exists"),
            Frequency::Quarterly => {
                let month = (date.month0() / 3) * 3 + 1;
                NaiveDate::from_ymd_opt(date.year(), month, 1).expect("quarter start exists")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformSpec {
    pub kind: TransformKind,
    pub frequency: Frequency,
}

fn group_mean(points: impl Iterator<Item = (NaiveDate, f64)>, freq: Frequency) -> Vec<(NaiveDate, f64)> {
    let mut groups: BTreeMap<NaiveDate, (f64, usize)> = BTreeMap::new();
    for (d, v) in points {
        let e = groups.entry(freq.period_start(d)).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    groups.into_iter().map(|(d, (s, n))| (d, s / n as f64)).collect()
}

fn changes(points: &[(NaiveDate, f64)], kind: TransformKind) -> Vec<(NaiveDate, f64)> {
    points
        .windows(2)
        .map(|w| {
            let change = match kind {
                TransformKind::LogDifference => w[1].1.ln() - w[0].1.ln(),
                _ => w[1].1 - w[0].1,
            };
            (w[1].0, change)
        })
        .collect()
}

/// Differences (or log differences) at the requested frequency.
///
/// Weekly and monthly output is the mean of the observation-to-observation
/// changes falling in each period; quarterly output differences the last
/// observation of consecutive quarters. With `TransformKind::None`, levels are
/// averaged per period. Output dates are period start dates.
pub fn transform(series: &IndexSeries, spec: TransformSpec) -> Result<IndexSeries> {
    if spec.kind == TransformKind::LogDifference {
        if let Some((d, v)) = series.points().iter().find(|(_, v)| *v <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{}: log difference needs positive values, got {v} on {d}",
                series.name
            )));
        }
    }
    let pts = series.points();
    let out: Vec<(NaiveDate, f64)> = match (spec.kind, spec.frequency) {
        (TransformKind::None, Frequency::Daily) => pts.to_vec(),
        (TransformKind::None, f) => group_mean(pts.iter().copied(), f),
        (_, Frequency::Quarterly) => {
            let mut last: BTreeMap<NaiveDate, f64> = BTreeMap::new();
            for (d, v) in pts {
                last.insert(Frequency::Quarterly.period_start(*d), *v);
            }
            let ends: Vec<(NaiveDate, f64)> = last.into_iter().collect();
            if ends.len() < 2 {
                return Err(Error::NoData(format!("{}: fewer than two quarters", series.name)));
            }
            changes(&ends, spec.kind)
        }
        (kind, f) => {
            if pts.len() < 2 {
                return Err(Error::NoData(format!("{}: fewer than two observations", series.name)));
            }
            group_mean(changes(pts, kind).into_iter(), f)
        }
    };
    Ok(IndexSeries::new(series.name.clone(), out)?.with_unit(series.unit.clone()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub lag: usize,
    pub correlation: f64,
    /// Two-sided.
    pub p_value: f64,
    pub n: usize,
}

impl CorrelationResult {
    pub fn significant_at(&self, level: f64) -> bool {
        self.p_value < level
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter("correlation inputs differ in length".into()));
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation("fewer than two pairs".into()));
    }
    let (mx, my) = (mean(x), mean(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn two_sided_t(t: f64, df: f64) -> f64 {
    if t.is_infinite() {
        return 0.0;
    }
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    (2.0 * dist.sf(t.abs())).min(1.0)
}

/// Two-sided p-value of a Pearson correlation `r` on `n` pairs, via
/// `t = r·sqrt((n−2)/(1−r²))` with `n − 2` degrees of freedom.
pub fn correlation_p_value(r: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("need n >= 3 for a p-value, got {n}")));
    }
    let df = (n - 2) as f64;
    let denom = 1.0 - r * r;
    let t = if denom <= 0.0 { f64::INFINITY } else { r * (df / denom).sqrt() };
    Ok(two_sided_t(t, df))
}

/// OLS slope of `y` on `x` with intercept, and the two-sided p-value of its t statistic.
pub fn regression_slope_test(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::InvalidParameter("regression needs >= 3 aligned pairs".into()));
    }
    let (mx, my) = (mean(x), mean(y));
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::UndefinedCorrelation("regressor has zero variance".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let df = (x.len() - 2) as f64;
    let se = (rss / df / sxx).sqrt();
    let t = if se == 0.0 { f64::INFINITY } else { slope / se };
    Ok((slope, two_sided_t(t, df)))
}

/// Correlation of `x_t` with `y_{t−lag}` for each lag in `0..=max_lag`, on
/// already aligned slices.
pub fn lagged_correlation_values(x: &[f64], y: &[f64], max_lag: usize) -> Result<Vec<CorrelationResult>> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter("lagged correlation inputs differ in length".into()));
    }
    (0..=max_lag)
        .map(|lag| {
            if x.len() < lag + 3 {
                return Err(Error::NoData(format!("lag {lag} needs {} observations, have {}", lag + 3, x.len())));
            }
            let xs = &x[lag..];
            let ys = &y[..y.len() - lag];
            let r = pearson(xs, ys)?;
            Ok(CorrelationResult {
                lag,
                correlation: r,
                p_value: correlation_p_value(r, xs.len())?,
                n: xs.len(),
            })
        })
        .collect()
}

/// Inner-joins two series on date, then computes lagged correlations.
pub fn lagged_correlation(x: &IndexSeries, y: &IndexSeries, max_lag: usize) -> Result<Vec<CorrelationResult>> {
    let (xs, ys) = aligned(x, y)?;
    lagged_correlation_values(&xs, &ys, max_lag)
}

fn aligned(x: &IndexSeries, y: &IndexSeries) -> Result<(Vec<f64>, Vec<f64>)> {
    let joined = x.inner_join(y);
    if joined.is_empty() {
        return Err(Error::EmptyIntersection(format!("{} and {}", x.name, y.name)));
    }
    Ok(joined.into_iter().map(|(_, a, b)| (a, b)).unzip())
}

/// One row of a correlation table: an indicator against the target at each lag.
#[derive(Debug, Clone, Serialize)]
pub struct CorrelationRow {
    pub indicator: String,
    pub results: Vec<CorrelationResult>,
}

/// Lagged correlations of `target` with every indicator, in input order.
pub fn correlation_table(
    target: &IndexSeries,
    indicators: &[(String, IndexSeries)],
    max_lag: usize,
) -> Result<Vec<CorrelationRow>> {
    indicators
        .par_iter()
        .map(|(name, series)| {
            Ok(CorrelationRow {
                indicator: name.clone(),
                results: lagged_correlation(target, series, max_lag)?,
            })
        })
        .collect()
}

/// Default lag order for weekly Granger tests.
pub const DEFAULT_GRANGER_LAG: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrangerDirection {
    XCausesY,
    YCausesX,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrangerResult {
    pub direction: GrangerDirection,
    pub lag: usize,
    pub f_statistic: f64,
    pub p_value: f64,
    pub df_numerator: usize,
    pub df_denominator: usize,
}

impl GrangerResult {
    pub fn rejects_at(&self, level: f64) -> bool {
        self.p_value < level
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrangerReport {
    pub x_causes_y: GrangerResult,
    pub y_causes_x: GrangerResult,
}

fn residual_sum_of_squares(design: &DMatrix<f64>, target: &DVector<f64>) -> Result<f64> {
    let svd = design.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let min_sv = svd.singular_values.min();
    if max_sv.is_nan() || max_sv <= 0.0 || min_sv <= max_sv * 1e-10 {
        return Err(Error::SingularDesign(format!(
            "regressors are collinear (condition {:.3e})",
            max_sv / min_sv
        )));
    }
    let beta = svd
        .solve(target, 0.0)
        .map_err(|e| Error::SingularDesign(e.to_string()))?;
    let resid = target - design * beta;
    Ok(resid.norm_squared())
}

fn lag_design(columns: &[&[f64]], lag: usize) -> DMatrix<f64> {
    let n = columns[0].len() - lag;
    let k = 1 + columns.len() * lag;
    DMatrix::from_fn(n, k, |row, col| {
        if col == 0 {
            return 1.0;
        }
        let series = (col - 1) / lag;
        let l = (col - 1) % lag + 1;
        columns[series][row + lag - l]
    })
}

fn has_variance(v: &[f64]) -> bool {
    v.iter().any(|a| *a != v[0])
}

/// F-test of whether `lag` lags of `x` improve an AR(`lag`) model of `y`.
pub fn granger_test(x: &[f64], y: &[f64], lag: usize) -> Result<GrangerResult> {
    granger_one_way(x, y, lag, GrangerDirection::XCausesY)
}

fn granger_one_way(x: &[f64], y: &[f64], lag: usize, direction: GrangerDirection) -> Result<GrangerResult> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter("Granger inputs differ in length".into()));
    }
    if lag == 0 {
        return Err(Error::InvalidParameter("Granger lag must be positive".into()));
    }
    let n = y.len();
    let restricted_k = 1 + lag;
    let unrestricted_k = 1 + 2 * lag;
    if n <= lag + unrestricted_k {
        return Err(Error::InvalidParameter(format!(
            "Granger test with lag {lag} needs more than {} observations, have {n}",
            lag + unrestricted_k
        )));
    }
    if !has_variance(x) || !has_variance(y) {
        return Err(Error::UndefinedCorrelation("Granger input has zero variance".into()));
    }
    let target = DVector::from_iterator(n - lag, y[lag..].iter().copied());
    let rss_r = residual_sum_of_squares(&lag_design(&[y], lag), &target)?;
    let rss_u = residual_sum_of_squares(&lag_design(&[y, x], lag), &target)?;
    let df_num = unrestricted_k - restricted_k;
    let df_den = n - lag - unrestricted_k;
    let f = if rss_u > 0.0 {
        ((rss_r - rss_u).max(0.0) / df_num as f64) / (rss_u / df_den as f64)
    } else if rss_r > 0.0 {
        f64::INFINITY
    } else {
        return Err(Error::DegenerateDenominator("both Granger models fit exactly".into()));
    };
    let p = if f.is_infinite() {
        0.0
    } else {
        FisherSnedecor::new(df_num as f64, df_den as f64)
            .expect("positive degrees of freedom")
            .sf(f)
    };
    Ok(GrangerResult {
        direction,
        lag,
        f_statistic: f,
        p_value: p,
        df_numerator: df_num,
        df_denominator: df_den,
    })
}

/// Granger tests in both directions on aligned slices.
pub fn granger_both(x: &[f64], y: &[f64], lag: usize) -> Result<GrangerReport> {
    Ok(GrangerReport {
        x_causes_y: granger_one_way(x, y, lag, GrangerDirection::XCausesY)?,
        y_causes_x: granger_one_way(y, x, lag, GrangerDirection::YCausesX)?,
    })
}

/// Inner-joins two series on date and runs [`granger_both`].
pub fn granger_series(x: &IndexSeries, y: &IndexSeries, lag: usize) -> Result<GrangerReport> {
    let (xs, ys) = aligned(x, y)?;
    granger_both(&xs, &ys, lag)
}
