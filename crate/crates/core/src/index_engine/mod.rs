//! Daily composite credit spreads and the rolling AXI/FXI indices.
//!
//! A trading day's transactions are split into one short-term bucket (0-1y)
//! and four one-year long-term buckets (1-5y). Each bucket contributes its
//! dollar-volume-weighted median spread, weighted by the bucket's
//! maturity-weighted volume. The published index is the simple average of the
//! daily spreads over a 21 business day window.

mod curve;
mod median;
mod rolling;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::calendar::BusinessCalendar;
use crate::error::{Error, Result};
use crate::series::IndexSeries;

pub use curve::RiskFreeCurve;
pub use median::weighted_median;
pub use rolling::{lt_weight_fraction, lt_weight_fraction_window, rolling_index, rolling_mean, WindowAlignment};

/// Default averaging window in business days.
pub const INDEX_WINDOW: usize = 21;

/// Longest eligible maturity, in years.
pub const MAX_MATURITY_YEARS: f64 = 5.0;

/// Issuer classification of a transaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScopeTag {
    Bank,
    Nonbank,
}

impl ScopeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScopeTag::Bank => "bank",
            ScopeTag::Nonbank => "nonbank",
        }
    }
}

impl FromStr for ScopeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bank" => Ok(ScopeTag::Bank),
            "nonbank" => Ok(ScopeTag::Nonbank),
            other => Err(Error::InvalidParameter(format!(
                "unknown scope tag '{other}' (expected bank or nonbank)"
            ))),
        }
    }
}

/// Which transaction pool an index is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexScope {
    /// Bank funding only.
    Axi,
    /// All wholesale funding, bank and nonbank.
    Fxi,
}

impl IndexScope {
    pub fn admits(&self, tag: ScopeTag) -> bool {
        match self {
            IndexScope::Axi => tag == ScopeTag::Bank,
            IndexScope::Fxi => true,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            IndexScope::Axi => "axi",
            IndexScope::Fxi => "fxi",
        }
    }
}

impl fmt::Display for IndexScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IndexScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "axi" => Ok(IndexScope::Axi),
            "fxi" => Ok(IndexScope::Fxi),
            other => Err(Error::InvalidParameter(format!("unknown index scope '{other}'"))),
        }
    }
}

/// One unsecured funding trade.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transaction {
    pub trade_date: NaiveDate,
    /// Years, actual/365.
    pub maturity: f64,
    /// USD.
    pub volume: f64,
    /// Percent per annum over the matched-tenor risk-free rate.
    pub spread: f64,
    pub scope: ScopeTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MaturityBucket {
    St,
    Lt1,
    Lt2,
    Lt3,
    Lt4,
}

impl MaturityBucket {
    pub const ALL: [MaturityBucket; 5] = [
        MaturityBucket::St,
        MaturityBucket::Lt1,
        MaturityBucket::Lt2,
        MaturityBucket::Lt3,
        MaturityBucket::Lt4,
    ];
    pub const LONG_TERM: [MaturityBucket; 4] = [
        MaturityBucket::Lt1,
        MaturityBucket::Lt2,
        MaturityBucket::Lt3,
        MaturityBucket::Lt4,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            MaturityBucket::St => "ST",
            MaturityBucket::Lt1 => "LT1",
            MaturityBucket::Lt2 => "LT2",
            MaturityBucket::Lt3 => "LT3",
            MaturityBucket::Lt4 => "LT4",
        }
    }

    /// Year interval `[lower, upper)`; LT4 also contains its upper bound.
    pub fn bounds(&self) -> (f64, f64) {
        let lo = self.index() as f64;
        (lo, lo + 1.0)
    }

    /// Position in [`MaturityBucket::ALL`].
    pub fn index(&self) -> usize {
        *self as usize
    }
}

/// Maps a maturity in years onto its bucket.
pub fn assign_bucket(maturity: f64) -> Result<MaturityBucket> {
    if !(maturity > 0.0 && maturity <= MAX_MATURITY_YEARS) {
        return Err(Error::IneligibleTransaction { maturity });
    }
    Ok(match maturity {
        m if m < 1.0 => MaturityBucket::St,
        m if m < 2.0 => MaturityBucket::Lt1,
        m if m < 3.0 => MaturityBucket::Lt2,
        m if m < 4.0 => MaturityBucket::Lt3,
        _ => MaturityBucket::Lt4,
    })
}

fn normalize_products(products: &[f64]) -> Result<Vec<f64>> {
    for &p in products {
        if !(p.is_finite() && p >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "maturity-weighted volume {p} must be finite and >= 0"
            )));
        }
    }
    let total: f64 = products.iter().sum();
    if total <= 0.0 {
        return Err(Error::NoData("all maturity-weighted volumes are zero".into()));
    }
    Ok(products.iter().map(|p| p / total).collect())
}

/// Maturity-weighted volume shares of the ST segment and each LT bucket.
///
/// `lt` holds `(volume, average maturity)` per long-term bucket.
pub fn bucket_weights(st_volume: f64, st_avg_maturity: f64, lt: &[(f64, f64)]) -> Result<(f64, Vec<f64>)> {
    let mut products = Vec::with_capacity(lt.len() + 1);
    products.push(st_volume * st_avg_maturity);
    products.extend(lt.iter().map(|(v, m)| v * m));
    let weights = normalize_products(&products)?;
    Ok((weights[0], weights[1..].to_vec()))
}

/// Volume-weighted average maturity `Σ m·v / Σ v`.
pub fn weighted_avg_maturity(transactions: &[Transaction]) -> Result<f64> {
    let volume: f64 = transactions.iter().map(|t| t.volume).sum();
    if volume <= 0.0 {
        return Err(Error::NoData("zero total volume".into()));
    }
    let weighted: f64 = transactions.iter().map(|t| t.maturity * t.volume).sum();
    Ok(weighted / volume)
}

/// Per-date breakdown of the composite spread. Bucket arrays are ordered LT1..LT4.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailySpreadDecomposition {
    pub date: NaiveDate,
    pub st_spread: Option<f64>,
    pub lt_bucket_spreads: [Option<f64>; 4],
    pub st_weight: f64,
    pub lt_weights: [f64; 4],
    pub daily_spread: f64,
    pub st_volume: f64,
    pub lt_volumes: [f64; 4],
    /// Volume-weighted mean maturity of the ST bucket, if populated.
    pub st_maturity: Option<f64>,
    pub lt_maturities: [Option<f64>; 4],
    pub weighted_avg_maturity: f64,
}

impl DailySpreadDecomposition {
    pub fn total_volume(&self) -> f64 {
        self.st_volume + self.lt_volumes.iter().sum::<f64>()
    }

    pub fn lt_volume(&self) -> f64 {
        self.lt_volumes.iter().sum()
    }

    /// Combined weight of all LT buckets.
    pub fn lt_weight(&self) -> f64 {
        self.lt_weights.iter().sum()
    }

    /// LT bucket medians averaged with their LT weights, if any LT bucket traded.
    pub fn lt_spread(&self) -> Option<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (s, w) in self.lt_bucket_spreads.iter().zip(self.lt_weights) {
            if let Some(s) = s {
                num += s * w;
                den += w;
                lo = lo.min(*s);
                hi = hi.max(*s);
            }
        }
        // Clamp so equal bucket medians average to exactly that median.
        (den > 0.0).then(|| (num / den).clamp(lo, hi))
    }

    pub fn st_maturity_volume(&self) -> f64 {
        self.st_maturity.unwrap_or(0.0) * self.st_volume
    }

    pub fn lt_maturity_volume(&self) -> f64 {
        self.lt_maturities
            .iter()
            .zip(self.lt_volumes)
            .map(|(m, v)| m.unwrap_or(0.0) * v)
            .sum()
    }

    /// `LT m·v / (ST m·v + LT m·v)` for this day.
    pub fn lt_maturity_share(&self) -> f64 {
        let lt = self.lt_maturity_volume();
        let total = self.st_maturity_volume() + lt;
        if total > 0.0 {
            lt / total
        } else {
            0.0
        }
    }

    /// Bucket medians that contributed to the daily spread.
    pub fn bucket_spreads(&self) -> impl Iterator<Item = f64> + '_ {
        self.st_spread.iter().chain(self.lt_bucket_spreads.iter().flatten()).copied()
    }
}

#[derive(Default)]
struct BucketAccumulator {
    trades: Vec<(f64, f64)>,
    volume: f64,
    maturity_volume: f64,
}

/// Composite spread for a single trading day.
///
/// Ineligible maturities and zero-volume trades are ignored; all transactions
/// must share one trade date.
pub fn daily_spread(transactions: &[Transaction]) -> Result<DailySpreadDecomposition> {
    let date = transactions
        .first()
        .ok_or_else(|| Error::NoData("no transactions".into()))?
        .trade_date;

    let mut buckets: [BucketAccumulator; 5] = Default::default();
    let mut eligible = 0usize;
    for t in transactions {
        if t.trade_date != date {
            return Err(Error::InvalidParameter(format!(
                "daily_spread given mixed dates {date} and {}",
                t.trade_date
            )));
        }
        if !(t.volume.is_finite() && t.volume >= 0.0) {
            return Err(Error::InvalidParameter(format!("volume {} on {date}", t.volume)));
        }
        if !t.spread.is_finite() {
            return Err(Error::InvalidParameter(format!("spread {} on {date}", t.spread)));
        }
        let Ok(bucket) = assign_bucket(t.maturity) else {
            continue;
        };
        if t.volume == 0.0 {
            continue;
        }
        let acc = &mut buckets[bucket.index()];
        acc.trades.push((t.spread, t.volume));
        acc.volume += t.volume;
        acc.maturity_volume += t.maturity * t.volume;
        eligible += 1;
    }
    if eligible == 0 {
        return Err(Error::NoData(format!("no eligible transactions on {date}")));
    }

    let mut medians = [None; 5];
    let mut maturities = [None; 5];
    let mut products = [0.0; 5];
    for (i, acc) in buckets.iter().enumerate() {
        if acc.volume > 0.0 {
            let avg_maturity = acc.maturity_volume / acc.volume;
            medians[i] = Some(weighted_median(&acc.trades)?);
            maturities[i] = Some(avg_maturity);
            products[i] = avg_maturity * acc.volume;
        }
    }
    let weights = normalize_products(&products)?;

    let daily = medians
        .iter()
        .zip(&weights)
        .filter_map(|(m, w)| m.map(|m| m * w))
        .sum();

    let total_volume: f64 = buckets.iter().map(|b| b.volume).sum();
    let total_mv: f64 = buckets.iter().map(|b| b.maturity_volume).sum();

    Ok(DailySpreadDecomposition {
        date,
        st_spread: medians[0],
        lt_bucket_spreads: [medians[1], medians[2], medians[3], medians[4]],
        st_weight: weights[0],
        lt_weights: [weights[1], weights[2], weights[3], weights[4]],
        daily_spread: daily,
        st_volume: buckets[0].volume,
        lt_volumes: [buckets[1].volume, buckets[2].volume, buckets[3].volume, buckets[4].volume],
        st_maturity: maturities[0],
        lt_maturities: [maturities[1], maturities[2], maturities[3], maturities[4]],
        weighted_avg_maturity: total_mv / total_volume,
    })
}

/// Knobs for [`compute_index`].
#[derive(Debug, Clone)]
pub struct IndexConfig {
    pub window: usize,
    pub alignment: WindowAlignment,
    pub calendar: BusinessCalendar,
    /// Evaluate dates on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl Default for IndexConfig {
    fn default() -> Self {
        Self {
            window: INDEX_WINDOW,
            alignment: WindowAlignment::EndingAt,
            calendar: BusinessCalendar::weekdays(),
            parallel: true,
        }
    }
}

/// A trade date that produced no daily spread, with the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedDate {
    pub date: NaiveDate,
    pub reason: String,
}

/// Everything produced by one index computation.
#[derive(Debug, Clone)]
pub struct IndexRun {
    pub scope: IndexScope,
    pub decompositions: Vec<DailySpreadDecomposition>,
    pub daily: IndexSeries,
    pub index: IndexSeries,
    pub lt_weight: IndexSeries,
    /// Eligible dollar volume per published daily spread.
    pub volume: IndexSeries,
    pub skipped: Vec<SkippedDate>,
}

/// Daily decompositions for every trade date, in date order.
pub fn daily_decompositions(
    transactions: &[Transaction],
    scope: IndexScope,
    config: &IndexConfig,
) -> Result<(Vec<DailySpreadDecomposition>, Vec<SkippedDate>)> {
    let mut by_date: BTreeMap<NaiveDate, Vec<Transaction>> = BTreeMap::new();
    for t in transactions.iter().filter(|t| scope.admits(t.scope)) {
        by_date.entry(t.trade_date).or_default().push(*t);
    }
    let days: Vec<(NaiveDate, Vec<Transaction>)> = by_date.into_iter().collect();

    let evaluate = |(date, txs): &(NaiveDate, Vec<Transaction>)| -> (NaiveDate, Result<DailySpreadDecomposition>) {
        if !config.calendar.is_business_day(*date) {
            return (*date, Err(Error::NoData(format!("{date} is not a business day"))));
        }
        (*date, daily_spread(txs))
    };
    let results: Vec<(NaiveDate, Result<DailySpreadDecomposition>)> = if config.parallel {
        days.par_iter().map(evaluate).collect()
    } else {
        days.iter().map(evaluate).collect()
    };

    let mut decompositions = Vec::with_capacity(results.len());
    let mut skipped = Vec::new();
    for (date, r) in results {
        match r {
            Ok(d) => decompositions.push(d),
            Err(Error::NoData(reason)) => skipped.push(SkippedDate { date, reason }),
            Err(e) => return Err(e),
        }
    }
    Ok((decompositions, skipped))
}

/// Runs the full pipeline for AXI (bank trades only) or FXI (all trades).
pub fn compute_index(transactions: &[Transaction], scope: IndexScope, config: &IndexConfig) -> Result<IndexRun> {
    let (decompositions, skipped) = daily_decompositions(transactions, scope, config)?;
    if decompositions.is_empty() {
        return Err(Error::NoData(format!("no publishable dates for {scope}")));
    }
    let name = scope.as_str().to_ascii_uppercase();
    let calendar = config.calendar.id().to_string();
    let daily = IndexSeries::new(
        format!("{name} daily spread"),
        decompositions.iter().map(|d| (d.date, d.daily_spread)).collect(),
    )?
    .with_calendar(calendar.clone());
    let mut index = rolling_index(&daily, config.window, config.alignment, &config.calendar)?.with_calendar(calendar.clone());
    index.name = name.clone();
    let lt_weight = lt_weight_fraction(&decompositions, config.window)?
        .with_unit("fraction")
        .with_calendar(calendar.clone());
    let volume = IndexSeries::new(
        format!("{name} volume"),
        decompositions.iter().map(|d| (d.date, d.total_volume())).collect(),
    )?
    .with_unit("USD")
    .with_calendar(calendar);
    Ok(IndexRun {
        scope,
        decompositions,
        daily,
        index,
        lt_weight,
        volume,
        skipped,
    })
}

/// Where a benchmark fixing came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkSource {
    Primary,
    Fallback,
}

impl BenchmarkSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            BenchmarkSource::Primary => "primary",
            BenchmarkSource::Fallback => "fallback",
        }
    }
}

/// AXI when its underlying volume on `date` is at least `min_volume`, FXI otherwise.
pub fn fallback_value(
    date: NaiveDate,
    axi: &IndexSeries,
    axi_volume: &IndexSeries,
    fxi: &IndexSeries,
    min_volume: f64,
) -> Result<(f64, BenchmarkSource)> {
    let volume_ok = axi_volume.get(date).is_some_and(|v| v >= min_volume);
    match (axi.get(date), fxi.get(date)) {
        (Some(v), _) if volume_ok => Ok((v, BenchmarkSource::Primary)),
        (_, Some(v)) => Ok((v, BenchmarkSource::Fallback)),
        _ => Err(Error::BenchmarkUnavailable(date)),
    }
}

/// Default fallback threshold: `fraction` of the median daily volume over the
/// `window` observations strictly before `date`.
pub fn default_min_volume(volume: &IndexSeries, date: NaiveDate, fraction: f64, window: usize) -> Option<f64> {
    let prior: Vec<(f64, f64)> = volume
        .points()
        .iter()
        .filter(|(d, _)| *d < date)
        .rev()
        .take(window)
        .map(|(_, v)| (*v, 1.0))
        .collect();
    weighted_median(&prior).ok().map(|m| m * fraction)
}
