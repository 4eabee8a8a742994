//! Seeded market-data generator.
//!
//! Algorithm `axi-synth/1`: one ChaCha8 stream seeded from `seed`. For each
//! business day, two AR(1) spread factors (ST, LT) advance, then each bucket
//! draws `trades_per_bucket` trades in fixed order ST, LT1..LT4. Draw order
//! per trade is maturity, volume, scope, spread noise.

use std::path::Path;

use chrono::NaiveDate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize};

use super::read_to_string;
use crate::calendar::BusinessCalendar;
use crate::error::{Error, Result};
use crate::index_engine::{ScopeTag, Transaction};
use crate::series::{RateKind, RateSeries};

pub const GENERATOR_VERSION: &str = "axi-synth/1";

/// Maturity ranges in whole days, per bucket.
const BUCKET_DAYS: [(u32, u32); 5] = [(1, 364), (365, 729), (730, 1094), (1095, 1459), (1460, 1825)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StressRegime {
    #[serde(deserialize_with = "de_date")]
    pub start: NaiveDate,
    #[serde(deserialize_with = "de_date")]
    pub end: NaiveDate,
    pub lt_spread_multiplier: f64,
    #[serde(default = "one")]
    pub st_volume_multiplier: f64,
}

impl StressRegime {
    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub seed: u64,
    #[serde(deserialize_with = "de_date")]
    pub start: NaiveDate,
    #[serde(deserialize_with = "de_date")]
    pub end: NaiveDate,
    /// Daily USD volume per bucket, ST then LT1..LT4.
    pub bucket_volume: [f64; 5],
    pub trades_per_bucket: usize,
    /// Log-normal sigma of per-trade volume.
    pub volume_dispersion: f64,
    pub st_spread: f64,
    pub lt_spread: f64,
    pub trade_spread_dispersion: f64,
    pub mean_reversion: f64,
    pub factor_volatility: f64,
    pub nonbank_share: f64,
    pub nonbank_spread_premium: f64,
    pub sofr_level: f64,
    pub sofr_volatility: f64,
    #[serde(deserialize_with = "de_dates")]
    pub holidays: Vec<NaiveDate>,
    pub stress_windows: Vec<StressRegime>,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            start: NaiveDate::from_ymd_opt(2024, 1, 1).unwrap(),
            end: NaiveDate::from_ymd_opt(2024, 12, 31).unwrap(),
            bucket_volume: [300e9, 40e9, 30e9, 20e9, 15e9],
            trades_per_bucket: 12,
            volume_dispersion: 0.8,
            st_spread: 0.0723,
            lt_spread: 0.7714,
            trade_spread_dispersion: 0.05,
            mean_reversion: 0.05,
            factor_volatility: 0.02,
            nonbank_share: 0.5,
            nonbank_spread_premium: 0.15,
            sofr_level: 4.3,
            sofr_volatility: 0.01,
            holidays: Vec::new(),
            stress_windows: Vec::new(),
        }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DateRepr {
    Text(String),
    Toml(toml::value::Datetime),
}

impl DateRepr {
    fn into_date<E: serde::de::Error>(self) -> std::result::Result<NaiveDate, E> {
        let text = match self {
            DateRepr::Text(s) => s,
            DateRepr::Toml(d) => d.to_string(),
        };
        NaiveDate::parse_from_str(text.trim(), "%Y-%m-%d").map_err(|e| E::custom(format!("invalid date '{text}': {e}")))
    }
}

fn de_date<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<NaiveDate, D::Error> {
    DateRepr::deserialize(d)?.into_date()
}

fn de_dates<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<NaiveDate>, D::Error> {
    Vec::<DateRepr>::deserialize(d)?.into_iter().map(DateRepr::into_date).collect()
}

impl SyntheticConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&read_to_string(path.as_ref())?)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn calendar(&self) -> BusinessCalendar {
        BusinessCalendar::weekdays().with_holidays(self.holidays.iter().copied())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.end < self.start {
            return bad(format!("empty span {}..{}", self.start, self.end));
        }
        if self.calendar().business_days(self.start, self.end).is_empty() {
            return bad(format!("no business days in {}..{}", self.start, self.end));
        }
        if self.trades_per_bucket == 0 {
            return bad("trades_per_bucket must be positive".into());
        }
        if self.bucket_volume.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return bad("bucket_volume entries must be positive".into());
        }
        let nonneg = [
            ("volume_dispersion", self.volume_dispersion),
            ("trade_spread_dispersion", self.trade_spread_dispersion),
            ("factor_volatility", self.factor_volatility),
            ("sofr_volatility", self.sofr_volatility),
        ];
        if let Some((name, _)) = nonneg.iter().find(|(_, v)| !v.is_finite() || *v < 0.0) {
            return bad(format!("{name} must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.mean_reversion) {
            return bad("mean_reversion must lie in [0, 1]".into());
        }
        if !(0.0..=1.0).contains(&self.nonbank_share) {
            return bad("nonbank_share must lie in [0, 1]".into());
        }
        for w in &self.stress_windows {
            if !(w.lt_spread_multiplier > 0.0 && w.st_volume_multiplier > 0.0) {
                return bad(format!("stress window {}..{}: multipliers must be > 0", w.start, w.end));
            }
            if w.end < w.start || w.start < self.start || w.end > self.end {
                return bad(format!("stress window {}..{} outside span {}..{}", w.start, w.end, self.start, self.end));
            }
        }
        Ok(())
    }

    fn regime(&self, date: NaiveDate) -> Option<&StressRegime> {
        self.stress_windows.iter().find(|w| w.contains(date))
    }

    /// `# ` comment lines stamped into generated files.
    pub fn header_comments(&self) -> Vec<String> {
        vec![format!("generator: {GENERATOR_VERSION} chacha8 seed={}", self.seed)]
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn round_to(x: f64, decimals: i32) -> f64 {
    let f = 10f64.powi(decimals);
    (x * f).round() / f
}

/// Generates transactions for every business day in the configured span.
pub fn generate_synthetic(config: &SyntheticConfig) -> Result<Vec<Transaction>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sigma = config.volume_dispersion;
    let size = LogNormal::new(-0.5 * sigma * sigma, sigma).map_err(|e| Error::Config(e.to_string()))?;
    let keep = 1.0 - config.mean_reversion;

    let mut st_factor = 0.0;
    let mut lt_factor = 0.0;
    let mut out = Vec::new();
    for date in config.calendar().business_days(config.start, config.end) {
        st_factor = keep * st_factor + config.factor_volatility * normal(&mut rng);
        lt_factor = keep * lt_factor + config.factor_volatility * normal(&mut rng);
        let regime = config.regime(date);
        let lt_mult = regime.map_or(1.0, |r| r.lt_spread_multiplier);
        let st_vol_mult = regime.map_or(1.0, |r| r.st_volume_multiplier);

        for (b, &(lo, hi)) in BUCKET_DAYS.iter().enumerate() {
            let (level, scale) = if b == 0 {
                (config.st_spread + st_factor, config.bucket_volume[0] * st_vol_mult)
            } else {
                (config.lt_spread * lt_mult + lt_factor, config.bucket_volume[b])
            };
            let per_trade = scale / config.trades_per_bucket as f64;
            for _ in 0..config.trades_per_bucket {
                let days = rng.random_range(lo..=hi);
                let volume = (per_trade * size.sample(&mut rng)).round().max(1.0);
                let nonbank = rng.random::<f64>() < config.nonbank_share;
                let premium = if nonbank { config.nonbank_spread_premium } else { 0.0 };
                let spread = level + premium + config.trade_spread_dispersion * normal(&mut rng);
                out.push(Transaction {
                    trade_date: date,
                    maturity: f64::from(days) / 365.0,
                    volume,
                    spread: round_to(spread, 4),
                    scope: if nonbank { ScopeTag::Nonbank } else { ScopeTag::Bank },
                });
            }
        }
    }
    Ok(out)
}

/// Overnight fixings on the config's business days, mean-reverting around
/// `sofr_level`, on a separate stream from the transactions.
pub fn generate_sofr(config: &SyntheticConfig) -> Result<RateSeries> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(1);
    let keep = 1.0 - config.mean_reversion;
    let mut dev = 0.0;
    let points = config
        .calendar()
        .business_days(config.start, config.end)
        .into_iter()
        .map(|d| {
            dev = keep * dev + config.sofr_volatility * normal(&mut rng);
            (d, round_to((config.sofr_level + dev).max(0.0), 2))
        })
        .collect();
    let series = RateSeries::from_points(RateKind::Overnight, "SOFR", points)?;
    Ok(series)
}
