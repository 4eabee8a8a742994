//! Dated value series shared by the index, rate and statistics modules.

use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Published values in percent per annum (or the native unit of a macro series),
/// ordered by strictly increasing date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSeries {
    pub name: String,
    pub unit: String,
    pub calendar: String,
    points: Vec<(NaiveDate, f64)>,
}

impl IndexSeries {
    /// Validates strictly increasing dates and finite values.
    pub fn new(name: impl Into<String>, points: Vec<(NaiveDate, f64)>) -> Result<Self> {
        let name = name.into();
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidSeries(format!(
                    "{name}: dates not strictly increasing at {}",
                    w[1].0
                )));
            }
        }
        if let Some((d, v)) = points.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!("{name}: non-finite value {v} on {d}")));
        }
        Ok(Self {
            name,
            unit: "percent p.a.".to_string(),
            calendar: "weekdays".to_string(),
            points,
        })
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: "percent p.a.".to_string(),
            calendar: "weekdays".to_string(),
            points: Vec::new(),
        }
    }

    pub fn with_unit(mut self, unit: impl Into<String>) -> Self {
        self.unit = unit.into();
        self
    }

    pub fn with_calendar(mut self, calendar: impl Into<String>) -> Self {
        self.calendar = calendar.into();
        self
    }

    pub fn points(&self) -> &[(NaiveDate, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dates(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.points.iter().map(|(d, _)| *d)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|(_, v)| *v)
    }

    pub fn first_date(&self) -> Option<NaiveDate> {
        self.points.first().map(|(d, _)| *d)
    }

    pub fn last_date(&self) -> Option<NaiveDate> {
        self.points.last().map(|(d, _)| *d)
    }

    pub fn get(&self, date: NaiveDate) -> Option<f64> {
        self.points
            .binary_search_by_key(&date, |(d, _)| *d)
            .ok()
            .map(|i| self.points[i].1)
    }

    /// Latest observation on or before `date`.
    pub fn latest_on_or_before(&self, date: NaiveDate) -> Option<(NaiveDate, f64)> {
        match self.points.binary_search_by_key(&date, |(d, _)| *d) {
            Ok(i) => Some(self.points[i]),
            Err(0) => None,
            Err(i) => Some(self.points[i - 1]),
        }
    }

    pub fn mean(&self) -> Option<f64> {
        if self.points.is_empty() {
            None
        } else {
            Some(self.values().sum::<f64>() / self.points.len() as f64)
        }
    }

    /// Applies `f` pointwise, keeping dates.
    pub fn map(&self, name: impl Into<String>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let points = self.points.iter().map(|(d, v)| (*d, f(*v))).collect();
        Ok(Self::new(name, points)?
            .with_unit(self.unit.clone())
            .with_calendar(self.calendar.clone()))
    }

    /// Dates present in both series with the paired values.
    pub fn inner_join(&self, other: &IndexSeries) -> Vec<(NaiveDate, f64, f64)> {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.points.len() && j < other.points.len() {
            let (da, va) = self.points[i];
            let (db, vb) = other.points[j];
            match da.cmp(&db) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push((da, va, vb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }
}

/// Tag describing how a rate series was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateKind {
    Overnight,
    #[serde(rename = "average_30d_compound")]
    Average30dCompound,
    #[serde(rename = "average_21bd_simple")]
    Average21bdSimple,
    Composite,
    Libor,
    Proxy,
}

impl RateKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RateKind::Overnight => "overnight",
            RateKind::Average30dCompound => "average_30d_compound",
            RateKind::Average21bdSimple => "average_21bd_simple",
            RateKind::Composite => "composite",
            RateKind::Libor => "libor",
            RateKind::Proxy => "proxy",
        }
    }
}

impl fmt::Display for RateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "overnight" => RateKind::Overnight,
            "average_30d_compound" => RateKind::Average30dCompound,
            "average_21bd_simple" => RateKind::Average21bdSimple,
            "composite" => RateKind::Composite,
            "libor" => RateKind::Libor,
            "proxy" => RateKind::Proxy,
            other => return Err(Error::InvalidParameter(format!("unknown rate kind '{other}'"))),
        })
    }
}

/// A series in percent per annum tagged with its [`RateKind`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSeries {
    pub kind: RateKind,
    pub series: IndexSeries,
}

impl RateSeries {
    pub fn new(kind: RateKind, series: IndexSeries) -> Self {
        Self { kind, series }
    }

    pub fn from_points(kind: RateKind, name: &str, points: Vec<(NaiveDate, f64)>) -> Result<Self> {
        Ok(Self::new(kind, IndexSeries::new(name, points)?))
    }

    pub fn name(&self) -> &str {
        &self.series.name
    }
}
