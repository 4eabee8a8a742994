//! Optional TOML config file and flag > file > default resolution.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<String>,
    pub holidays: Option<PathBuf>,
    #[serde(default)]
    pub index: IndexSection,
    #[serde(default)]
    pub rates: RatesSection,
    #[serde(default)]
    pub loan: LoanSection,
    #[serde(default)]
    pub risk: RiskSection,
    #[serde(default)]
    pub stats: StatsSection,
    /// Passed through to the synthetic generator.
    pub synth: Option<toml::Table>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexSection {
    pub scope: Option<String>,
    pub window: Option<usize>,
    pub alignment: Option<String>,
    pub min_volume_fraction: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatesSection {
    pub window_days: Option<u64>,
    pub spread: Option<f64>,
    pub sensitivity: Option<f64>,
    pub proxy_spread_bp: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoanSection {
    pub notional: Option<f64>,
    pub horizons: Option<Vec<u32>>,
    pub basis: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskSection {
    pub spread: Option<f64>,
    pub sensitivity: Option<f64>,
    pub steps: Option<usize>,
    pub elasticity: Option<f64>,
    pub mean_axi: Option<f64>,
    pub sigma_axi: Option<f64>,
    pub mean_delta: Option<f64>,
    pub sigma_delta: Option<f64>,
    pub mode: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatsSection {
    pub max_lag: Option<usize>,
    pub frequency: Option<String>,
    pub transform: Option<String>,
    pub granger_lag: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Where a resolved setting came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Flag,
    Config,
    Default,
}

impl Source {
    fn as_str(self) -> &'static str {
        match self {
            Source::Flag => "flag",
            Source::Config => "config",
            Source::Default => "default",
        }
    }
}

/// Records every resolved setting for the run manifest.
#[derive(Debug, Default)]
pub struct Resolved {
    pub entries: Vec<(String, String, Source)>,
}

impl Resolved {
    pub fn pick<T: Display>(&mut self, key: &str, flag: Option<T>, config: Option<T>, default: T) -> T {
        let (value, source) = match (flag, config) {
            (Some(v), _) => (v, Source::Flag),
            (None, Some(v)) => (v, Source::Config),
            (None, None) => (default, Source::Default),
        };
        self.entries.push((key.to_string(), value.to_string(), source));
        value
    }

    /// Like [`pick`](Self::pick) for settings without a default.
    pub fn pick_opt<T: Display>(&mut self, key: &str, flag: Option<T>, config: Option<T>) -> Option<T> {
        let (value, source) = match (flag, config) {
            (Some(v), _) => (Some(v), Source::Flag),
            (None, Some(v)) => (Some(v), Source::Config),
            (None, None) => (None, Source::Default),
        };
        let shown = value.as_ref().map_or_else(|| "none".to_string(), |v| v.to_string());
        self.entries.push((key.to_string(), shown, source));
        value
    }

    pub fn note(&mut self, key: &str, value: impl Display, source: Source) {
        self.entries.push((key.to_string(), value.to_string(), source));
    }

    pub fn lines(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|(k, v, s)| format!("param.{k}={v}\nparam.{k}.source={}", s.as_str()))
            .collect()
    }
}

pub fn parse_setting<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, CliError>
where
    T::Err: Display,
{
    raw.parse()
        .map_err(|e| CliError::Usage(format!("invalid value '{raw}' for {key}: {e}")))
}
