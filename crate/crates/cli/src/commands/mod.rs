pub mod index;
pub mod loan;
pub mod rates;
pub mod risk;
pub mod stats;
pub mod synth;

use std::path::Path;

use axi_core::data_io::{parse_series, write_series};
use axi_core::RateSeries;

use crate::{CliError, Context};

pub fn load_series(ctx: &mut Context, path: &Path) -> Result<RateSeries, CliError> {
    let path = ctx.input(path);
    let parsed = parse_series(&path)?;
    for w in parsed.warnings {
        ctx.sink.warn(w);
    }
    Ok(parsed.value)
}

pub fn series_bytes(series: &RateSeries) -> Vec<u8> {
    let mut buf = Vec::new();
    write_series(&mut buf, series).expect("write to memory");
    buf
}

/// Writes a series artifact, warning when it is empty.
pub fn emit_series(ctx: &mut Context, file: &str, series: &RateSeries) -> Result<(), CliError> {
    if series.series.is_empty() {
        ctx.sink.warn(format!("{file}: no observations; wrote header only"));
    }
    ctx.sink.file(file, &series_bytes(series))
}

pub fn parse_value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    crate::config::parse_setting(key, raw)
}

/// `name=value` pairs from repeated flags.
pub fn split_pair<'a>(flag: &str, raw: &'a str) -> Result<(&'a str, &'a str), CliError> {
    raw.split_once('=')
        .filter(|(k, v)| !k.is_empty() && !v.is_empty())
        .ok_or_else(|| CliError::Usage(format!("{flag} expects NAME=VALUE, got '{raw}'")))
}
