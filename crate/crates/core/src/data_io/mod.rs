//! CSV ingestion and emission, configuration files, and the synthetic data generator.

mod series_io;
mod synthetic;
mod transactions;

use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};

pub use series_io::{
    parse_curves, parse_decompositions, parse_holidays, parse_indicator_manifest, parse_series, read_series,
    write_decompositions, write_series, IndicatorSpec,
};
pub use synthetic::{
    generate_sofr, generate_synthetic, SyntheticConfig, StressRegime, GENERATOR_VERSION,
};
pub use transactions::{apply_curves, parse_transactions, read_transactions, write_transactions};

/// A parsed value plus any non-fatal diagnostics.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn parse_date(text: &str, path: &str, line: u64, column: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(text.trim(), "%Y-%m-%d").map_err(|e| Error::Parse {
        path: path.to_string(),
        line,
        column: column.to_string(),
        message: format!("invalid ISO-8601 date '{text}': {e}"),
    })
}

pub(crate) fn parse_f64(text: &str, path: &str, line: u64, column: &str) -> Result<f64> {
    let v: f64 = text.trim().parse().map_err(|_| Error::Parse {
        path: path.to_string(),
        line,
        column: column.to_string(),
        message: format!("invalid number '{text}'"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            path: path.to_string(),
            line,
            column: column.to_string(),
            message: format!("non-finite number '{text}'"),
        });
    }
    Ok(v)
}

pub(crate) fn check_header(found: &csv::StringRecord, expected: &[&str], path: &str, line: u64) -> Result<()> {
    let got: Vec<&str> = found.iter().map(str::trim).collect();
    if got != expected {
        return Err(Error::Parse {
            path: path.to_string(),
            line,
            column: "header".into(),
            message: format!("expected header '{}', found '{}'", expected.join(","), got.join(",")),
        });
    }
    Ok(())
}
