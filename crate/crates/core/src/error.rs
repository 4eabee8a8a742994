//! Error type shared by every module of the engine.

use chrono::NaiveDate;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Maturity outside the (0, 5] year eligibility range.
    #[error("ineligible transaction: maturity {maturity} years is outside (0, 5]")]
    IneligibleTransaction { maturity: f64 },

    /// Nothing to aggregate: empty input, zero total weight or zero volume.
    #[error("no data: {0}")]
    NoData(String),

    #[error("benchmark unavailable on {0}: neither the primary nor the fallback index has a value")]
    BenchmarkUnavailable(NaiveDate),

    /// A required observation is absent from a series.
    #[error("missing data for {date}: {context}")]
    MissingData { date: NaiveDate, context: String },

    #[error("series have no dates in common: {0}")]
    EmptyIntersection(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("singular design matrix: {0}")]
    SingularDesign(String),

    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: u64,
        column: String,
        message: String,
    },

    #[error("{path}: duplicate date {date}")]
    DuplicateDate { path: String, date: NaiveDate },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
