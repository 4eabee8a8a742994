use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use super::{check_header, parse_date, parse_f64, read_to_string, Parsed};
use crate::error::{Error, Result};
use crate::index_engine::{DailySpreadDecomposition, RiskFreeCurve};
use crate::series::{IndexSeries, RateKind, RateSeries};
use crate::stats_lab::{Frequency, TransformKind, TransformSpec};

const SERIES_HEADER: [&str; 2] = ["date", "value_pct"];

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes())
}

fn record_error(source: &str, e: csv::Error) -> Error {
    Error::Parse {
        path: source.to_string(),
        line: e.position().map_or(0, |p| p.line()),
        column: "-".into(),
        message: e.to_string(),
    }
}

/// `# key: value` metadata lines.
fn metadata(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .filter_map(|l| l.split_once(':'))
        .map(|(k, v)| (k.trim().to_ascii_lowercase(), v.trim().to_string()))
        .collect()
}

/// Reads a `date,value_pct` series file with a `# kind:` comment header.
pub fn parse_series(path: impl AsRef<Path>) -> Result<Parsed<RateSeries>> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let default_name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    read_series(&text, &path.display().to_string(), &default_name)
}

/// Parses series text. Rows may be in any order; duplicate dates are rejected.
pub fn read_series(text: &str, source: &str, default_name: &str) -> Result<Parsed<RateSeries>> {
    let meta = metadata(text);
    let mut warnings = Vec::new();
    let kind = match meta.get("kind") {
        Some(k) => k.parse::<RateKind>().map_err(|e| Error::Parse {
            path: source.to_string(),
            line: 1,
            column: "kind".into(),
            message: e.to_string(),
        })?,
        None => {
            warnings.push(format!("{source}: no '# kind:' header, assuming composite"));
            RateKind::Composite
        }
    };

    let mut rdr = csv_reader(text);
    let mut points: Vec<(NaiveDate, f64, u64)> = Vec::new();
    let mut header_seen = false;
    for record in rdr.records() {
        let record = record.map_err(|e| record_error(source, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if !header_seen {
            check_header(&record, &SERIES_HEADER, source, line)?;
            header_seen = true;
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                path: source.to_string(),
                line,
                column: "-".into(),
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let date = parse_date(&record[0], source, line, "date")?;
        let value = parse_f64(&record[1], source, line, "value_pct")?;
        points.push((date, value, line));
    }
    if !header_seen {
        return Err(Error::Parse {
            path: source.to_string(),
            line: 1,
            column: "header".into(),
            message: "missing header row".into(),
        });
    }
    points.sort_by_key(|(d, _, _)| *d);
    if let Some(w) = points.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateDate {
            path: format!("{source} (line {})", w[1].2.max(w[0].2)),
            date: w[0].0,
        });
    }
    let name = meta.get("name").cloned().unwrap_or_else(|| default_name.to_string());
    let mut series = IndexSeries::new(name, points.into_iter().map(|(d, v, _)| (d, v)).collect())?;
    if let Some(unit) = meta.get("unit") {
        series.unit = unit.clone();
    }
    if let Some(cal) = meta.get("calendar") {
        series.calendar = cal.clone();
    }
    Ok(Parsed {
        value: RateSeries::new(kind, series),
        warnings,
    })
}

/// Writes a series in the `date,value_pct` schema with metadata comments.
pub fn write_series<W: Write>(mut w: W, series: &RateSeries) -> std::io::Result<()> {
    writeln!(w, "# kind: {}", series.kind)?;
    writeln!(w, "# name: {}", series.series.name)?;
    writeln!(w, "# unit: {}", series.series.unit)?;
    writeln!(w, "# calendar: {}", series.series.calendar)?;
    writeln!(w, "{}", SERIES_HEADER.join(","))?;
    for (d, v) in series.series.points() {
        writeln!(w, "{},{}", d.format("%Y-%m-%d"), v)?;
    }
    Ok(())
}

fn decomposition_header() -> Vec<String> {
    let mut h = vec!["date".to_string()];
    for field in ["spread", "weight"] {
        h.push(format!("st_{field}"));
        h.extend((1..=4).map(|j| format!("lt{j}_{field}")));
    }
    h.push("daily_spread".into());
    for field in ["volume", "maturity"] {
        h.push(format!("st_{field}"));
        h.extend((1..=4).map(|j| format!("lt{j}_{field}")));
    }
    h.push("weighted_avg_maturity".into());
    h
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per date mirroring [`DailySpreadDecomposition`]; empty cells mark
/// buckets without trades.
pub fn write_decompositions<W: Write>(mut w: W, rows: &[DailySpreadDecomposition]) -> std::io::Result<()> {
    writeln!(w, "{}", decomposition_header().join(","))?;
    for d in rows {
        let mut cells = vec![d.date.format("%Y-%m-%d").to_string(), opt(d.st_spread)];
        cells.extend(d.lt_bucket_spreads.iter().map(|s| opt(*s)));
        cells.push(d.st_weight.to_string());
        cells.extend(d.lt_weights.iter().map(f64::to_string));
        cells.push(d.daily_spread.to_string());
        cells.push(d.st_volume.to_string());
        cells.extend(d.lt_volumes.iter().map(f64::to_string));
        cells.push(opt(d.st_maturity));
        cells.extend(d.lt_maturities.iter().map(|m| opt(*m)));
        cells.push(d.weighted_avg_maturity.to_string());
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn parse_decompositions(path: impl AsRef<Path>) -> Result<Vec<DailySpreadDecomposition>> {
    let path = path.as_ref();
    let source = path.display().to_string();
    let text = read_to_string(path)?;
    let header = decomposition_header();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();

    let mut rdr = csv_reader(&text);
    let mut out = Vec::new();
    let mut header_seen = false;
    for record in rdr.records() {
        let record = record.map_err(|e| record_error(&source, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if !header_seen {
            check_header(&record, &header_refs, &source, line)?;
            header_seen = true;
            continue;
        }
        if record.len() != header.len() {
            return Err(Error::Parse {
                path: source.clone(),
                line,
                column: "-".into(),
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        let num = |i: usize| parse_f64(&record[i], &source, line, &header[i]);
        let maybe = |i: usize| -> Result<Option<f64>> {
            if record[i].trim().is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        out.push(DailySpreadDecomposition {
            date: parse_date(&record[0], &source, line, "date")?,
            st_spread: maybe(1)?,
            lt_bucket_spreads: [maybe(2)?, maybe(3)?, maybe(4)?, maybe(5)?],
            st_weight: num(6)?,
            lt_weights: [num(7)?, num(8)?, num(9)?, num(10)?],
            daily_spread: num(11)?,
            st_volume: num(12)?,
            lt_volumes: [num(13)?, num(14)?, num(15)?, num(16)?],
            st_maturity: maybe(17)?,
            lt_maturities: [maybe(18)?, maybe(19)?, maybe(20)?, maybe(21)?],
            weighted_avg_maturity: num(22)?,
        });
    }
    if !header_seen {
        return Err(Error::Parse {
            path: source,
            line: 1,
            column: "header".into(),
            message: "missing header row".into(),
        });
    }
    Ok(out)
}

/// One ISO date per line; `#` starts a comment.
pub fn parse_holidays(path: impl AsRef<Path>) -> Result<Vec<NaiveDate>> {
    let path = path.as_ref();
    let source = path.display().to_string();
    read_to_string(path)?
        .lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then_some((i as u64 + 1, l))
        })
        .map(|(line, l)| parse_date(l, &source, line, "date"))
        .collect()
}

/// Risk-free curves from a `date,tenor_years,rate_pct` file.
pub fn parse_curves(path: impl AsRef<Path>) -> Result<BTreeMap<NaiveDate, RiskFreeCurve>> {
    let path = path.as_ref();
    let source = path.display().to_string();
    let text = read_to_string(path)?;
    let mut rdr = csv_reader(&text);
    let mut nodes: BTreeMap<NaiveDate, Vec<(f64, f64)>> = BTreeMap::new();
    let mut header_seen = false;
    for record in rdr.records() {
        let record = record.map_err(|e| record_error(&source, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if !header_seen {
            check_header(&record, &["date", "tenor_years", "rate_pct"], &source, line)?;
            header_seen = true;
            continue;
        }
        if record.len() != 3 {
            return Err(Error::Parse {
                path: source.clone(),
                line,
                column: "-".into(),
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let date = parse_date(&record[0], &source, line, "date")?;
        let tenor = parse_f64(&record[1], &source, line, "tenor_years")?;
        let rate = parse_f64(&record[2], &source, line, "rate_pct")?;
        nodes.entry(date).or_default().push((tenor, rate));
    }
    nodes
        .into_iter()
        .map(|(d, n)| Ok((d, RiskFreeCurve::new(n)?)))
        .collect()
}

/// An indicator listed in a correlation manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSpec {
    pub name: String,
    pub path: PathBuf,
    pub transform: TransformSpec,
}

/// Reads `name,path,transform,frequency` rows. Relative paths resolve against
/// the manifest's directory; `frequency` may be left empty to use `default_frequency`.
pub fn parse_indicator_manifest(path: impl AsRef<Path>, default_frequency: Frequency) -> Result<Vec<IndicatorSpec>> {
    let path = path.as_ref();
    let source = path.display().to_string();
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let text = read_to_string(path)?;
    let mut rdr = csv_reader(&text);
    let mut out = Vec::new();
    let mut header_seen = false;
    for record in rdr.records() {
        let record = record.map_err(|e| record_error(&source, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if !header_seen {
            let full = ["name", "path", "transform", "frequency"];
            let expected = if record.len() == 3 { &full[..3] } else { &full[..] };
            check_header(&record, expected, &source, line)?;
            header_seen = true;
            continue;
        }
        let field = |i: usize| record.get(i).unwrap_or("").trim().to_string();
        let bad = |column: &str, e: Error| Error::Parse {
            path: source.clone(),
            line,
            column: column.to_string(),
            message: e.to_string(),
        };
        let kind: TransformKind = field(2).parse().map_err(|e| bad("transform", e))?;
        let frequency = match field(3).as_str() {
            "" => default_frequency,
            f => f.parse().map_err(|e| bad("frequency", e))?,
        };
        let rel = PathBuf::from(field(1));
        out.push(IndicatorSpec {
            name: field(0),
            path: if rel.is_absolute() { rel } else { base.join(rel) },
            transform: TransformSpec { kind, frequency },
        });
    }
    Ok(out)
}
