use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use super::{check_header, parse_date, parse_f64, Parsed};
use crate::error::{Error, Result};
use crate::index_engine::{RiskFreeCurve, ScopeTag, Transaction};

const HEADER: [&str; 5] = ["trade_date", "maturity_years", "volume_usd", "spread_pct", "scope"];

/// Reads a transaction CSV from disk.
pub fn parse_transactions(path: impl AsRef<Path>) -> Result<Parsed<Vec<Transaction>>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_transactions(file, &path.display().to_string())
}

/// Reads transactions from any reader; `source` names the input in diagnostics.
/// Lines starting with `#` are comments.
pub fn read_transactions<R: Read>(reader: R, source: &str) -> Result<Parsed<Vec<Transaction>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);

    let mut out = Vec::new();
    let mut header_seen = false;
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            path: source.to_string(),
            line: e.position().map_or(0, |p| p.line()),
            column: "-".into(),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if !header_seen {
            check_header(&record, &HEADER, source, line)?;
            header_seen = true;
            continue;
        }
        if record.len() != HEADER.len() {
            return Err(Error::Parse {
                path: source.to_string(),
                line,
                column: "-".into(),
                message: format!("expected {} fields, found {}", HEADER.len(), record.len()),
            });
        }
        let trade_date = parse_date(&record[0], source, line, HEADER[0])?;
        let maturity = parse_f64(&record[1], source, line, HEADER[1])?;
        let volume = parse_f64(&record[2], source, line, HEADER[2])?;
        let spread = parse_f64(&record[3], source, line, HEADER[3])?;
        let scope: ScopeTag = record[4].parse().map_err(|e: Error| Error::Parse {
            path: source.to_string(),
            line,
            column: HEADER[4].into(),
            message: e.to_string(),
        })?;
        if volume < 0.0 {
            return Err(Error::Parse {
                path: source.to_string(),
                line,
                column: HEADER[2].into(),
                message: format!("negative volume {volume}"),
            });
        }
        if maturity <= 0.0 {
            return Err(Error::Parse {
                path: source.to_string(),
                line,
                column: HEADER[1].into(),
                message: format!("maturity {maturity} must be positive"),
            });
        }
        out.push(Transaction {
            trade_date,
            maturity,
            volume,
            spread,
            scope,
        });
    }
    if !header_seen {
        return Err(Error::Parse {
            path: source.to_string(),
            line: 1,
            column: "header".into(),
            message: "missing header row".into(),
        });
    }
    let warnings = if out.is_empty() {
        vec![format!("{source}: no transactions after the header")]
    } else {
        Vec::new()
    };
    Ok(Parsed { value: out, warnings })
}

/// Writes transactions with optional leading `# ` comment lines.
pub fn write_transactions<W: Write>(mut w: W, transactions: &[Transaction], comments: &[String]) -> std::io::Result<()> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "{}", HEADER.join(","))?;
    for t in transactions {
        writeln!(
            w,
            "{},{},{},{},{}",
            t.trade_date.format("%Y-%m-%d"),
            t.maturity,
            t.volume,
            t.spread,
            t.scope.as_str()
        )?;
    }
    Ok(())
}

/// Reinterprets each transaction's `spread` as an all-in trade rate and
/// subtracts the matched-tenor point of that date's risk-free curve.
pub fn apply_curves(transactions: &[Transaction], curves: &BTreeMap<NaiveDate, RiskFreeCurve>) -> Result<Vec<Transaction>> {
    transactions
        .iter()
        .map(|t| {
            let curve = curves.get(&t.trade_date).ok_or_else(|| Error::MissingData {
                date: t.trade_date,
                context: "no risk-free curve for trade date".into(),
            })?;
            Ok(Transaction {
                spread: curve.spread(t.spread, t.maturity),
                ..*t
            })
        })
        .collect()
}
