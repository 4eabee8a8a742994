//! Report rendering (csv, aligned table, json) and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Table,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Table => "txt",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (csv, table, json)")),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Table => "table",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Empty,
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Num(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<chrono::NaiveDate> for Cell {
    fn from(d: chrono::NaiveDate) -> Self {
        Cell::Text(d.format("%Y-%m-%d").to_string())
    }
}

/// A named rectangular result.
#[derive(Debug, Clone)]
pub struct Report {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_header(name: &str, header: Vec<String>) -> Self {
        Self { name: name.to_string(), header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Table => self.table(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::plain)).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 cells")
    }

    fn table(&self) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| match c {
                        Cell::Num(v) => format!("{v:.6}"),
                        other => other.plain(),
                    })
                    .collect()
            })
            .collect();
        let mut widths: Vec<usize> = self.header.iter().map(String::len).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, row: &[String], numeric: &[bool]| {
            let parts: Vec<String> = row
                .iter()
                .zip(&widths)
                .zip(numeric)
                .map(|((c, w), num)| if *num { format!("{c:>w$}") } else { format!("{c:<w$}") })
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        let numeric: Vec<bool> = (0..self.header.len())
            .map(|i| {
                self.rows
                    .iter()
                    .all(|r| matches!(r[i], Cell::Num(_) | Cell::Int(_) | Cell::Empty))
                    && !self.rows.is_empty()
            })
            .collect();
        line(&mut out, &self.header, &numeric);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        let _ = writeln!(out, "{}", rule.join("  "));
        for row in &cells {
            line(&mut out, row, &numeric);
        }
        out
    }

    fn json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self.header.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json");
        s.push('\n');
        s
    }
}

/// Where results go: files under `dir`, or stdout.
pub struct Sink {
    pub dir: Option<PathBuf>,
    pub format: Format,
    pub written: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>, format: Format) -> Result<Self, CliError> {
        if let Some(d) = &dir {
            fs::create_dir_all(d)
                .map_err(|e| CliError::Data(format!("cannot create output directory {}: {e}", d.display())))?;
        }
        Ok(Self { dir, format, written: Vec::new(), warnings: Vec::new() })
    }

    pub fn require_dir(&self, what: &str) -> Result<&Path, CliError> {
        self.dir
            .as_deref()
            .ok_or_else(|| CliError::Usage(format!("{what} writes several files; pass --out DIR")))
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }

    /// Writes a file verbatim (data artifacts keep their own schema).
    pub fn file(&mut self, name: &str, contents: &[u8]) -> Result<(), CliError> {
        match &self.dir {
            Some(d) => {
                let path = d.join(name);
                fs::write(&path, contents)
                    .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
                self.written.push(path);
            }
            None => {
                std::io::stdout()
                    .write_all(contents)
                    .map_err(|e| CliError::Data(format!("stdout: {e}")))?;
            }
        }
        Ok(())
    }

    /// Writes a report in the selected format, warning when it has no rows.
    pub fn report(&mut self, report: &Report) -> Result<(), CliError> {
        if report.rows.is_empty() {
            self.warn(format!("{} is empty; wrote header only", report.name));
        }
        let name = format!("{}.{}", report.name, self.format.extension());
        self.file(&name, report.render(self.format).as_bytes())
    }
}

/// Flat `key=value` record of one run.
pub struct Manifest {
    pub lines: Vec<String>,
}

impl Manifest {
    pub fn write(&self, dir: Option<&Path>) -> Result<(), CliError> {
        let mut text = self.lines.join("\n");
        text.push('\n');
        match dir {
            Some(d) => {
                let path = d.join("manifest.txt");
                fs::write(&path, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
            }
            None => {
                for line in text.lines() {
                    eprintln!("manifest: {line}");
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("curve", &["c", "label"]);
        r.push(vec![Cell::Num(0.5), "a,b".into()]);
        r.push(vec![Cell::Empty, "x".into()]);
        r
    }

    #[test]
    fn csv_quotes_and_blanks() {
        assert_eq!(sample().render(Format::Csv), "c,label\n0.5,\"a,b\"\n,x\n");
    }

    #[test]
    fn json_types() {
        let v: Value = serde_json::from_str(&sample().render(Format::Json)).unwrap();
        assert_eq!(v[0]["c"], 0.5);
        assert!(v[1]["c"].is_null());
    }

    #[test]
    fn table_aligns() {
        let t = sample().render(Format::Table);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("0.500000"));
    }
}
