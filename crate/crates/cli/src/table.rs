//! Homogeneous tables and their CSV / JSON serializations.
//!
//! Floats are written as `{:.16e}` (17 significant digits, round-trip
//! exact), non-finite values as `NaN`, `inf`, `-inf` in CSV and `null` in
//! JSON. Integer columns (signs, sizes, counts) are plain integers. JSON
//! output is an array with one object per row, keys in column order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn opt_float(v: Option<f64>) -> Self {
        Cell::Float(v.unwrap_or(f64::NAN))
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json_value(&self) -> String {
        match self {
            Cell::Float(x) if x.is_finite() => format_float(*x),
            Cell::Float(_) => "null".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i8> for Cell {
    fn from(v: i8) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width for table {}",
            self.name
        );
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn to_json(&self) -> String {
        let keys: Vec<String> = self
            .columns
            .iter()
            .map(|c| serde_json::to_string(c).expect("string serializes"))
            .collect();
        let mut out = String::from("[");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n  {" } else { ",\n  {" });
            for (j, (k, cell)) in keys.iter().zip(row).enumerate() {
                let sep = if j == 0 { "" } else { ", " };
                let _ = write!(out, "{sep}{k}: {}", cell.json_value());
            }
            out.push('}');
        }
        out.push_str(if self.rows.is_empty() { "]\n" } else { "\n]\n" });
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Writes `<dir>/<name>.<ext>` atomically and returns the path.
    pub fn write(&self, dir: &Path, format: Format) -> Result<PathBuf> {
        use std::io::Write;
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join(format!("{}.{}", self.name, format.extension()));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
        tmp.write_all(self.render(format).as_bytes())
            .map_err(|e| CliError::io(&path, e))?;
        tmp.persist(&path)
            .map_err(|e| CliError::io(&path, e.error))?;
        Ok(path)
    }
}

/// Header and raw fields of a CSV document.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let parse_err = |e: csv::Error| CliError::Parse {
        path: PathBuf::from("<csv>"),
        message: e.to_string(),
    };
    let header = r
        .headers()
        .map_err(parse_err)?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(parse_err)?.iter().map(String::from).collect());
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_row_format() {
        let mut t = Table::new("m", &["g", "sign"]);
        t.push(vec![3.0.into(), Cell::Int(-1)]);
        assert_eq!(t.to_csv(), "g,sign\n3.0000000000000000e0,-1\n");
    }

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new("e", &["a", "b"]);
        assert_eq!(t.to_csv(), "a,b\n");
        assert_eq!(t.to_json(), "[]\n");
    }

    #[test]
    fn json_keeps_column_order_and_nulls() {
        let mut t = Table::new("j", &["z", "a", "note"]);
        t.push(vec![f64::NAN.into(), 0.5.into(), "x,\"y\"".into()]);
        assert_eq!(
            t.to_json(),
            "[\n  {\"z\": null, \"a\": 5.0000000000000000e-1, \"note\": \"x,\\\"y\\\"\"}\n]\n"
        );
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v[0]["a"], 0.5);
    }

    #[test]
    fn special_values() {
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(-0.0), "-0.0000000000000000e0");
        assert_eq!("inf".parse::<f64>().unwrap(), f64::INFINITY);
        assert!("NaN".parse::<f64>().unwrap().is_nan());
    }
}
