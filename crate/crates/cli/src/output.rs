//! Tables rendered as CSV or JSON with fixed float formatting, written
//! atomically.

use std::io::Write;
use std::path::Path;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Exact integer, kept as its decimal string.
    Int(String),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn int(v: impl ToString) -> Cell {
        Cell::Int(v.to_string())
    }

    pub fn opt_float(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

/// 17 significant digits, lowercase scientific.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn csv_text(&self) -> String {
        match self {
            Cell::Int(s) | Cell::Text(s) => s.clone(),
            Cell::Float(x) => format_float(*x),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) | Cell::Text(v) => s.serialize_str(v),
            Cell::Float(x) if x.is_finite() => {
                let raw = RawValue::from_string(format_float(*x)).map_err(serde::ser::Error::custom)?;
                raw.serialize(s)
            }
            Cell::Float(_) | Cell::Empty => s.serialize_none(),
            Cell::Bool(b) => s.serialize_bool(*b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// `key = value` lines: CSV footer comments, JSON `summary`.
    pub summary: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

struct Row<'a>(&'a [&'static str], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

struct Rows<'a>(&'a Table);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.rows.len()))?;
        for row in &self.0.rows {
            seq.serialize_element(&Row(&self.0.columns, row))?;
        }
        seq.end()
    }
}

struct Summary<'a>(&'a [(&'static str, Cell)]);

impl Serialize for Summary<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct Document<'a> {
    rows: Rows<'a>,
    #[serde(skip_serializing_if = "Summary::is_empty")]
    summary: Summary<'a>,
    meta: &'a serde_json::Value,
}

impl Summary<'_> {
    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn render(table: &Table, format: Format, meta: &serde_json::Value) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let fail = |e: csv::Error| CliError::Output(e.to_string());
            w.write_record(&table.columns).map_err(fail)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::csv_text)).map_err(fail)?;
            }
            let mut bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
            for (k, v) in &table.summary {
                writeln!(bytes, "# {k}={}", v.csv_text()).expect("write to Vec");
            }
            Ok(bytes)
        }
        Format::Json => {
            let doc = Document {
                rows: Rows(table),
                summary: Summary(&table.summary),
                meta,
            };
            let mut bytes =
                serde_json::to_vec_pretty(&doc).map_err(|e| CliError::Output(e.to_string()))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let fail = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
