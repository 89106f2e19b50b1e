//! Deterministic output: CSV (RFC 4180 framing) and JSON with reals printed
//! at 17 significant digits, so identical runs produce identical bytes.

use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::CliError;

/// 17-significant-digit scientific notation; round-trips any f64.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// One table cell.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Real(v) => fmt_real(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// A rectangular table with named columns and optional free-form notes
/// (notes are emitted in JSON only; CSV stays pure data).
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push_reals(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&v| Cell::Real(v)).collect());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        writer.write_record(&self.columns).map_err(CliError::from_csv)?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::csv_field).collect();
            writer.write_record(&fields).map_err(CliError::from_csv)?;
        }
        writer.into_inner().map_err(|e| CliError::io(e.to_string()))
    }
}

/// serde_json formatter printing every f64 at 17 significant digits.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any value to deterministic JSON (compact, fixed field order,
/// 17-significant-digit reals) with a trailing newline.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::io(format!("json serialization: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

/// Writes bytes to the path, or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io(format!("stdout: {e}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::usage(format!("unknown format '{other}' (csv|json)"))),
        }
    }
}

pub fn emit_table(
    table: &Table,
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), CliError> {
    let bytes = match format {
        OutputFormat::Csv => table.to_csv()?,
        OutputFormat::Json => to_json_bytes(table)?,
    };
    write_output(path, &bytes)
}
