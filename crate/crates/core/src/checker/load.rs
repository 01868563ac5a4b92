use std::path::Path;

use chrono::NaiveDate;
use serde_json::Value;

use crate::diag::Diagnostic;
use crate::model::{ColumnMeta, ColumnType, SourceKind};

use super::{Cell, Column, Dataset};

/// On-disk encodings the checker reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl TableFormat {
    pub fn from_source_kind(kind: SourceKind) -> Option<Self> {
        match kind {
            SourceKind::CsvFile => Some(TableFormat::Csv),
            SourceKind::JsonFile => Some(TableFormat::Json),
            SourceKind::Mysql => None,
        }
    }

    pub fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(TableFormat::Csv),
            "json" => Some(TableFormat::Json),
            _ => None,
        }
    }
}

/// Reads `path` and types its columns per `columns`. Undeclared columns in
/// the file are ignored.
pub fn load_table(path: &Path, format: TableFormat, columns: &[ColumnMeta]) -> Result<Dataset, Diagnostic> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Diagnostic::error("C002", format!("cannot read {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    load_table_str(&name, &text, format, columns)
}

pub fn load_table_str(
    name: &str,
    text: &str,
    format: TableFormat,
    columns: &[ColumnMeta],
) -> Result<Dataset, Diagnostic> {
    let cols = match format {
        TableFormat::Csv => load_csv(name, text, columns)?,
        TableFormat::Json => load_json(name, text, columns)?,
    };
    Ok(Dataset::new(name, cols).expect("loaders emit equal-length columns"))
}

fn malformed(name: &str, detail: impl std::fmt::Display) -> Diagnostic {
    Diagnostic::error("C002", format!("{name}: malformed table: {detail}"))
}

fn missing(name: &str, column: &str) -> Diagnostic {
    Diagnostic::error("C001", format!("{name}: declared column {column} is missing"))
}

fn load_csv(name: &str, text: &str, columns: &[ColumnMeta]) -> Result<Vec<Column>, Diagnostic> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| malformed(name, e))?.clone();
    let mut indices = Vec::with_capacity(columns.len());
    for c in columns {
        let i = headers
            .iter()
            .position(|h| h.trim() == c.name)
            .ok_or_else(|| missing(name, &c.name))?;
        indices.push(i);
    }
    let mut out: Vec<Column> = columns.iter().map(|c| Column::empty(&c.name)).collect();
    for record in reader.records() {
        let record = record.map_err(|e| malformed(name, e))?;
        for ((meta, &i), col) in columns.iter().zip(&indices).zip(&mut out) {
            let raw = record.get(i).unwrap_or("");
            let cell = if raw.is_empty() {
                Some(Cell::Null)
            } else {
                coerce_text(raw, meta.ty)
            };
            col.push_coerced(cell);
        }
    }
    Ok(out)
}

fn load_json(name: &str, text: &str, columns: &[ColumnMeta]) -> Result<Vec<Column>, Diagnostic> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(name, e))?;
    let Value::Array(rows) = value else {
        return Err(malformed(name, "top level is not an array"));
    };
    let mut objects = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        match row {
            Value::Object(map) => objects.push(map),
            _ => return Err(malformed(name, format!("row {} is not an object", i + 1))),
        }
    }
    if !objects.is_empty() {
        for c in columns {
            if !objects.iter().any(|o| o.contains_key(&c.name)) {
                return Err(missing(name, &c.name));
            }
        }
    }
    let mut out: Vec<Column> = columns.iter().map(|c| Column::empty(&c.name)).collect();
    for obj in objects {
        for (meta, col) in columns.iter().zip(&mut out) {
            let cell = match obj.get(&meta.name) {
                None | Some(Value::Null) => Some(Cell::Null),
                Some(v) => coerce_json(v, meta.ty),
            };
            col.push_coerced(cell);
        }
    }
    Ok(out)
}

/// A cell of the declared type, or `None` when `raw` does not read as one.
fn coerce_text(raw: &str, ty: ColumnType) -> Option<Cell> {
    if ty == ColumnType::String {
        return Some(Cell::Text(raw.to_string()));
    }
    let s = raw.trim();
    match ty {
        ColumnType::String => unreachable!(),
        ColumnType::Integer => s.parse().ok().map(Cell::Int),
        ColumnType::Number => s.parse::<f64>().ok().filter(|n| n.is_finite()).map(Cell::Num),
        ColumnType::Boolean => match s.to_ascii_lowercase().as_str() {
            "true" => Some(Cell::Bool(true)),
            "false" => Some(Cell::Bool(false)),
            _ => None,
        },
        ColumnType::Date => NaiveDate::parse_from_str(s, "%Y-%m-%d").ok().map(Cell::Date),
    }
}

fn coerce_json(v: &Value, ty: ColumnType) -> Option<Cell> {
    match (v, ty) {
        (Value::String(s), _) => coerce_text(s, ty),
        (Value::Number(n), ColumnType::String) => Some(Cell::Text(n.to_string())),
        (Value::Bool(b), ColumnType::String) => Some(Cell::Text(b.to_string())),
        (Value::Number(n), ColumnType::Integer) => n.as_i64().map(Cell::Int),
        (Value::Number(n), ColumnType::Number) => n.as_f64().map(Cell::Num),
        (Value::Bool(b), ColumnType::Boolean) => Some(Cell::Bool(*b)),
        _ => None,
    }
}
