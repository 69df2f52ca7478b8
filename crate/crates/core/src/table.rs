// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

//! Columnar in-memory tables loaded from delimited text.
//!
//! Cells are typed at load time: a trimmed field that reads as a decimal
//! number (optional sign, optional `$`/`€` prefix, optional `,` thousands
//! grouping, at most one decimal point) becomes [`Cell::Number`], an empty
//! field becomes [`Cell::Empty`] and anything else is kept as trimmed text.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

/// Fraction of non-empty cells that must be numeric for a column to count as numeric.
pub const NUMERIC_THRESHOLD: f64 = 0.9;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed delimited text: {0}")]
    Csv(String),
    #[error("missing header row")]
    MissingHeader,
    #[error("empty header name in column {0}")]
    EmptyHeader(usize),
    #[error("duplicate header {0:?}")]
    DuplicateHeader(String),
    #[error("ragged row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown column {0:?}")]
    UnknownColumn(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    Empty,
}

impl Cell {
    /// Types one raw field. Returns the cell and whether a currency prefix was seen.
    pub fn parse(raw: &str) -> (Cell, bool) {
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            return (Cell::Empty, false);
        }
        match parse_number(trimmed) {
            Some((value, currency)) => (Cell::Number(value), currency),
            None => (Cell::Text(trimmed.to_string()), false),
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Cell::Empty)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Number(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
            Cell::Empty => Ok(()),
        }
    }
}

/// Parses a decimal literal with optional sign, currency prefix and thousands
/// grouping. Returns the value and whether a currency prefix was present.
pub fn parse_number(text: &str) -> Option<(f64, bool)> {
    let mut rest = text;
    let mut negative = false;
    let mut currency = false;
    let mut take_sign = |s: &mut &str| {
        if let Some(r) = s.strip_prefix('-') {
            *s = r;
            negative = true;
            true
        } else if let Some(r) = s.strip_prefix('+') {
            *s = r;
            true
        } else {
            false
        }
    };
    let signed = take_sign(&mut rest);
    for symbol in ['$', '€'] {
        if let Some(r) = rest.strip_prefix(symbol) {
            rest = r;
            currency = true;
            break;
        }
    }
    // "$-12" as well as "-$12"
    if currency && !signed {
        take_sign(&mut rest);
    }

    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (rest, None),
    };
    if let Some(frac) = frac_part {
        if !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if int_part.is_empty() && frac.is_empty() {
            return None;
        }
    } else if int_part.is_empty() {
        return None;
    }
    let digits = if int_part.contains(',') {
        let mut groups = int_part.split(',');
        let head = groups.next()?;
        if head.is_empty() || head.len() > 3 || !head.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut digits = head.to_string();
        for group in groups {
            if group.len() != 3 || !group.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            digits.push_str(group);
        }
        digits
    } else {
        if !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        int_part.to_string()
    };

    let mut literal = String::with_capacity(digits.len() + 8);
    if negative {
        literal.push('-');
    }
    literal.push_str(if digits.is_empty() { "0" } else { &digits });
    if let Some(frac) = frac_part {
        if !frac.is_empty() {
            literal.push('.');
            literal.push_str(frac);
        }
    }
    let value: f64 = literal.parse().ok()?;
    // overflowing literals stay text; -0 is normalised so equal text gives equal cells
    if !value.is_finite() {
        return None;
    }
    Some((if value == 0.0 { 0.0 } else { value }, currency))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub cells: Vec<Cell>,
    /// Set when at least one numeric cell carried a currency prefix.
    pub currency: bool,
}

impl Column {
    pub fn kind(&self) -> ColumnKind {
        classify_column(&self.cells)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Numeric,
    Textual,
    Mixed,
    Empty,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Numeric => "numeric",
            Kind::Textual => "textual",
            Kind::Mixed => "mixed",
            Kind::Empty => "empty",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnKind {
    pub kind: Kind,
    /// Numeric cells over non-empty cells; 0 for an all-empty column.
    pub numeric_fraction: f64,
    pub empty_cells: usize,
}

pub fn classify_column(cells: &[Cell]) -> ColumnKind {
    let mut numeric = 0usize;
    let mut empty = 0usize;
    for cell in cells {
        match cell {
            Cell::Number(_) => numeric += 1,
            Cell::Empty => empty += 1,
            Cell::Text(_) => {}
        }
    }
    let filled = cells.len() - empty;
    if filled == 0 {
        return ColumnKind {
            kind: Kind::Empty,
            numeric_fraction: 0.0,
            empty_cells: empty,
        };
    }
    let fraction = numeric as f64 / filled as f64;
    let kind = if fraction >= NUMERIC_THRESHOLD {
        Kind::Numeric
    } else if numeric == 0 {
        Kind::Textual
    } else {
        Kind::Mixed
    };
    ColumnKind {
        kind,
        numeric_fraction: fraction,
        empty_cells: empty,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    dataset_id: String,
    headers: Vec<String>,
    columns: Vec<Column>,
}

impl Table {
    /// Builds a table from already-typed columns. Headers are trimmed and must be
    /// unique and non-empty; columns must have equal length.
    pub fn new(
        dataset_id: impl Into<String>,
        headers: Vec<String>,
        columns: Vec<Column>,
    ) -> Result<Self, TableError> {
        let headers = check_headers(headers)?;
        assert_eq!(headers.len(), columns.len(), "one column per header");
        let rows = columns.first().map_or(0, Column::len);
        for column in &columns {
            if column.len() != rows {
                return Err(TableError::RaggedRow {
                    row: column.len().min(rows) + 1,
                    expected: rows,
                    found: column.len(),
                });
            }
        }
        Ok(Self {
            dataset_id: dataset_id.into(),
            headers,
            columns,
        })
    }

    pub fn load(path: impl AsRef<Path>, delimiter: u8) -> Result<Self, TableError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| TableError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let dataset_id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::from_reader(dataset_id, file, delimiter)
    }

    /// Parses delimited text whose first record is the header row. Row indices in
    /// errors count data rows from 1.
    pub fn from_reader(
        dataset_id: impl Into<String>,
        reader: impl Read,
        delimiter: u8,
    ) -> Result<Self, TableError> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);
        let mut records = rdr.records();
        let header = match records.next() {
            Some(r) => r.map_err(|e| TableError::Csv(e.to_string()))?,
            None => return Err(TableError::MissingHeader),
        };
        let headers = check_headers(header.iter().map(str::to_string).collect())?;
        let mut columns: Vec<Column> = headers
            .iter()
            .map(|_| Column {
                cells: Vec::new(),
                currency: false,
            })
            .collect();
        for (idx, record) in records.enumerate() {
            let record = record.map_err(|e| TableError::Csv(e.to_string()))?;
            if record.len() != headers.len() {
                return Err(TableError::RaggedRow {
                    row: idx + 1,
                    expected: headers.len(),
                    found: record.len(),
                });
            }
            for (column, field) in columns.iter_mut().zip(record.iter()) {
                let (cell, currency) = Cell::parse(field);
                column.currency |= currency;
                column.cells.push(cell);
            }
        }
        Ok(Self {
            dataset_id: dataset_id.into(),
            headers,
            columns,
        })
    }

    /// Writes the table as delimited text. Numbers in currency columns get a `$`
    /// prefix so the currency flag survives a reload.
    pub fn write(&self, writer: impl Write, delimiter: u8) -> Result<(), TableError> {
        let csv_err = |e: csv::Error| TableError::Csv(e.to_string());
        let mut wtr = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .from_writer(writer);
        wtr.write_record(&self.headers).map_err(csv_err)?;
        for row in 0..self.row_count() {
            let fields = self.columns.iter().map(|c| match &c.cells[row] {
                Cell::Number(v) if c.currency => {
                    if *v < 0.0 {
                        format!("-${}", -v)
                    } else {
                        format!("${v}")
                    }
                }
                cell => cell.to_string(),
            });
            wtr.write_record(fields).map_err(csv_err)?;
        }
        wtr.flush().map_err(|e| TableError::Csv(e.to_string()))
    }

    pub fn dataset_id(&self) -> &str {
        &self.dataset_id
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn row_count(&self) -> usize {
        self.columns.first().map_or(0, Column::len)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        self.headers.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Result<&Column, TableError> {
        self.column_index(name)
            .map(|i| &self.columns[i])
            .ok_or_else(|| TableError::UnknownColumn(name.to_string()))
    }
}

fn check_headers(raw: Vec<String>) -> Result<Vec<String>, TableError> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(raw.len());
    for (i, h) in raw.into_iter().enumerate() {
        let h = h.trim().to_string();
        if h.is_empty() {
            return Err(TableError::EmptyHeader(i));
        }
        if !seen.insert(h.clone()) {
            return Err(TableError::DuplicateHeader(h));
        }
        out.push(h);
    }
    if out.is_empty() {
        return Err(TableError::MissingHeader);
    }
    Ok(out)
}
