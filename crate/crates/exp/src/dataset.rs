//! Dataset CSV files: header `x1,...,xd,y`, one point per row.
//!
//! Error coordinates are 1-based: rows are file lines (the header is line 1),
//! columns count cells from the left.

use std::io::Write;
use std::path::Path;

use ermrer_core::Dataset;

use crate::error::{ExpError, Result};

pub fn ingest_csv_dataset(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| ExpError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(file);

    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let width = header.len();
    if width < 2 {
        return Err(ExpError::MalformedHeader {
            path: path.into(),
            message: "need at least one pattern column and a label column".into(),
        });
    }
    for (i, name) in header.iter().enumerate() {
        let expected = if i + 1 == width { "y".to_string() } else { format!("x{}", i + 1) };
        if name.trim() != expected {
            return Err(ExpError::MalformedHeader {
                path: path.into(),
                message: format!("column {} is `{}`, expected `{expected}`", i + 1, name),
            });
        }
    }

    let mut patterns = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != width {
            return Err(ExpError::RowArity { path: path.into(), row, expected: width, got: record.len() });
        }
        let mut values = Vec::with_capacity(width);
        for (i, cell) in record.iter().enumerate() {
            match cell.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(ExpError::NonFiniteCell {
                        path: path.into(),
                        row,
                        column: i + 1,
                        text: cell.to_string(),
                    })
                }
            }
        }
        labels.push(values.pop().expect("width ≥ 2"));
        patterns.push(values);
    }
    if labels.is_empty() {
        return Err(ExpError::validation("dataset_path", format!("{} has no data rows", path.display())));
    }
    Dataset::new(patterns, labels).map_err(ExpError::InstanceGeneration)
}

fn csv_error(path: &Path, e: csv::Error) -> ExpError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => ExpError::io(path, io),
            _ => unreachable!(),
        }
    } else {
        ExpError::MalformedHeader { path: path.into(), message: e.to_string() }
    }
}

/// Writes `data` in the ingestible format with round-trip exact floats.
pub fn write_csv_dataset(data: &Dataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    let header: Vec<String> =
        (1..=data.pattern_dim()).map(|i| format!("x{i}")).chain(std::iter::once("y".to_string())).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for (x, y) in data.iter() {
        let cells: Vec<String> = x.iter().chain(std::iter::once(&y)).map(|v| format!("{v:?}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    let mut f = std::fs::File::create(path).map_err(|e| ExpError::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| ExpError::io(path, e))
}
