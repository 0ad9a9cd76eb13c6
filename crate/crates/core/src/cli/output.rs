//! CSV and JSON result files.
//!
//! Every CSV starts with one `#` comment line holding the seed and the full
//! resolved configuration, followed by a header row.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::error::Result;

/// One point of a curve; missing sides are written as empty cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub x: f64,
    pub analytic: Option<f64>,
    pub empirical: Option<f64>,
    pub abs_err: Option<f64>,
}

impl CurveRow {
    pub fn new(x: f64, analytic: Option<f64>, empirical: Option<f64>) -> Self {
        let abs_err = analytic.zip(empirical).map(|(a, e)| (a - e).abs());
        CurveRow { x, analytic, empirical, abs_err }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub param: String,
    pub scheme: String,
    pub value: f64,
}

impl TableRow {
    pub fn new(param: impl Into<String>, scheme: impl Into<String>, value: f64) -> Self {
        TableRow { param: param.into(), scheme: scheme.into(), value }
    }
}

pub fn provenance_line(config: &RunConfig) -> Result<String> {
    Ok(format!("# seed={} config={}", config.seed, serde_json::to_string(config)?))
}

pub fn write_rows<T: Serialize>(path: &Path, config: &RunConfig, rows: &[T]) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    writeln!(file, "{}", provenance_line(config)?)?;
    let mut w = csv::Writer::from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let mut rows = Vec::new();
    for row in r.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut file, value)?;
    writeln!(file)?;
    file.flush()?;
    Ok(())
}
