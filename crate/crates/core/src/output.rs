//! CSV tables and the JSON run manifest.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// A CSV cell. Floats are written with 17 significant digits, NaN as `NaN`.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
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

pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:.16e}")
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

/// Writes a header row followed by `rows`, `\n`-terminated.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Cell>]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    let wrap = |e: csv::Error| io_err(path, e.into());
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::DimensionMismatch { left: row.len(), right: header.len() });
        }
        w.write_record(row.iter().map(Cell::render)).map_err(wrap)?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Effective configuration, loadable as a config file.
    pub config: String,
    pub params: crate::model::ModelParams,
    pub outputs: Vec<String>,
    pub wall_time_s: f64,
    pub summary: serde_json::Value,
}

impl Manifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("manifest serialisation: {e}")))?;
        std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_and_nan() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        write_csv(&path, &["tau", "g2"], &[]).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "tau,g2\n");
        write_csv(&path, &["x", "note"], &[vec![f64::NAN.into(), "a, b".into()]]).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "x,note\nNaN,\"a, b\"\n");
    }

    #[test]
    fn float_precision() {
        let s = format_float(0.1);
        assert_eq!(s, "1.0000000000000001e-1");
        assert_eq!(s.parse::<f64>().unwrap(), 0.1);
        assert_eq!(format_float(-2.5), "-2.5000000000000000e0");
    }

    #[test]
    fn row_width_checked() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("b.csv");
        assert!(write_csv(&path, &["a"], &[vec![1.0.into(), 2.0.into()]]).is_err());
    }
}
