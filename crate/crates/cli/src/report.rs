use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

/// One CSV row. Column order is the header order and must not change.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRow {
    pub suite: String,
    pub case: String,
    pub parameter: String,
    /// Full-precision decimal, empty when no value is computed.
    pub value: String,
    pub predicted_log10_error: Option<f64>,
    pub measured_log10_error: Option<f64>,
    pub evaluations: usize,
    pub wall_time_ms: u64,
}

pub const HEADER: [&str; 8] = [
    "suite",
    "case",
    "parameter",
    "value",
    "predicted_log10_error",
    "measured_log10_error",
    "evaluations",
    "wall_time_ms",
];

pub fn write_rows(path: &Path, rows: &[BenchRow]) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Always)
        .from_path(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    if rows.is_empty() {
        writer.write_record(HEADER)?;
    }
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

/// `log10` of a relative error given as digits of agreement.
pub fn error_from_digits(digits: f64) -> f64 {
    -digits
}
