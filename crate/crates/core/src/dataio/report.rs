use std::io::Write;

use serde::Serialize;

use crate::error::Result;

/// One line of a results CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub dataset: String,
    pub method: String,
    pub r: usize,
    pub seed: u64,
    /// Seconds, three decimals.
    pub time_s: String,
    pub error: u64,
    /// Empty when no reference value is known.
    pub error_diff_vs_reference: Option<i64>,
    /// Percent, two decimals; empty when undefined.
    pub relative_error_pct: String,
}

impl ReportRow {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dataset: &str,
        method: &str,
        r: usize,
        seed: u64,
        time_s: f64,
        error: u64,
        reference: Option<u64>,
        relative_error: Option<f64>,
    ) -> Self {
        ReportRow {
            dataset: dataset.into(),
            method: method.into(),
            r,
            seed,
            time_s: format!("{time_s:.3}"),
            error,
            error_diff_vs_reference: reference.map(|b| error as i64 - b as i64),
            relative_error_pct: relative_error.map_or(String::new(), |e| format!("{:.2}", 100.0 * e)),
        }
    }
}

/// Writes the header and rows as CSV.
pub fn write_report<W: Write>(out: W, rows: &[ReportRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "dataset",
            "method",
            "r",
            "seed",
            "time_s",
            "error",
            "error_diff_vs_reference",
            "relative_error_pct",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
