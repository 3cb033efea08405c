//! Reading and writing binary matrices with masks, binarization, topic
//! importances, error metrics and CSV reports.

mod binarize;
mod dense;
mod report;
mod topics;
mod triplets;

pub use binarize::{binarize, BinarizePolicy};
pub use dense::{load_dense, parse_dense, save_dense, save_pgm, write_dense};
pub use report::{write_report, ReportRow};
pub use topics::{top_words, topic_importance, TopicImportance};
pub use triplets::{load_triplets, parse_triplets, save_triplets, write_triplets};

use std::path::Path;

use crate::bitcore::{factor_error, observed_ones, BoolMatrix};
use crate::error::{dim_err, BmfError, Result};

/// A binary matrix with its observation mask and optional labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub name: String,
    pub x: BoolMatrix,
    /// Observed entries; all ones when nothing is missing.
    pub m: BoolMatrix,
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset, zeroing `x` wherever `m` is zero.
    pub fn new(name: impl Into<String>, x: BoolMatrix, m: BoolMatrix) -> Result<Self> {
        if x.shape() != m.shape() {
            return dim_err(format!("X is {:?} but M is {:?}", x.shape(), m.shape()));
        }
        let x = x.and(&m)?;
        Ok(Dataset { name: name.into(), x, m, row_labels: None, col_labels: None })
    }

    pub fn complete(name: impl Into<String>, x: BoolMatrix) -> Self {
        let m = BoolMatrix::ones(x.rows(), x.cols());
        Dataset { name: name.into(), x, m, row_labels: None, col_labels: None }
    }

    pub fn with_labels(mut self, rows: Option<Vec<String>>, cols: Option<Vec<String>>) -> Result<Self> {
        if let Some(r) = &rows {
            if r.len() != self.x.rows() {
                return dim_err(format!("{} row labels for {} rows", r.len(), self.x.rows()));
            }
        }
        if let Some(c) = &cols {
            if c.len() != self.x.cols() {
                return dim_err(format!("{} column labels for {} columns", c.len(), self.x.cols()));
            }
        }
        self.row_labels = rows;
        self.col_labels = cols;
        Ok(self)
    }

    pub fn shape(&self) -> (usize, usize) {
        self.x.shape()
    }

    pub fn missing(&self) -> usize {
        self.x.rows() * self.x.cols() - self.m.count_ones()
    }

    pub fn is_complete(&self) -> bool {
        self.m.is_all_ones()
    }

    /// Loads a dense (`.txt`, `.dense`) or triplet (`.tri`, `.triplets`) file,
    /// picking the format by extension (dense otherwise).
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        match path.extension().and_then(|e| e.to_str()) {
            Some("tri") | Some("triplets") => load_triplets(path),
            _ => load_dense(path),
        }
    }
}

type Labels = Vec<String>;

fn sidecar(path: &Path, ext: &str) -> std::path::PathBuf {
    path.with_extension(ext)
}

/// Labels from `<stem>.rows` / `<stem>.cols` next to the data file.
pub(crate) fn read_sidecars(path: &Path) -> Result<(Option<Labels>, Option<Labels>)> {
    let read = |ext: &str| -> Result<Option<Vec<String>>> {
        let p = sidecar(path, ext);
        if !p.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(p)?;
        Ok(Some(text.lines().map(|l| l.trim_end().to_string()).collect()))
    };
    Ok((read("rows")?, read("cols")?))
}

pub(crate) fn write_sidecars(ds: &Dataset, path: &Path) -> Result<()> {
    for (labels, ext) in [(&ds.row_labels, "rows"), (&ds.col_labels, "cols")] {
        if let Some(l) = labels {
            let mut s = l.join("\n");
            s.push('\n');
            std::fs::write(sidecar(path, ext), s)?;
        }
    }
    Ok(())
}

pub(crate) fn stem(path: &Path) -> String {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("data").to_string()
}

/// `‖M ⊙ (X − W∘H)‖ / ‖M ⊙ X‖`.
pub fn relative_error(x: &BoolMatrix, m: &BoolMatrix, w: &BoolMatrix, h: &BoolMatrix) -> Result<f64> {
    relative_error_of(factor_error(x, m, w, h)?, x, m)
}

/// Relative error for an already computed squared error.
pub fn relative_error_of(error: u64, x: &BoolMatrix, m: &BoolMatrix) -> Result<f64> {
    let ones = observed_ones(x, m)?;
    if ones == 0 {
        return Err(BmfError::Undefined("relative error of an all-zero observed matrix".into()));
    }
    Ok((error as f64 / ones as f64).sqrt())
}

#[cfg(test)]
mod tests;
