use crate::bitcore::BoolMatrix;
use crate::error::{dim_err, param_err, Result};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum BinarizePolicy {
    /// `v >= 0.5`.
    #[default]
    Round,
    /// `v != 0`, for term counts.
    Nonzero,
    /// `v >=` the mean of the observed entries of its column.
    MeanPerColumn,
    /// `v >=` the median of the observed entries of its column.
    MedianPerColumn,
    Fixed(f64),
}

/// Thresholds a real matrix given as rows. Masked entries (where `mask` is
/// zero) come out as zero and do not count towards column statistics.
pub fn binarize(values: &[Vec<f64>], mask: Option<&BoolMatrix>, policy: BinarizePolicy) -> Result<BoolMatrix> {
    let rows = values.len();
    let cols = values.first().map_or(0, Vec::len);
    if values.iter().any(|r| r.len() != cols) {
        return dim_err("ragged rows");
    }
    if let Some(m) = mask {
        if m.shape() != (rows, cols) {
            return dim_err(format!("mask is {:?}, values are {:?}", m.shape(), (rows, cols)));
        }
    }
    if values.iter().flatten().any(|v| v.is_nan()) {
        return param_err("NaN in input");
    }
    let observed = |i: usize, j: usize| mask.is_none_or(|m| m.get(i, j));
    let column = |j: usize| -> Vec<f64> { (0..rows).filter(|&i| observed(i, j)).map(|i| values[i][j]).collect() };
    let thresholds: Vec<f64> = match policy {
        BinarizePolicy::Round => vec![0.5; cols],
        BinarizePolicy::Fixed(t) => vec![t; cols],
        BinarizePolicy::Nonzero => vec![f64::NAN; cols],
        BinarizePolicy::MeanPerColumn => (0..cols)
            .map(|j| {
                let c = column(j);
                if c.is_empty() {
                    f64::INFINITY
                } else {
                    // Offset by the minimum so a constant column has its
                    // value as exact mean.
                    let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
                    lo + c.iter().map(|v| v - lo).sum::<f64>() / c.len() as f64
                }
            })
            .collect(),
        BinarizePolicy::MedianPerColumn => (0..cols)
            .map(|j| {
                let mut c = column(j);
                c.sort_by(f64::total_cmp);
                match c.len() {
                    0 => f64::INFINITY,
                    n if n % 2 == 1 => c[n / 2],
                    n => (c[n / 2 - 1] + c[n / 2]) / 2.0,
                }
            })
            .collect(),
    };
    Ok(BoolMatrix::from_fn(rows, cols, |i, j| {
        observed(i, j)
            && match policy {
                BinarizePolicy::Nonzero => values[i][j] != 0.0,
                _ => values[i][j] >= thresholds[j],
            }
    }))
}
