use ndarray::Array2;
use rand::seq::index::sample;
use rand::Rng;

use crate::bitcore::BoolMatrix;
use crate::error::{dim_err, param_err, Result};
use crate::rng::rng_from_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum InitStrategy {
    RandomColumns,
    RandomRows,
    Nmf,
    /// Random columns/rows and NMF in turn; NMF only when data is missing.
    #[default]
    Alternate,
    /// Random columns and random rows in turn; NMF when data is missing.
    RandomAlternate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Columns,
    Rows,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitConfig {
    pub strategy: InitStrategy,
    pub nmf_iters: usize,
    /// The NMF threshold is drawn uniformly from this interval.
    pub delta_range: (f64, f64),
    /// Fixed threshold instead of a random one.
    pub delta_override: Option<f64>,
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig { strategy: InitStrategy::Alternate, nmf_iters: 200, delta_range: (0.3, 0.7), delta_override: None }
    }
}

/// `r` distinct uniformly chosen columns of `x` (an `m x r` W), or rows
/// (an `r x n` H).
pub fn init_random_selection(x: &BoolMatrix, r: usize, axis: Axis, seed: u64) -> Result<BoolMatrix> {
    let avail = match axis {
        Axis::Columns => x.cols(),
        Axis::Rows => x.rows(),
    };
    if r == 0 || r > avail {
        return param_err(format!("cannot pick {r} distinct {axis:?} out of {avail}"));
    }
    let mut rng = rng_from_seed(seed);
    let idx = sample(&mut rng, avail, r).into_vec();
    Ok(match axis {
        Axis::Columns => x.select_cols(&idx),
        Axis::Rows => x.select_rows(&idx),
    })
}

const EPS: f64 = 1e-12;

/// Mask-weighted NMF of `M ⊙ X` by multiplicative updates, then thresholded
/// to binary factors. Each rank-one pair is first rescaled so that
/// `max W(:,k) = max H(k,:)`; both factors are then cut at one threshold.
pub fn init_nmf(x: &BoolMatrix, m: &BoolMatrix, r: usize, cfg: &InitConfig, seed: u64) -> Result<(BoolMatrix, BoolMatrix)> {
    if x.shape() != m.shape() {
        return dim_err(format!("X is {:?} but M is {:?}", x.shape(), m.shape()));
    }
    if r == 0 {
        return param_err("rank must be at least 1");
    }
    let (rows, cols) = x.shape();
    let mut rng = rng_from_seed(seed);
    let mf = Array2::from_shape_fn((rows, cols), |(i, j)| m.get(i, j) as u8 as f64);
    let xf = Array2::from_shape_fn((rows, cols), |(i, j)| (x.get(i, j) && m.get(i, j)) as u8 as f64);
    let mut w = Array2::from_shape_fn((rows, r), |_| rng.gen::<f64>());
    let mut h = Array2::from_shape_fn((r, cols), |_| rng.gen::<f64>());

    for _ in 0..cfg.nmf_iters {
        let mwh = &mf * &w.dot(&h);
        let num = xf.dot(&h.t());
        let den = mwh.dot(&h.t());
        w.zip_mut_with(&num, |a, &n| *a *= n);
        w.zip_mut_with(&den, |a, &d| *a /= d + EPS);

        let mwh = &mf * &w.dot(&h);
        let num = w.t().dot(&xf);
        let den = w.t().dot(&mwh);
        h.zip_mut_with(&num, |a, &n| *a *= n);
        h.zip_mut_with(&den, |a, &d| *a /= d + EPS);
    }

    for k in 0..r {
        let wmax = w.column(k).fold(0.0f64, |a, &b| a.max(b));
        let hmax = h.row(k).fold(0.0f64, |a, &b| a.max(b));
        if wmax > 0.0 && hmax > 0.0 {
            let alpha = (hmax / wmax).sqrt();
            w.column_mut(k).mapv_inplace(|v| v * alpha);
            h.row_mut(k).mapv_inplace(|v| v / alpha);
        }
    }

    let delta = match cfg.delta_override {
        Some(d) => d,
        None => {
            let (lo, hi) = cfg.delta_range;
            if hi > lo {
                rng.gen_range(lo..hi)
            } else {
                lo
            }
        }
    };
    let cut = |v: f64| v > 0.0 && v >= delta;
    let wb = BoolMatrix::from_fn(rows, r, |i, k| cut(w[[i, k]]));
    let hb = BoolMatrix::from_fn(r, cols, |k, j| cut(h[[k, j]]));
    Ok((wb, hb))
}
