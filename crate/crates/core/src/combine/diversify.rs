use rand::Rng as _;

use super::pool::{CombineSelection, FactorPool};
use crate::bitcore::BoolMatrix;
use crate::error::{dim_err, param_err, Result};
use crate::rng::rng_from_seed;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiversifyParams {
    /// Smallest number of documents a topic may cover.
    pub w_min: u32,
    /// Smallest allowed `G(i,i) / G(i,j)` between two topics.
    pub ratio: f64,
    /// Draws per replaced slot; defaults to `min(2 r N, 20_000)`.
    pub n_trials: Option<usize>,
    pub seed: u64,
}

impl Default for DiversifyParams {
    fn default() -> Self {
        DiversifyParams { w_min: 10, ratio: 8.0, n_trials: None, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiversifyOutcome {
    pub selection: CombineSelection,
    /// Pool indices removed, in order of removal.
    pub evicted: Vec<usize>,
    /// True when both rules hold for the final selection; false when the
    /// loop stopped because only `r` factors were left.
    pub satisfied: bool,
}

/// `G = H Hᵀ` over the selected factors: `G(i,j)` counts the columns of `X`
/// (documents) shared by topics `i` and `j`.
pub fn topic_gram(pool: &FactorPool, indices: &[usize]) -> Vec<Vec<u32>> {
    let hs: Vec<&[u64]> = indices.iter().map(|&i| pool.get(i).h.words()).collect();
    hs.iter()
        .map(|a| hs.iter().map(|b| a.iter().zip(*b).map(|(x, y)| (x & y).count_ones()).sum()).collect())
        .collect()
}

/// The slot to evict next, or `None` when both rules pass. Small topics
/// are handled first; then, for the first pair `(i, j)` with
/// `G(i,i) < ratio * G(i,j)`, topic `j` goes.
pub fn diversity_violation(g: &[Vec<u32>], w_min: u32, ratio: f64) -> Option<usize> {
    if let Some(i) = (0..g.len()).find(|&i| g[i][i] < w_min) {
        return Some(i);
    }
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i != j && g[i][j] > 0 && (g[i][i] as f64) < ratio * g[i][j] as f64 {
                return Some(j);
            }
        }
    }
    None
}

/// Makes the topics of a selection more distinct.
///
/// While a topic covers fewer than `w_min` documents, or two topics share
/// too many documents, the offending factor is removed from the pool and
/// its slot alone is refilled: random pool factors are tried and the first
/// one beating the current error is taken, else the best one tried. Stops
/// when both rules hold or only `r` factors remain.
pub fn diversify(
    x: &BoolMatrix,
    m: &BoolMatrix,
    pool: &FactorPool,
    start: &CombineSelection,
    r: usize,
    params: &DiversifyParams,
) -> Result<DiversifyOutcome> {
    if pool.shape() != x.shape() || m.shape() != x.shape() {
        return dim_err(format!("pool is {:?}, X is {:?}, M is {:?}", pool.shape(), x.shape(), m.shape()));
    }
    if params.ratio.is_nan() || params.ratio <= 0.0 {
        return param_err("ratio must be positive");
    }
    if start.indices.iter().any(|&i| i >= pool.len()) {
        return dim_err("start selection refers to factors outside the pool");
    }
    let n_trials = params.n_trials.unwrap_or_else(|| (2 * r * pool.len()).clamp(1, 20_000));
    if n_trials == 0 {
        return param_err("n_trials must be positive");
    }
    let mut rng = rng_from_seed(params.seed);
    let mut alive = vec![true; pool.len()];
    let mut sel = start.indices.clone();
    let mut err = pool.selection_error(x, m, &sel)?;
    let mut evicted = Vec::new();

    loop {
        let Some(slot) = diversity_violation(&topic_gram(pool, &sel), params.w_min, params.ratio) else {
            return Ok(DiversifyOutcome { selection: CombineSelection { indices: sel, error: err }, evicted, satisfied: true });
        };
        let remaining = alive.iter().filter(|&&a| a).count();
        if remaining <= r {
            return Ok(DiversifyOutcome { selection: CombineSelection { indices: sel, error: err }, evicted, satisfied: false });
        }
        alive[sel[slot]] = false;
        evicted.push(sel[slot]);
        let candidates: Vec<usize> = (0..pool.len()).filter(|&i| alive[i] && !sel.contains(&i)).collect();
        if candidates.is_empty() {
            sel.remove(slot);
            err = pool.selection_error(x, m, &sel)?;
            continue;
        }
        let mut trial = sel.clone();
        let mut best: Option<(u64, usize)> = None;
        for _ in 0..n_trials {
            let c = candidates[rng.gen_range(0..candidates.len())];
            trial[slot] = c;
            let e = pool.selection_error(x, m, &trial)?;
            if e < err {
                best = Some((e, c));
                break;
            }
            if best.is_none_or(|(b, _)| e < b) {
                best = Some((e, c));
            }
        }
        let (e, c) = best.expect("at least one draw");
        sel[slot] = c;
        err = e;
    }
}
