use std::borrow::Cow;

use rand::Rng as _;

use super::pool::{CombineSelection, FactorPool};
use crate::bitcore::BoolMatrix;
use crate::budget::Budget;
use crate::error::{dim_err, param_err, Result};
use crate::rng::rng_from_seed;

/// Limits of the swap heuristic. Unset limits scale with the pool size `N`
/// and the rank: `T_max = min(10 r N, 10_000)`, `n_trials = min(2 r N, 20_000)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct HeurCombParams {
    /// Maximum number of accepted swaps.
    pub t_max: Option<usize>,
    /// Consecutive failed swaps before giving up.
    pub n_trials: Option<usize>,
    pub seed: u64,
}

impl HeurCombParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `(T_max, n_trials)` for a pool of `n` factors at rank `r`.
    pub fn resolve(&self, r: usize, n: usize) -> Result<(usize, usize)> {
        let t_max = self.t_max.unwrap_or_else(|| (10 * r * n).clamp(1, 10_000));
        let n_trials = self.n_trials.unwrap_or_else(|| (2 * r * n).clamp(1, 20_000));
        if t_max == 0 || n_trials == 0 {
            return param_err("T_max and n_trials must be positive");
        }
        Ok((t_max, n_trials))
    }
}

/// Random swap search from `start`: replace a random selected factor by a
/// random unselected one and keep the swap only if the error strictly drops.
pub fn combine_heuristic(
    x: &BoolMatrix,
    m: &BoolMatrix,
    pool: &FactorPool,
    start: &CombineSelection,
    r: usize,
    params: &HeurCombParams,
) -> Result<CombineSelection> {
    Ok(combine_heuristic_traced(x, m, pool, start, r, params, &Budget::unlimited())?.0)
}

/// [`combine_heuristic`] with a deadline; also returns the error after the
/// start and after every accepted swap.
///
/// Repeated indices in `start` are dropped. If that leaves fewer than
/// `min(r, N)` factors, the best unused factors are added first, each only
/// while it strictly lowers the error.
pub fn combine_heuristic_traced(
    x: &BoolMatrix,
    m: &BoolMatrix,
    pool: &FactorPool,
    start: &CombineSelection,
    r: usize,
    params: &HeurCombParams,
    deadline: &Budget,
) -> Result<(CombineSelection, Vec<u64>)> {
    let n_pool = pool.len();
    if n_pool == 0 {
        return dim_err("empty pool");
    }
    if start.indices.iter().any(|&i| i >= n_pool) {
        return dim_err("start selection refers to factors outside the pool");
    }
    let (t_max, n_trials) = params.resolve(r, n_pool)?;
    let mut sel: Vec<usize> = Vec::with_capacity(r);
    for &i in &start.indices {
        if !sel.contains(&i) {
            sel.push(i);
        }
    }
    sel.truncate(r);
    let mut err = pool.selection_error(x, m, &sel)?;
    let mut trace = vec![err];

    let (xw, mw) = (x.raw_words(), m.raw_words());
    let outers = Outers::new(pool);
    let words = xw.len();

    // Fill missing slots while that strictly helps.
    while sel.len() < r.min(n_pool) {
        let base = union(&outers, &sel, words);
        let mut best: Option<(u64, usize)> = None;
        for i in (0..n_pool).filter(|i| !sel.contains(i)) {
            let e = xor_count_with(xw, mw, &base, &outers.get(i));
            if best.is_none_or(|(b, _)| e < b) {
                best = Some((e, i));
            }
        }
        match best {
            Some((e, i)) if e < err => {
                sel.push(i);
                err = e;
                trace.push(err);
            }
            _ => break,
        }
    }

    let mut unused: Vec<usize> = (0..n_pool).filter(|i| !sel.contains(i)).collect();
    if sel.is_empty() || unused.is_empty() {
        return Ok((CombineSelection { indices: sel, error: err }, trace));
    }
    let mut rng = rng_from_seed(params.seed);
    let mut others = exclusions(&outers, &sel, words);
    let (mut improvements, mut fails) = (0usize, 0usize);
    while fails < n_trials && improvements < t_max {
        if (fails + improvements) % 64 == 63 && deadline.expired() {
            break;
        }
        let u = rng.gen_range(0..unused.len());
        let k = rng.gen_range(0..sel.len());
        let e = xor_count_with(xw, mw, &others[k], &outers.get(unused[u]));
        if e < err {
            std::mem::swap(&mut sel[k], &mut unused[u]);
            err = e;
            trace.push(err);
            others = exclusions(&outers, &sel, words);
            improvements += 1;
            fails = 0;
        } else {
            fails += 1;
        }
    }
    Ok((CombineSelection { indices: sel, error: err }, trace))
}

/// Outer products as word buffers, materialized up front when the pool is
/// small enough to cache them and rebuilt on each use otherwise.
struct Outers<'a> {
    pool: &'a FactorPool,
    pre: Option<Vec<Vec<u64>>>,
}

impl<'a> Outers<'a> {
    fn new(pool: &'a FactorPool) -> Self {
        let pre = pool.cache_enabled().then(|| (0..pool.len()).map(|i| pool.union_words(&[i])).collect());
        Outers { pool, pre }
    }

    fn get(&self, i: usize) -> Cow<'_, [u64]> {
        match &self.pre {
            Some(v) => Cow::Borrowed(&v[i]),
            None => Cow::Owned(self.pool.union_words(&[i])),
        }
    }
}

fn union(outers: &Outers, sel: &[usize], words: usize) -> Vec<u64> {
    let mut acc = vec![0u64; words];
    for &i in sel {
        for (a, b) in acc.iter_mut().zip(outers.get(i).iter()) {
            *a |= b;
        }
    }
    acc
}

/// For each slot, the union of all other selected factors.
fn exclusions(outers: &Outers, sel: &[usize], words: usize) -> Vec<Vec<u64>> {
    (0..sel.len())
        .map(|k| {
            let rest: Vec<usize> = sel.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &i)| i).collect();
            union(outers, &rest, words)
        })
        .collect()
}

fn xor_count_with(x: &[u64], m: &[u64], base: &[u64], extra: &[u64]) -> u64 {
    let mut n = 0u64;
    for i in 0..x.len() {
        n += ((x[i] ^ (base[i] | extra[i])) & m[i]).count_ones() as u64;
    }
    n
}
