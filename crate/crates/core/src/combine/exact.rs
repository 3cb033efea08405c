use super::pool::{CombineSelection, FactorPool};
use crate::bitcore::BoolMatrix;
use crate::budget::Budget;
use crate::error::{dim_err, BmfError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactCombineLimits {
    /// Pools up to this size are always searched exactly.
    pub max_pool: usize,
    /// Larger pools are searched when `C(N, r)` stays below this.
    pub enumeration_cap: u64,
}

impl Default for ExactCombineLimits {
    fn default() -> Self {
        ExactCombineLimits { max_pool: 25, enumeration_cap: 2_000_000 }
    }
}

impl ExactCombineLimits {
    pub fn allows(&self, n: usize, r: usize) -> bool {
        n <= self.max_pool || binomial(n, r.min(n)) <= self.enumeration_cap
    }
}

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Best subset of `min(r, N)` pool factors.
pub fn combine_exact(x: &BoolMatrix, m: &BoolMatrix, pool: &FactorPool, r: usize, limits: &ExactCombineLimits) -> Result<CombineSelection> {
    combine_exact_until(x, m, pool, r, limits, None, &Budget::unlimited())
}

/// Exact combine that can be warm-started with a known selection and
/// stopped at a deadline. A stopped search returns the best selection seen,
/// which is never worse than `start`.
pub fn combine_exact_until(
    x: &BoolMatrix,
    m: &BoolMatrix,
    pool: &FactorPool,
    r: usize,
    limits: &ExactCombineLimits,
    start: Option<&CombineSelection>,
    deadline: &Budget,
) -> Result<CombineSelection> {
    let n_pool = pool.len();
    if n_pool == 0 {
        return dim_err("empty pool");
    }
    if x.shape() != pool.shape() || m.shape() != x.shape() {
        return dim_err(format!("pool is {:?}, X is {:?}, M is {:?}", pool.shape(), x.shape(), m.shape()));
    }
    if !limits.allows(n_pool, r) {
        return Err(BmfError::Capability(format!(
            "exact combine over {n_pool} factors at rank {r} exceeds the limits; use the heuristic"
        )));
    }
    let k = r.min(n_pool);
    let words = x.raw_words().len();
    let obs_one: Vec<u64> = x.raw_words().iter().zip(m.raw_words()).map(|(a, b)| a & b).collect();
    let obs_zero: Vec<u64> = x.raw_words().iter().zip(m.raw_words()).map(|(a, b)| !a & b).collect();
    let outers: Vec<Vec<u64>> = (0..n_pool)
        .map(|i| {
            let mut v = vec![0u64; words];
            pool.or_into(i, &mut v);
            v
        })
        .collect();
    let gain = |i: usize| -> u64 { outers[i].iter().zip(&obs_one).map(|(a, b)| (a & b).count_ones() as u64).sum() };
    let mut order: Vec<usize> = (0..n_pool).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(gain(i)), i));

    // suffix[d] is the union of the candidates from position d on.
    let mut suffix = vec![vec![0u64; words]; n_pool + 1];
    for d in (0..n_pool).rev() {
        let (head, tail) = suffix.split_at_mut(d + 1);
        for ((a, b), c) in head[d].iter_mut().zip(&tail[0]).zip(&outers[order[d]]) {
            *a = b | c;
        }
    }

    let mut s = Search {
        k,
        order,
        suffix,
        outers,
        obs_one,
        obs_zero,
        best: Vec::new(),
        best_err: u64::MAX,
        deadline,
        ticks: 0,
        stopped: false,
    };
    // Incumbents: the warm start and the greedy forward pick.
    let mut incumbents = vec![greedy_forward_indices(&s, k)];
    if let Some(st) = start {
        let mut idx = st.indices.clone();
        idx.sort_unstable();
        idx.dedup();
        if idx.len() == k && idx.iter().all(|&i| i < n_pool) {
            incumbents.push(idx);
        }
    }
    for idx in incumbents {
        let e = s.error_of(&idx);
        s.offer(idx, e);
    }
    let cover = vec![0u64; words];
    let mut chosen = Vec::with_capacity(k);
    s.descend(0, &mut chosen, &cover);
    Ok(CombineSelection { indices: s.best, error: s.best_err })
}

struct Search<'a> {
    k: usize,
    order: Vec<usize>,
    suffix: Vec<Vec<u64>>,
    outers: Vec<Vec<u64>>,
    obs_one: Vec<u64>,
    obs_zero: Vec<u64>,
    best: Vec<usize>,
    best_err: u64,
    deadline: &'a Budget,
    ticks: u64,
    stopped: bool,
}

impl Search<'_> {
    fn error_of(&self, idx: &[usize]) -> u64 {
        let mut c = vec![0u64; self.obs_one.len()];
        for &i in idx {
            for (a, b) in c.iter_mut().zip(&self.outers[i]) {
                *a |= b;
            }
        }
        let (fp, fneg) = self.counts(&c);
        fp + fneg
    }

    /// (covered observed zeros, uncovered observed ones).
    fn counts(&self, cover: &[u64]) -> (u64, u64) {
        let mut fp = 0;
        let mut fneg = 0;
        for ((&c, &z), &o) in cover.iter().zip(&self.obs_zero).zip(&self.obs_one) {
            fp += (c & z).count_ones() as u64;
            fneg += (!c & o).count_ones() as u64;
        }
        (fp, fneg)
    }

    /// Keeps `idx` if it beats the incumbent (ties: smaller sorted indices).
    fn offer(&mut self, mut idx: Vec<usize>, err: u64) {
        idx.sort_unstable();
        if err < self.best_err || (err == self.best_err && idx < self.best) {
            self.best = idx;
            self.best_err = err;
        }
    }

    fn descend(&mut self, depth: usize, chosen: &mut Vec<usize>, cover: &[u64]) {
        if self.stopped {
            return;
        }
        self.ticks += 1;
        if self.ticks.is_multiple_of(256) && self.deadline.expired() {
            self.stopped = true;
            return;
        }
        let (fp, fneg) = self.counts(cover);
        let need = self.k - chosen.len();
        if need == 0 {
            self.offer(chosen.clone(), fp + fneg);
            return;
        }
        let remaining = &self.order[depth..];
        if remaining.len() < need {
            return;
        }
        // No factor can undo a covered zero. The uncovered ones can only be
        // reduced by the best `need` marginal gains, and never below those
        // outside every remaining candidate.
        let mut gains: Vec<u64> = remaining
            .iter()
            .map(|&i| {
                self.outers[i]
                    .iter()
                    .zip(cover)
                    .zip(&self.obs_one)
                    .map(|((o, c), x)| (o & !c & x).count_ones() as u64)
                    .sum()
            })
            .collect();
        gains.sort_unstable_by(|a, b| b.cmp(a));
        let reach: u64 = gains.iter().take(need).sum();
        let unreachable: u64 = self.suffix[depth]
            .iter()
            .zip(cover)
            .zip(&self.obs_one)
            .map(|((u, c), x)| (x & !c & !u).count_ones() as u64)
            .sum();
        let lb = fp + fneg.saturating_sub(reach).max(unreachable);
        if lb > self.best_err {
            return;
        }
        let f = self.order[depth];
        let mut with = cover.to_vec();
        for (a, b) in with.iter_mut().zip(&self.outers[f]) {
            *a |= b;
        }
        chosen.push(f);
        self.descend(depth + 1, chosen, &with);
        chosen.pop();
        self.descend(depth + 1, chosen, cover);
    }
}

fn greedy_forward_indices(s: &Search, k: usize) -> Vec<usize> {
    let mut cover = vec![0u64; s.obs_one.len()];
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(u64, usize)> = None;
        for i in 0..s.outers.len() {
            if chosen.contains(&i) {
                continue;
            }
            let mut c = cover.clone();
            for (a, b) in c.iter_mut().zip(&s.outers[i]) {
                *a |= b;
            }
            let (fp, fneg) = s.counts(&c);
            if best.is_none_or(|(e, _)| fp + fneg < e) {
                best = Some((fp + fneg, i));
            }
        }
        let (_, i) = best.expect("pool has at least k factors");
        for (a, b) in cover.iter_mut().zip(&s.outers[i]) {
            *a |= b;
        }
        chosen.push(i);
    }
    chosen
}

/// Adds, `k` times, the factor giving the lowest error. Used to seed the
/// heuristic when no gathered factorization is available.
pub fn greedy_forward(x: &BoolMatrix, m: &BoolMatrix, pool: &FactorPool, r: usize) -> Result<CombineSelection> {
    if pool.is_empty() {
        return dim_err("empty pool");
    }
    let k = r.min(pool.len());
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(u64, usize)> = None;
        for i in 0..pool.len() {
            if chosen.contains(&i) {
                continue;
            }
            chosen.push(i);
            let e = pool.selection_error(x, m, &chosen)?;
            chosen.pop();
            if best.is_none_or(|(b, _)| e < b) {
                best = Some((e, i));
            }
        }
        chosen.push(best.expect("candidate exists").1);
    }
    CombineSelection::new(x, m, pool, chosen)
}
