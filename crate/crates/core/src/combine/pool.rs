use std::collections::HashMap;
use std::sync::OnceLock;

use crate::bitcore::{masked_xor_count, or_words, BitVec, BoolMatrix};
use crate::error::{dim_err, Result};
use crate::factorize::Factorization;

/// The outer product `w hᵀ`, a rectangle of ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneFactor {
    pub w: BitVec,
    pub h: BitVec,
    /// Which gathered run the factor came from.
    pub source: usize,
}

impl RankOneFactor {
    pub fn new(w: BitVec, h: BitVec, source: usize) -> Self {
        // Every factor with an empty side is the zero matrix; store it one way.
        if w.none() || h.none() {
            let (m, n) = (w.len(), h.len());
            return RankOneFactor { w: BitVec::zeros(m), h: BitVec::zeros(n), source };
        }
        RankOneFactor { w, h, source }
    }

    pub fn is_empty(&self) -> bool {
        self.w.none()
    }

    pub fn outer(&self) -> BoolMatrix {
        let mut out = BoolMatrix::zeros(self.w.len(), self.h.len());
        let wpr = out.words_per_row();
        self.or_into(out.raw_words_mut(), wpr);
        out
    }

    /// ORs the factor into a row-major word buffer with `wpr` words per row.
    pub(crate) fn or_into(&self, acc: &mut [u64], wpr: usize) {
        for i in self.w.iter_ones() {
            or_words(&mut acc[i * wpr..(i + 1) * wpr], self.h.words());
        }
    }
}

/// Deduplicated rank-one factors gathered from one or more factorizations.
#[derive(Debug)]
pub struct FactorPool {
    m: usize,
    n: usize,
    factors: Vec<RankOneFactor>,
    index: HashMap<(BitVec, BitVec), usize>,
    cache: Vec<OnceLock<BoolMatrix>>,
    cache_limit_bits: usize,
}

/// Outer products are cached while the pool's total stays under this many
/// bits (64 MiB).
pub const DEFAULT_CACHE_LIMIT_BITS: usize = 1 << 29;

impl Clone for FactorPool {
    fn clone(&self) -> Self {
        FactorPool {
            m: self.m,
            n: self.n,
            factors: self.factors.clone(),
            index: self.index.clone(),
            cache: (0..self.factors.len()).map(|_| OnceLock::new()).collect(),
            cache_limit_bits: self.cache_limit_bits,
        }
    }
}

impl FactorPool {
    pub fn new(m: usize, n: usize) -> Self {
        FactorPool { m, n, factors: Vec::new(), index: HashMap::new(), cache: Vec::new(), cache_limit_bits: DEFAULT_CACHE_LIMIT_BITS }
    }

    pub fn with_cache_limit(mut self, bits: usize) -> Self {
        self.cache_limit_bits = bits;
        self
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[RankOneFactor] {
        &self.factors
    }

    pub fn get(&self, i: usize) -> &RankOneFactor {
        &self.factors[i]
    }

    /// Adds a factor unless an identical outer product is present. Returns
    /// the pool index of the factor either way.
    pub fn insert(&mut self, f: RankOneFactor) -> Result<usize> {
        if f.w.len() != self.m || f.h.len() != self.n {
            return dim_err(format!("factor is {}x{}, pool is {}x{}", f.w.len(), f.h.len(), self.m, self.n));
        }
        let key = (f.w.clone(), f.h.clone());
        if let Some(&i) = self.index.get(&key) {
            return Ok(i);
        }
        let i = self.factors.len();
        self.index.insert(key, i);
        self.factors.push(f);
        self.cache.push(OnceLock::new());
        Ok(i)
    }

    /// Inserts the `r` rank-one factors of a factorization; returns their
    /// pool indices in column order (repeats possible for duplicate columns).
    pub fn add_factorization(&mut self, f: &Factorization, source: usize) -> Result<Vec<usize>> {
        (0..f.w.cols()).map(|k| self.insert(RankOneFactor::new(f.w.col(k), f.h.row(k), source))).collect()
    }

    pub fn from_factorizations<'a>(m: usize, n: usize, fs: impl IntoIterator<Item = &'a Factorization>) -> Result<Self> {
        let mut pool = FactorPool::new(m, n);
        for (s, f) in fs.into_iter().enumerate() {
            pool.add_factorization(f, s)?;
        }
        Ok(pool)
    }

    pub(crate) fn cache_enabled(&self) -> bool {
        self.factors.len().saturating_mul(self.m).saturating_mul(self.n.div_ceil(64) * 64) <= self.cache_limit_bits
    }

    /// ORs factor `i` into a row-major `m x n` word buffer.
    pub(crate) fn or_into(&self, i: usize, acc: &mut [u64]) {
        let wpr = self.n.div_ceil(64);
        if self.cache_enabled() {
            let outer = self.cache[i].get_or_init(|| self.factors[i].outer());
            or_words(acc, outer.raw_words());
        } else {
            self.factors[i].or_into(acc, wpr);
        }
    }

    /// Boolean sum of the selected factors as a row-major word buffer.
    pub(crate) fn union_words(&self, indices: &[usize]) -> Vec<u64> {
        let mut acc = vec![0u64; self.m * self.n.div_ceil(64)];
        for &i in indices {
            if !self.factors[i].is_empty() {
                self.or_into(i, &mut acc);
            }
        }
        acc
    }

    /// Error of the Boolean sum of the selected factors.
    pub fn selection_error(&self, x: &BoolMatrix, m: &BoolMatrix, indices: &[usize]) -> Result<u64> {
        if x.shape() != (self.m, self.n) || m.shape() != x.shape() {
            return dim_err(format!("pool is {}x{}, X is {:?}, M is {:?}", self.m, self.n, x.shape(), m.shape()));
        }
        Ok(masked_xor_count(x.raw_words(), &self.union_words(indices), m.raw_words()))
    }

    /// Factors of a selection as `(W, H)` with exactly `r` columns/rows;
    /// missing ranks are filled with empty factors.
    pub fn rebuild(&self, indices: &[usize], r: usize) -> (BoolMatrix, BoolMatrix) {
        let mut w = BoolMatrix::zeros(self.m, r);
        let mut h = BoolMatrix::zeros(r, self.n);
        for (k, &i) in indices.iter().take(r).enumerate() {
            let f = &self.factors[i];
            w.set_col(k, &f.w);
            h.set_row(k, &f.h);
        }
        (w, h)
    }
}

/// `r` distinct pool indices (fewer when the pool is smaller) and the error
/// of their Boolean sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombineSelection {
    pub indices: Vec<usize>,
    pub error: u64,
}

impl CombineSelection {
    pub fn new(x: &BoolMatrix, m: &BoolMatrix, pool: &FactorPool, indices: Vec<usize>) -> Result<Self> {
        let error = pool.selection_error(x, m, &indices)?;
        Ok(CombineSelection { indices, error })
    }

    /// Indices in increasing order, used for tie-breaking.
    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v
    }
}
