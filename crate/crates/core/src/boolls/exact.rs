use super::{BoolLsInstance, BoolLsResult};
use crate::bitcore::{masked_xor_count, or_words, BitVec};
use crate::error::{BmfError, Result};

pub const DEFAULT_EXACT_RANK_LIMIT: usize = 20;

/// Up to this rank the exact solver sweeps all `2^r` assignments.
pub const FLAT_SWEEP_MAX_RANK: usize = 12;

/// Key used to break ties between assignments of equal error: fewer ones
/// first, then lexicographically smaller `h` with `h(0)` most significant.
#[inline]
fn tie_key(s: u32, r: usize) -> (u32, u32) {
    (s.count_ones(), s.reverse_bits() >> (32 - r))
}

#[inline]
fn better(err: u64, s: u32, best_err: u64, best: u32, r: usize) -> bool {
    err < best_err || (err == best_err && tie_key(s, r) < tie_key(best, r))
}

fn mask_to_bitvec(s: u32, r: usize) -> BitVec {
    BitVec::from_words(r, vec![s as u64])
}

pub fn solve_exact(inst: &BoolLsInstance) -> Result<BoolLsResult> {
    solve_exact_with_limit(inst, DEFAULT_EXACT_RANK_LIMIT)
}

/// Globally optimal `h`. Errors when `r` exceeds `rank_limit`; use the
/// greedy solvers there.
pub fn solve_exact_with_limit(inst: &BoolLsInstance, rank_limit: usize) -> Result<BoolLsResult> {
    let r = inst.rank();
    if r > rank_limit || r > 31 {
        return Err(BmfError::Capability(format!(
            "exact BoolLS with rank {r} exceeds the limit {rank_limit}; use the greedy backend"
        )));
    }
    let s = if r <= FLAT_SWEEP_MAX_RANK {
        let atoms: Vec<&[u64]> = (0..r).map(|k| inst.atom(k)).collect();
        SubsetCovers::new(&atoms, inst.words()).solve(inst.x().words(), inst.mask().words()).0
    } else {
        branch_and_bound(inst)
    };
    Ok(inst.evaluate(mask_to_bitvec(s, r)))
}

/// Covers of all `2^r` subsets of a fixed set of atoms. Built once per `W`
/// and shared by every column subproblem of one alternating sweep.
pub struct SubsetCovers {
    r: usize,
    words: usize,
    covers: Vec<u64>,
}

impl SubsetCovers {
    pub fn new(atoms: &[&[u64]], words: usize) -> Self {
        let r = atoms.len();
        assert!(r <= FLAT_SWEEP_MAX_RANK + 4, "subset table for rank {r} is too large");
        let n = 1usize << r;
        let mut covers = vec![0u64; n * words];
        for s in 1..n {
            let low = s.trailing_zeros() as usize;
            let prev = s & (s - 1);
            let (head, tail) = covers.split_at_mut(s * words);
            let dst = &mut tail[..words];
            dst.copy_from_slice(&head[prev * words..(prev + 1) * words]);
            or_words(dst, atoms[low]);
        }
        SubsetCovers { r, words, covers }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn cover(&self, s: u32) -> &[u64] {
        let s = s as usize;
        &self.covers[s * self.words..(s + 1) * self.words]
    }

    /// Best assignment (as a bit mask over atoms) and its error.
    pub fn solve(&self, x: &[u64], mask: &[u64]) -> (u32, u64) {
        let mut best = 0u32;
        let mut best_err = masked_xor_count(x, self.cover(0), mask);
        for s in 1..(1u32 << self.r) {
            let err = masked_xor_count(x, self.cover(s), mask);
            if better(err, s, best_err, best, self.r) {
                best = s;
                best_err = err;
            }
        }
        (best, best_err)
    }
}

struct Search<'a> {
    inst: &'a BoolLsInstance<'a>,
    order: Vec<usize>,
    /// suffix[d] = OR of the atoms at order positions d.. (observed ones only).
    suffix: Vec<Vec<u64>>,
    obs_ones: Vec<u64>,
    obs_zeros: Vec<u64>,
    best: u32,
    best_err: u64,
}

/// Depth-first search over the bits of `h`, most useful atoms first.
fn branch_and_bound(inst: &BoolLsInstance) -> u32 {
    let r = inst.rank();
    let w = inst.words();
    let (x, mask) = (inst.x().words(), inst.mask().words());
    let obs_ones: Vec<u64> = x.iter().zip(mask).map(|(a, m)| a & m).collect();
    let obs_zeros: Vec<u64> = x.iter().zip(mask).map(|(a, m)| !a & m).collect();
    let gain = |k: usize| -> u32 { inst.atom(k).iter().zip(&obs_ones).map(|(a, b)| (a & b).count_ones()).sum() };
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&k| (std::cmp::Reverse(gain(k)), k));
    let mut suffix = vec![vec![0u64; w]; r + 1];
    for d in (0..r).rev() {
        let mut s = suffix[d + 1].clone();
        or_words(&mut s, inst.atom(order[d]));
        suffix[d] = s;
    }
    let mut search = Search {
        inst,
        order,
        suffix,
        best_err: obs_ones.iter().map(|v| v.count_ones() as u64).sum(),
        obs_ones,
        obs_zeros,
        best: 0,
    };
    let cover = vec![0u64; w];
    search.descend(0, 0, &cover);
    search.best
}

impl Search<'_> {
    fn bound(&self, depth: usize, cover: &[u64]) -> u64 {
        let mut wrong = 0u64;
        let mut unreachable = 0u64;
        let suffix = &self.suffix[depth];
        for (((&c, &z), &o), &s) in cover.iter().zip(&self.obs_zeros).zip(&self.obs_ones).zip(suffix) {
            wrong += (c & z).count_ones() as u64;
            unreachable += (o & !c & !s).count_ones() as u64;
        }
        wrong + unreachable
    }

    fn descend(&mut self, depth: usize, s: u32, cover: &[u64]) {
        let lb = self.bound(depth, cover);
        if lb > self.best_err {
            return;
        }
        let r = self.order.len();
        if depth == r {
            // At a leaf the bound is the exact error.
            if better(lb, s, self.best_err, self.best, r) {
                self.best = s;
                self.best_err = lb;
            }
            return;
        }
        let k = self.order[depth];
        let mut with = cover.to_vec();
        or_words(&mut with, self.inst.atom(k));
        self.descend(depth + 1, s | (1 << k), &with);
        self.descend(depth + 1, s, cover);
    }
}

#[cfg(test)]
pub(crate) fn solve_exact_bnb(inst: &BoolLsInstance) -> BoolLsResult {
    let s = branch_and_bound(inst);
    inst.evaluate(mask_to_bitvec(s, inst.rank()))
}
