//! Boolean least squares: for a fixed `W`, find the binary `h` minimizing
//! `‖mask ⊙ (x − min(1, W h))‖²`.
//!
//! Three solvers: an exact one (flat sweep or branch-and-bound), the greedy
//! forward selection, and greedy followed by randomized local search.

mod exact;
mod greedy;
mod local;

pub use exact::{solve_exact, solve_exact_with_limit, SubsetCovers, DEFAULT_EXACT_RANK_LIMIT, FLAT_SWEEP_MAX_RANK};
pub use greedy::{solve_greedy, solve_greedy_traced};
pub use local::{local_search, solve_greedy_ls, LocalSearchParams};

use crate::bitcore::{masked_xor_count, or_words, words_for, BitVec, BoolMatrix};
use crate::error::{dim_err, Result};

/// One column subproblem. Atoms are the columns of `W`, each a packed
/// vector of length `m`.
#[derive(Clone, Debug)]
pub struct BoolLsInstance<'a> {
    atoms: Vec<&'a [u64]>,
    m: usize,
    x: &'a BitVec,
    mask: &'a BitVec,
}

impl<'a> BoolLsInstance<'a> {
    /// Instance over the columns of an `m x r` matrix `w`.
    pub fn new(w: &'a BoolMatrix, x: &'a BitVec, mask: &'a BitVec) -> Result<Self> {
        let atoms = (0..w.cols()).map(|k| w.col_words(k)).collect();
        Self::build(atoms, w.rows(), x, mask)
    }

    /// Instance whose atoms are the rows of an `r x m` matrix, i.e. `W` given
    /// in transposed form.
    pub fn from_atom_rows(wt: &'a BoolMatrix, x: &'a BitVec, mask: &'a BitVec) -> Result<Self> {
        let atoms = (0..wt.rows()).map(|k| wt.row_words(k)).collect();
        Self::build(atoms, wt.cols(), x, mask)
    }

    fn build(atoms: Vec<&'a [u64]>, m: usize, x: &'a BitVec, mask: &'a BitVec) -> Result<Self> {
        if atoms.is_empty() {
            return dim_err("BoolLS needs rank at least 1");
        }
        if x.len() != m || mask.len() != m {
            return dim_err(format!("BoolLS: W has {m} rows, x has {}, mask has {}", x.len(), mask.len()));
        }
        Ok(BoolLsInstance { atoms, m, x, mask })
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.atoms.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn x(&self) -> &BitVec {
        self.x
    }

    pub fn mask(&self) -> &BitVec {
        self.mask
    }

    #[inline]
    pub(crate) fn atom(&self, k: usize) -> &[u64] {
        self.atoms[k]
    }

    pub(crate) fn words(&self) -> usize {
        words_for(self.m)
    }

    pub fn cover_of(&self, h: &BitVec) -> BitVec {
        assert_eq!(h.len(), self.rank(), "h has the wrong length");
        let mut c = vec![0u64; self.words()];
        for k in h.iter_ones() {
            or_words(&mut c, self.atoms[k]);
        }
        BitVec::from_words(self.m, c)
    }

    pub(crate) fn cover_error(&self, cover: &[u64]) -> u64 {
        masked_xor_count(self.x.words(), cover, self.mask.words())
    }

    pub fn error_of(&self, h: &BitVec) -> u64 {
        self.cover_error(self.cover_of(h).words())
    }

    /// Packages `h` with its cover and error.
    pub fn evaluate(&self, h: BitVec) -> BoolLsResult {
        let cover = self.cover_of(&h);
        let error = self.cover_error(cover.words());
        BoolLsResult { h, cover, error }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolLsResult {
    pub h: BitVec,
    /// `min(1, W h)`.
    pub cover: BitVec,
    pub error: u64,
}

/// Which BoolLS solver the alternating optimization uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    #[default]
    Exact,
    GreedyLs,
}

#[cfg(test)]
mod tests;
