//! Packed Boolean vectors and matrices and the kernels everything else is
//! built on: Boolean product and masked squared error.

mod bitvec;
mod matrix;
mod ops;
pub mod reference;

pub use bitvec::BitVec;
pub use matrix::BoolMatrix;
pub use ops::{bool_product, factor_error, masked_error_split, masked_sq_error, observed_ones};

pub(crate) use bitvec::{masked_xor_count, or_words, words_for};

use crate::error::Result;
use rand::Rng;

pub fn bool_or(a: &BitVec, b: &BitVec) -> Result<BitVec> {
    a.or(b)
}

pub fn bool_and(a: &BitVec, b: &BitVec) -> Result<BitVec> {
    a.and(b)
}

pub fn bool_xor(a: &BitVec, b: &BitVec) -> Result<BitVec> {
    a.xor(b)
}

pub fn ones_count(m: &BoolMatrix) -> usize {
    m.count_ones()
}

pub fn row_sums(m: &BoolMatrix) -> Vec<usize> {
    (0..m.rows()).map(|i| m.row_count_ones(i)).collect()
}

/// Matrix with i.i.d. Bernoulli(`p`) entries.
pub fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, p: f64, rng: &mut R) -> BoolMatrix {
    BoolMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(p))
}

pub fn random_bitvec<R: Rng + ?Sized>(len: usize, p: f64, rng: &mut R) -> BitVec {
    let mut v = BitVec::zeros(len);
    for i in 0..len {
        if rng.gen_bool(p) {
            v.set(i, true);
        }
    }
    v
}
