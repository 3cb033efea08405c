use super::bitvec::{masked_xor_count, or_words};
use super::matrix::BoolMatrix;
use crate::error::{dim_err, Result};

/// Boolean product `min(1, W H)` of an `m x r` and an `r x n` matrix.
///
/// Row `i` of the result is the OR of the rows of `H` picked out by the ones
/// of row `i` of `W`, which keeps the inner loop word-parallel.
pub fn bool_product(w: &BoolMatrix, h: &BoolMatrix) -> Result<BoolMatrix> {
    if w.cols() != h.rows() {
        return dim_err(format!("bool_product: {:?} times {:?}", w.shape(), h.shape()));
    }
    let mut out = BoolMatrix::zeros(w.rows(), h.cols());
    for i in 0..w.rows() {
        let wr = w.row_words(i);
        let dst = out.row_words_mut(i);
        for (wi, &word) in wr.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                let k = wi * 64 + x.trailing_zeros() as usize;
                x &= x - 1;
                or_words(dst, h.row_words(k));
            }
        }
    }
    Ok(out)
}

fn check3(x: &BoolMatrix, m: &BoolMatrix, a: &BoolMatrix, op: &str) -> Result<()> {
    if x.shape() != m.shape() || x.shape() != a.shape() {
        return dim_err(format!("{op}: shapes {:?}, {:?}, {:?}", x.shape(), m.shape(), a.shape()));
    }
    Ok(())
}

/// Squared Frobenius error restricted to observed entries, i.e. the number
/// of observed positions where `x` and `a` differ.
pub fn masked_sq_error(x: &BoolMatrix, m: &BoolMatrix, a: &BoolMatrix) -> Result<u64> {
    check3(x, m, a, "masked_sq_error")?;
    Ok(masked_xor_count(x.raw_words(), a.raw_words(), m.raw_words()))
}

/// Observed error split into (uncovered ones, covered zeros).
pub fn masked_error_split(x: &BoolMatrix, m: &BoolMatrix, a: &BoolMatrix) -> Result<(u64, u64)> {
    check3(x, m, a, "masked_error_split")?;
    let mut fneg = 0u64;
    let mut fpos = 0u64;
    for ((&xv, &mv), &av) in x.raw_words().iter().zip(m.raw_words()).zip(a.raw_words()) {
        fneg += (mv & xv & !av).count_ones() as u64;
        fpos += (mv & !xv & av).count_ones() as u64;
    }
    Ok((fneg, fpos))
}

/// Error of the factorization `(w, h)` against `x` on the mask.
pub fn factor_error(x: &BoolMatrix, m: &BoolMatrix, w: &BoolMatrix, h: &BoolMatrix) -> Result<u64> {
    masked_sq_error(x, m, &bool_product(w, h)?)
}

/// Number of observed ones, `|M ⊙ X|`.
pub fn observed_ones(x: &BoolMatrix, m: &BoolMatrix) -> Result<u64> {
    if x.shape() != m.shape() {
        return dim_err(format!("observed_ones: shapes {:?} and {:?}", x.shape(), m.shape()));
    }
    Ok(x.raw_words().iter().zip(m.raw_words()).map(|(a, b)| (a & b).count_ones() as u64).sum())
}
