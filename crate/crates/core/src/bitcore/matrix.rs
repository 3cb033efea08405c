use std::sync::OnceLock;

use super::bitvec::{tail_mask, words_for, BitVec, WORD};
use crate::error::{dim_err, Result};

/// Row-major packed Boolean matrix.
///
/// Rows are stored contiguously, `words_per_row` u64 words each, with the
/// padding bits of every row kept at zero. A column-major copy is built on
/// first column access and dropped by any mutation, so readers always see
/// a mirror consistent with the rows.
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
    mirror: OnceLock<Vec<u64>>,
}

impl Clone for BoolMatrix {
    fn clone(&self) -> Self {
        BoolMatrix {
            rows: self.rows,
            cols: self.cols,
            wpr: self.wpr,
            data: self.data.clone(),
            mirror: OnceLock::new(),
        }
    }
}

impl PartialEq for BoolMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for BoolMatrix {}

impl std::hash::Hash for BoolMatrix {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl std::fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BoolMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}", self.get(i, j) as u8)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl BoolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        BoolMatrix { rows, cols, wpr, data: vec![0; rows * wpr], mirror: OnceLock::new() }
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        let full = BitVec::ones(cols);
        for i in 0..rows {
            m.row_words_mut(i).copy_from_slice(full.words());
        }
        m
    }

    pub fn from_rows(rows: &[BitVec]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return dim_err(format!("row {i} has length {}, expected {cols}", r.len()));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Builds an `rows x cols` matrix from column vectors of length `rows`.
    pub fn from_cols(rows: usize, cols: &[BitVec]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != rows {
                return dim_err(format!("column {j} has length {}, expected {rows}", c.len()));
            }
            for i in c.iter_ones() {
                m.set(i, j, true);
            }
        }
        Ok(m)
    }

    /// Parses nested 0/1 slices; ragged input is an error.
    pub fn from_01(rows: &[Vec<u8>]) -> Result<Self> {
        let bv: Vec<BitVec> = rows.iter().map(|r| BitVec::from_01(r)).collect();
        if rows.is_empty() {
            return Ok(Self::zeros(0, 0));
        }
        Self::from_rows(&bv)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.wpr
    }

    /// All row words, row after row.
    #[inline]
    pub fn raw_words(&self) -> &[u64] {
        &self.data
    }

    /// Mutable access to all row words. The caller must keep padding bits
    /// zero.
    #[inline]
    pub fn raw_words_mut(&mut self) -> &mut [u64] {
        self.mirror.take();
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range for {}x{}", self.rows, self.cols);
        (self.data[i * self.wpr + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range for {}x{}", self.rows, self.cols);
        self.mirror.take();
        let w = &mut self.data[i * self.wpr + j / WORD];
        let bit = 1u64 << (j % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        assert!(i < self.rows, "row {i} out of range for {} rows", self.rows);
        &self.data[i * self.wpr..(i + 1) * self.wpr]
    }

    /// Mutable row words. The caller must keep padding bits zero.
    #[inline]
    pub fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        assert!(i < self.rows, "row {i} out of range for {} rows", self.rows);
        self.mirror.take();
        &mut self.data[i * self.wpr..(i + 1) * self.wpr]
    }

    pub fn row(&self, i: usize) -> BitVec {
        BitVec::from_words(self.cols, self.row_words(i).to_vec())
    }

    pub fn set_row(&mut self, i: usize, row: &BitVec) {
        assert_eq!(row.len(), self.cols, "set_row length mismatch");
        self.row_words_mut(i).copy_from_slice(row.words());
    }

    fn mirror(&self) -> &[u64] {
        self.mirror.get_or_init(|| {
            let wpc = words_for(self.rows);
            let mut m = vec![0u64; self.cols * wpc];
            for i in 0..self.rows {
                let (wi, bi) = (i / WORD, i % WORD);
                for (w, &word) in self.row_words(i).iter().enumerate() {
                    let mut x = word;
                    while x != 0 {
                        let j = w * WORD + x.trailing_zeros() as usize;
                        x &= x - 1;
                        m[j * wpc + wi] |= 1u64 << bi;
                    }
                }
            }
            m
        })
    }

    /// Column `j` as packed words (length `ceil(rows/64)`), served from the
    /// column mirror.
    #[inline]
    pub fn col_words(&self, j: usize) -> &[u64] {
        assert!(j < self.cols, "column {j} out of range for {} columns", self.cols);
        let wpc = words_for(self.rows);
        &self.mirror()[j * wpc..(j + 1) * wpc]
    }

    pub fn col(&self, j: usize) -> BitVec {
        BitVec::from_words(self.rows, self.col_words(j).to_vec())
    }

    pub fn set_col(&mut self, j: usize, col: &BitVec) {
        assert_eq!(col.len(), self.rows, "set_col length mismatch");
        for i in 0..self.rows {
            self.set(i, j, col.get(i));
        }
    }

    pub fn transpose(&self) -> BoolMatrix {
        let wpc = words_for(self.rows);
        if self.cols == 0 {
            return BoolMatrix::zeros(0, self.rows);
        }
        BoolMatrix {
            rows: self.cols,
            cols: self.rows,
            wpr: wpc,
            data: self.mirror().to_vec(),
            mirror: OnceLock::new(),
        }
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_count_ones(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_all_ones(&self) -> bool {
        let tail = tail_mask(self.cols);
        (0..self.rows).all(|i| {
            let r = self.row_words(i);
            r.iter().enumerate().all(|(w, &x)| if w + 1 == r.len() { x == tail } else { x == u64::MAX })
        })
    }

    fn check_same_shape(&self, other: &BoolMatrix, op: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return dim_err(format!("{op}: shapes {:?} and {:?}", self.shape(), other.shape()));
        }
        Ok(())
    }

    fn zip_words(&self, other: &BoolMatrix, op: &str, f: impl Fn(u64, u64) -> u64) -> Result<BoolMatrix> {
        self.check_same_shape(other, op)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(BoolMatrix { rows: self.rows, cols: self.cols, wpr: self.wpr, data, mirror: OnceLock::new() })
    }

    pub fn or(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.zip_words(other, "or", |a, b| a | b)
    }

    pub fn and(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.zip_words(other, "and", |a, b| a & b)
    }

    pub fn xor(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.zip_words(other, "xor", |a, b| a ^ b)
    }

    /// `self & !other`, the entries set here and clear in `other`.
    pub fn and_not(&self, other: &BoolMatrix) -> Result<BoolMatrix> {
        self.zip_words(other, "and_not", |a, b| a & !b)
    }

    pub fn not(&self) -> BoolMatrix {
        let mut m = self.clone();
        let tail = tail_mask(self.cols);
        for i in 0..self.rows {
            let r = m.row_words_mut(i);
            for w in r.iter_mut() {
                *w = !*w;
            }
            if let Some(last) = r.last_mut() {
                *last &= tail;
            }
        }
        m
    }

    /// Keeps the columns listed in `idx`, in that order.
    pub fn select_cols(&self, idx: &[usize]) -> BoolMatrix {
        let mut out = BoolMatrix::zeros(self.rows, idx.len());
        for (k, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                if self.get(i, j) {
                    out.set(i, k, true);
                }
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> BoolMatrix {
        let mut out = BoolMatrix::zeros(idx.len(), self.cols);
        for (k, &i) in idx.iter().enumerate() {
            out.row_words_mut(k).copy_from_slice(self.row_words(i));
        }
        out
    }

    pub fn to_01(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect()).collect()
    }
}
