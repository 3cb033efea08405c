//! Byte-per-entry matrices and a textbook triple-loop Boolean product. Used
//! as the baseline when benchmarking the packed kernels and as a test oracle.

use super::matrix::BoolMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ByteMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u8>,
}

impl ByteMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ByteMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_bool(m: &BoolMatrix) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.data[i * m.cols() + j] = m.get(i, j) as u8;
            }
        }
        out
    }

    pub fn to_bool(&self) -> BoolMatrix {
        BoolMatrix::from_fn(self.rows, self.cols, |i, j| self.data[i * self.cols + j] != 0)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }
}

/// `C(i,j) = OR_k A(i,k) AND B(k,j)` in i-k-j loop order, one byte per entry.
pub fn naive_bool_product(a: &ByteMatrix, b: &ByteMatrix) -> ByteMatrix {
    assert_eq!(a.cols, b.rows, "naive_bool_product: inner dimensions differ");
    let (m, r, n) = (a.rows, a.cols, b.cols);
    let mut c = ByteMatrix::zeros(m, n);
    for i in 0..m {
        let crow = &mut c.data[i * n..(i + 1) * n];
        for k in 0..r {
            if a.data[i * r + k] != 0 {
                let brow = &b.data[k * n..(k + 1) * n];
                for (cv, &bv) in crow.iter_mut().zip(brow) {
                    *cv |= bv;
                }
            }
        }
    }
    c
}

/// Plain double loop over entries.
pub fn naive_masked_sq_error(x: &ByteMatrix, m: &ByteMatrix, a: &ByteMatrix) -> u64 {
    let mut e = 0;
    for idx in 0..x.data.len() {
        if m.data[idx] != 0 && x.data[idx] != a.data[idx] {
            e += 1;
        }
    }
    e
}
