//! Alternating optimization for BMF, its initializations and the
//! multi-start driver.

mod ao;
mod init;
mod multistart;

pub use ao::{ao_bmf, ao_bmf_from_h, reinit_zero_rows, AoConfig};
pub use init::{init_nmf, init_random_selection, Axis, InitConfig, InitStrategy};
pub use multistart::{ao_from_init, for_each_run, ms_ao, strategy_for_run, MultiStartConfig};


use crate::bitcore::{factor_error, BoolMatrix};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub w: BoolMatrix,
    pub h: BoolMatrix,
    /// Error after each completed sweep (or a single entry for methods
    /// without sweeps). The last entry is the error of `(w, h)`.
    pub error_trace: Vec<u64>,
    pub method: String,
    pub seed: u64,
    pub iterations: usize,
    /// Number of AO runs behind this result (1 for a single run).
    pub runs: usize,
}

impl Factorization {
    /// Wraps factors that did not come out of an AO loop.
    pub fn from_factors(x: &BoolMatrix, m: &BoolMatrix, w: BoolMatrix, h: BoolMatrix, method: &str, seed: u64) -> Result<Self> {
        let e = factor_error(x, m, &w, &h)?;
        Ok(Factorization { w, h, error_trace: vec![e], method: method.into(), seed, iterations: 0, runs: 1 })
    }

    pub fn error(&self) -> u64 {
        *self.error_trace.last().expect("error trace is never empty")
    }

    pub fn rank(&self) -> usize {
        self.w.cols()
    }

    /// Recomputes the error from the factors.
    pub fn revalidate(&self, x: &BoolMatrix, m: &BoolMatrix) -> Result<u64> {
        factor_error(x, m, &self.w, &self.h)
    }

    pub fn transpose(&self) -> Factorization {
        Factorization { w: self.h.transpose(), h: self.w.transpose(), ..self.clone() }
    }
}
