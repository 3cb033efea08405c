use std::io::Write;
use std::time::Instant;

use anyhow::{bail, Result};
use bmf_core::bitcore::random_matrix;
use bmf_core::bitcore::reference::{naive_bool_product, ByteMatrix};
use bmf_core::bool_product;
use bmf_core::rng::{derive_seed, rng_from_seed};

/// Average timings of one matrix size.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelTiming {
    pub n: usize,
    pub trials: usize,
    pub packed_ms: f64,
    pub naive_ms: f64,
    /// `naive_ms / packed_ms`.
    pub speedup: f64,
    /// Packed and naive products agreed on every trial.
    pub identical: bool,
}

/// Multiplies random `n x n` Boolean matrices (entries rounded from
/// uniform draws on `[0, 1]`) with the packed kernel and the byte-per-entry
/// reference, `trials` times per size. Only the products are timed.
pub fn bench_kernel(sizes: &[usize], trials: usize, seed: u64) -> Result<Vec<KernelTiming>> {
    if trials == 0 {
        bail!("--trials must be positive");
    }
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        if n == 0 {
            bail!("matrix sizes must be at least 1");
        }
        let (mut packed, mut naive) = (0.0, 0.0);
        let mut identical = true;
        for t in 0..trials {
            let mut rng = rng_from_seed(derive_seed(seed, (n * 1000 + t) as u64));
            let a = random_matrix(n, n, 0.5, &mut rng);
            let b = random_matrix(n, n, 0.5, &mut rng);
            let (ab, bb) = (ByteMatrix::from_bool(&a), ByteMatrix::from_bool(&b));

            let start = Instant::now();
            let p = bool_product(&a, &b)?;
            packed += start.elapsed().as_secs_f64();

            let start = Instant::now();
            let q = naive_bool_product(&ab, &bb);
            naive += start.elapsed().as_secs_f64();

            identical &= ByteMatrix::from_bool(&p) == q;
        }
        let (packed_ms, naive_ms) = (1e3 * packed / trials as f64, 1e3 * naive / trials as f64);
        out.push(KernelTiming { n, trials, packed_ms, naive_ms, speedup: naive_ms / packed_ms.max(1e-9), identical });
    }
    Ok(out)
}

pub fn print_timings<W: Write>(mut out: W, rows: &[KernelTiming]) -> Result<()> {
    writeln!(out, "{:>6} {:>7} {:>12} {:>12} {:>9} {:>10}", "n", "trials", "packed_ms", "naive_ms", "speedup", "identical")?;
    for r in rows {
        writeln!(
            out,
            "{:>6} {:>7} {:>12.3} {:>12.3} {:>9.1} {:>10}",
            r.n, r.trials, r.packed_ms, r.naive_ms, r.speedup, r.identical
        )?;
    }
    Ok(())
}

pub fn write_timings_csv<W: Write>(out: W, rows: &[KernelTiming]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "trials", "packed_ms", "naive_ms", "speedup", "identical"])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.trials.to_string(),
            format!("{:.3}", r.packed_ms),
            format!("{:.3}", r.naive_ms),
            format!("{:.2}", r.speedup),
            r.identical.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
