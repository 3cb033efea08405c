use std::fmt::Write as _;
use std::path::Path;

use super::{read_sidecars, stem, write_sidecars, Dataset};
use crate::bitcore::{BitVec, BoolMatrix};
use crate::error::{BmfError, Result};

/// Parses whitespace-separated `0`/`1`/`?` tokens, one matrix row per
/// non-blank line. `?` marks a missing entry.
pub fn parse_dense(name: &str, text: &str) -> Result<Dataset> {
    let mut xs = Vec::new();
    let mut ms = Vec::new();
    let mut width = None;
    for (ln, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if *width.get_or_insert(toks.len()) != toks.len() {
            return Err(BmfError::Parse {
                line: ln + 1,
                msg: format!("row has {} entries, expected {}", toks.len(), width.unwrap()),
            });
        }
        let mut x = BitVec::zeros(toks.len());
        let mut m = BitVec::ones(toks.len());
        for (j, t) in toks.iter().enumerate() {
            match *t {
                "0" => {}
                "1" => x.set(j, true),
                "?" => m.set(j, false),
                other => return Err(BmfError::Parse { line: ln + 1, msg: format!("invalid token {other:?}") }),
            }
        }
        xs.push(x);
        ms.push(m);
    }
    if xs.is_empty() {
        return Ok(Dataset::complete(name, BoolMatrix::zeros(0, 0)));
    }
    Dataset::new(name, BoolMatrix::from_rows(&xs)?, BoolMatrix::from_rows(&ms)?)
}

/// Reads a dense file plus optional `.rows` / `.cols` label files.
pub fn load_dense(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let ds = parse_dense(&stem(path), &std::fs::read_to_string(path)?)?;
    let (rows, cols) = read_sidecars(path)?;
    ds.with_labels(rows, cols)
}

pub fn write_dense(x: &BoolMatrix, m: &BoolMatrix) -> String {
    let mut s = String::with_capacity(x.rows() * (2 * x.cols() + 1));
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            if j > 0 {
                s.push(' ');
            }
            s.push(match (m.get(i, j), x.get(i, j)) {
                (false, _) => '?',
                (true, true) => '1',
                (true, false) => '0',
            });
        }
        s.push('\n');
    }
    s
}

pub fn save_dense(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_dense(&ds.x, &ds.m))?;
    write_sidecars(ds, path)
}

/// Writes a matrix as a plain PGM image, ones black, each entry a
/// `scale x scale` block.
pub fn save_pgm(x: &BoolMatrix, scale: usize, path: impl AsRef<Path>) -> Result<()> {
    let scale = scale.max(1);
    let (h, w) = (x.rows() * scale, x.cols() * scale);
    let mut s = format!("P2\n{w} {h}\n1\n");
    for i in 0..h {
        for j in 0..w {
            let _ = write!(s, "{} ", if x.get(i / scale, j / scale) { 0 } else { 1 });
        }
        s.push('\n');
    }
    std::fs::write(path, s)?;
    Ok(())
}
