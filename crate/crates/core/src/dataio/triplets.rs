use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::{read_sidecars, stem, write_sidecars, Dataset};
use crate::bitcore::BoolMatrix;
use crate::error::{BmfError, Result};

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(BmfError::Parse { line, msg: msg.into() })
}

/// Sparse format: a header line `m n`, then one `i j` line (1-based) per
/// one. An optional `# missing` line starts a section of unobserved
/// entries. Other lines starting with `#` are comments.
pub fn parse_triplets(name: &str, text: &str) -> Result<Dataset> {
    let mut dims = None;
    let mut missing_section = false;
    let mut seen = HashSet::new();
    let mut x = BoolMatrix::zeros(0, 0);
    let mut m = BoolMatrix::zeros(0, 0);
    for (ln, line) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if c.trim().eq_ignore_ascii_case("missing") {
                if dims.is_none() {
                    return perr(ln, "missing section before header");
                }
                missing_section = true;
            }
            continue;
        }
        let nums: Vec<usize> = match line.split_whitespace().map(str::parse).collect() {
            Ok(v) => v,
            Err(_) => return perr(ln, format!("expected two integers, got {line:?}")),
        };
        if nums.len() != 2 {
            return perr(ln, format!("expected two integers, got {line:?}"));
        }
        let Some((rows, cols)) = dims else {
            dims = Some((nums[0], nums[1]));
            x = BoolMatrix::zeros(nums[0], nums[1]);
            m = BoolMatrix::ones(nums[0], nums[1]);
            continue;
        };
        let (i, j) = (nums[0], nums[1]);
        if i == 0 || j == 0 || i > rows || j > cols {
            return perr(ln, format!("entry ({i}, {j}) outside {rows}x{cols}"));
        }
        if !seen.insert((i, j)) {
            return perr(ln, format!("duplicate entry ({i}, {j})"));
        }
        if missing_section {
            m.set(i - 1, j - 1, false);
        } else {
            x.set(i - 1, j - 1, true);
        }
    }
    if dims.is_none() {
        return perr(1, "missing `m n` header");
    }
    Dataset::new(name, x, m)
}

pub fn load_triplets(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let ds = parse_triplets(&stem(path), &std::fs::read_to_string(path)?)?;
    let (rows, cols) = read_sidecars(path)?;
    ds.with_labels(rows, cols)
}

pub fn write_triplets(x: &BoolMatrix, m: &BoolMatrix) -> String {
    let mut s = format!("{} {}\n", x.rows(), x.cols());
    for i in 0..x.rows() {
        for j in x.row(i).iter_ones() {
            let _ = writeln!(s, "{} {}", i + 1, j + 1);
        }
    }
    let unobserved = m.not();
    if unobserved.count_ones() > 0 {
        s.push_str("# missing\n");
        for i in 0..m.rows() {
            for j in unobserved.row(i).iter_ones() {
                let _ = writeln!(s, "{} {}", i + 1, j + 1);
            }
        }
    }
    s
}

pub fn save_triplets(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, write_triplets(&ds.x, &ds.m))?;
    write_sidecars(ds, path)
}
