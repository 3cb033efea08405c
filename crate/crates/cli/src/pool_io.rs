//! Text formats for factor pools and selections.
//!
//! A pool file starts with a `m n` header line; every further line is one
//! rank-one factor `source w h`, where `w` and `h` list the 0-based
//! positions of their ones separated by commas (`-` for none). Lines
//! starting with `#` are comments.
//!
//! A selection file has two lines: `error E` and `indices i j ...`.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use bmf_core::combine::{CombineSelection, FactorPool, RankOneFactor};
use bmf_core::BitVec;

fn ones_list(v: &BitVec) -> String {
    let ones: Vec<String> = v.iter_ones().map(|i| i.to_string()).collect();
    if ones.is_empty() {
        "-".into()
    } else {
        ones.join(",")
    }
}

fn parse_ones(tok: &str, len: usize, line: usize) -> Result<BitVec> {
    if tok == "-" {
        return Ok(BitVec::zeros(len));
    }
    let mut idx = Vec::new();
    for t in tok.split(',') {
        let i: usize = t.parse().map_err(|_| anyhow!("line {line}: bad index {t:?}"))?;
        if i >= len {
            bail!("line {line}: index {i} out of range for length {len}");
        }
        idx.push(i);
    }
    Ok(BitVec::from_indices(len, idx))
}

pub fn format_pool(pool: &FactorPool) -> String {
    let (m, n) = pool.shape();
    let mut s = format!("# rank-one factor pool, {} factors\n{m} {n}\n", pool.len());
    for f in pool.factors() {
        writeln!(s, "{} {} {}", f.source, ones_list(&f.w), ones_list(&f.h)).expect("writing to a string");
    }
    s
}

pub fn parse_pool(text: &str) -> Result<FactorPool> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| anyhow!("empty pool file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| anyhow!("line {}: bad header {header:?}", hl + 1)))
        .collect::<Result<_>>()?;
    let [m, n] = dims[..] else { bail!("line {}: header must be `m n`", hl + 1) };
    let mut pool = FactorPool::new(m, n);
    for (i, l) in lines {
        let line = i + 1;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [src, w, h] = toks[..] else { bail!("line {line}: expected `source w h`") };
        let source: usize = src.parse().map_err(|_| anyhow!("line {line}: bad source {src:?}"))?;
        let f = RankOneFactor::new(parse_ones(w, m, line)?, parse_ones(h, n, line)?, source);
        pool.insert(f)?;
    }
    if pool.is_empty() {
        bail!("pool file holds no factors");
    }
    Ok(pool)
}

pub fn write_pool(path: &Path, pool: &FactorPool) -> Result<()> {
    std::fs::write(path, format_pool(pool)).with_context(|| format!("writing {}", path.display()))
}

pub fn read_pool(path: &Path) -> Result<FactorPool> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_pool(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn format_selection(sel: &CombineSelection) -> String {
    let idx: Vec<String> = sel.indices.iter().map(|i| i.to_string()).collect();
    format!("error {}\nindices {}\n", sel.error, idx.join(" "))
}

pub fn parse_selection(text: &str) -> Result<CombineSelection> {
    let mut error = None;
    let mut indices = None;
    for l in text.lines().filter(|l| !l.trim().is_empty()) {
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some("error") => error = Some(toks.next().ok_or_else(|| anyhow!("missing error value"))?.parse()?),
            Some("indices") => indices = Some(toks.map(str::parse).collect::<Result<Vec<usize>, _>>()?),
            Some(other) => bail!("unexpected line starting with {other:?}"),
            None => {}
        }
    }
    Ok(CombineSelection {
        indices: indices.ok_or_else(|| anyhow!("missing `indices` line"))?,
        error: error.ok_or_else(|| anyhow!("missing `error` line"))?,
    })
}
