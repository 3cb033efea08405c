use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

/// The best known objective per `(dataset, r)`, used for the
/// `error_diff_vs_reference` column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReferenceTable {
    values: BTreeMap<(String, usize), u64>,
}

const BUILTIN: &str = include_str!("../fixtures/reference_table5.csv");

#[derive(Deserialize)]
struct Row {
    dataset: String,
    r: usize,
    error: u64,
}

impl ReferenceTable {
    /// The 24 values shipped with the tool.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled reference table parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// CSV with columns `dataset,r,error`; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut values = BTreeMap::new();
        for row in rdr.deserialize() {
            let row: Row = row?;
            if values.insert((row.dataset.clone(), row.r), row.error).is_some() {
                bail!("duplicate reference entry for {} r={}", row.dataset, row.r);
            }
        }
        Ok(ReferenceTable { values })
    }

    pub fn get(&self, dataset: &str, r: usize) -> Option<u64> {
        self.values.get(&(dataset.to_string(), r)).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize, u64)> {
        self.values.iter().map(|((d, r), &e)| (d.as_str(), *r, e))
    }
}
