use crate::bitcore::BoolMatrix;
use crate::error::{dim_err, param_err, Result};

/// Importance of word `i` in topic `k`: the number of documents of topic
/// `k` that use the word, or zero when the word is not in the topic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopicImportance {
    pub rows: usize,
    pub topics: usize,
    /// Row-major `rows x topics`.
    pub values: Vec<u32>,
}

impl TopicImportance {
    pub fn get(&self, i: usize, k: usize) -> u32 {
        assert!(i < self.rows && k < self.topics, "index ({i}, {k}) out of range");
        self.values[i * self.topics + k]
    }
}

/// `W_t = W ⊙ (X Hᵀ)` in integer arithmetic.
pub fn topic_importance(x: &BoolMatrix, w: &BoolMatrix, h: &BoolMatrix) -> Result<TopicImportance> {
    if w.rows() != x.rows() || h.cols() != x.cols() || w.cols() != h.rows() {
        return dim_err(format!("X {:?}, W {:?}, H {:?} are not conformable", x.shape(), w.shape(), h.shape()));
    }
    let r = w.cols();
    let mut values = vec![0u32; x.rows() * r];
    for i in 0..x.rows() {
        let xr = x.row_words(i);
        for k in w.row(i).iter_ones() {
            let c: u32 = xr.iter().zip(h.row_words(k)).map(|(a, b)| (a & b).count_ones()).sum();
            values[i * r + k] = c;
        }
    }
    Ok(TopicImportance { rows: x.rows(), topics: r, values })
}

/// The `k` most important labels of each topic, in decreasing importance
/// (ties by label order). Zero-importance words are not listed.
pub fn top_words(wt: &TopicImportance, k: usize, labels: &[String]) -> Result<Vec<Vec<(String, u32)>>> {
    if k == 0 {
        return param_err("k must be at least 1");
    }
    if labels.len() != wt.rows {
        return dim_err(format!("{} labels for {} rows", labels.len(), wt.rows));
    }
    Ok((0..wt.topics)
        .map(|t| {
            let mut words: Vec<usize> = (0..wt.rows).filter(|&i| wt.get(i, t) > 0).collect();
            words.sort_by_key(|&i| (std::cmp::Reverse(wt.get(i, t)), i));
            words.into_iter().take(k).map(|i| (labels[i].clone(), wt.get(i, t))).collect()
        })
        .collect())
}
