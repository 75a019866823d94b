use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Null distribution used to test conditional information in static mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionalNull {
    /// Every channel shuffled independently, as for the unconditional test.
    Joint,
    /// One channel of the pair permuted within groups of identical
    /// conditioning-set symbols; all other relations are kept.
    Stratified,
}

impl std::fmt::Display for ConditionalNull {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConditionalNull::Joint => "joint",
            ConditionalNull::Stratified => "stratified",
        })
    }
}

/// Groups of observation indices sharing a label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strata {
    rows: Vec<usize>,
    bounds: Vec<usize>,
}

impl Strata {
    pub fn new(labels: &[usize]) -> Self {
        let mut rows: Vec<usize> = (0..labels.len()).collect();
        rows.sort_by_key(|&r| (labels[r], r));
        let mut bounds = vec![0];
        for k in 1..rows.len() {
            if labels[rows[k]] != labels[rows[k - 1]] {
                bounds.push(k);
            }
        }
        bounds.push(rows.len());
        Self { rows, bounds }
    }

    pub fn n_groups(&self) -> usize {
        self.bounds.len() - 1
    }

    /// Permutes `values` within every group.
    pub fn shuffle<T: Copy, R: Rng + ?Sized>(&self, values: &[T], rng: &mut R) -> Vec<T> {
        let mut out = values.to_vec();
        let mut buf = Vec::new();
        for w in self.bounds.windows(2) {
            let group = &self.rows[w[0]..w[1]];
            if group.len() < 2 {
                continue;
            }
            buf.clear();
            buf.extend(group.iter().map(|&r| values[r]));
            buf.shuffle(rng);
            for (&r, &v) in group.iter().zip(&buf) {
                out[r] = v;
            }
        }
        out
    }
}

/// Permutation of `values` within groups of equal `labels`.
pub fn stratified_shuffle<T: Copy, R: Rng + ?Sized>(
    values: &[T],
    labels: &[usize],
    rng: &mut R,
) -> Vec<T> {
    Strata::new(labels).shuffle(values, rng)
}
