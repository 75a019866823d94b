//! Ten-node binary network.
//!
//! `S1, S3, S4, S5, S9` are independent fair coins, `S10` copies `S9` with
//! reliability `gamma3`, `S6` and `S7` copy `S5` with reliability `gamma2`,
//! and `S8`, `S2` are noisy-OR gates of `(S6, S7)` and `(S3, S4, S5)` with
//! reliability `gamma1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{adjacency_from_edges, coin, noisy_copy, Generated};
use crate::error::{Error, Result};
use crate::info::{default_channel_names, SymbolDataset};

/// Undirected edges of the generating structure (zero-based).
const EDGES: [(usize, usize); 8] = [
    (1, 2),
    (1, 3),
    (1, 4),
    (4, 5),
    (4, 6),
    (5, 7),
    (6, 7),
    (8, 9),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Binary10Params {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub n: usize,
    pub seed: u64,
}

impl Default for Binary10Params {
    fn default() -> Self {
        Self {
            gamma1: 0.9,
            gamma2: 0.9,
            gamma3: 0.8,
            n: 1000,
            seed: 0,
        }
    }
}

impl Binary10Params {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
        ] {
            if !(v > 0.5 && v <= 1.0) {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} outside (0.5, 1]"
                )));
            }
        }
        if self.n < 2 {
            return Err(Error::InvalidInput("need at least 2 observations".into()));
        }
        Ok(())
    }
}

pub fn binary10_truth() -> Vec<Vec<bool>> {
    adjacency_from_edges(10, &EDGES)
}

/// OR of `inputs`, kept with probability `reliability` and flipped otherwise.
pub fn noisy_or<R: Rng + ?Sized>(inputs: &[u32], reliability: f64, rng: &mut R) -> u32 {
    let or = inputs.iter().any(|&v| v != 0) as u32;
    noisy_copy(or, reliability, rng)
}

/// Generates `params.n` observations from a generator seeded with `params.seed`.
pub fn gen_binary10(params: &Binary10Params) -> Result<Generated<SymbolDataset>> {
    use rand::SeedableRng;
    params.validate()?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n;
    let mut cols: Vec<Vec<u32>> = (0..10).map(|_| Vec::with_capacity(n)).collect();
    let mut s = [0u32; 10];
    for _ in 0..n {
        s[0] = coin(&mut rng);
        s[2] = coin(&mut rng);
        s[3] = coin(&mut rng);
        s[4] = coin(&mut rng);
        s[8] = coin(&mut rng);
        s[9] = noisy_copy(s[8], params.gamma3, &mut rng);
        s[5] = noisy_copy(s[4], params.gamma2, &mut rng);
        s[6] = noisy_copy(s[4], params.gamma2, &mut rng);
        s[7] = noisy_or(&[s[5], s[6]], params.gamma1, &mut rng);
        s[1] = noisy_or(&[s[2], s[3], s[4]], params.gamma1, &mut rng);
        for (col, &v) in cols.iter_mut().zip(&s) {
            col.push(v);
        }
    }
    Ok(Generated {
        dataset: SymbolDataset::new(cols, vec![2; 10], default_channel_names(10))?,
        truth: binary10_truth(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::mutual_information;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn truth_has_eight_edges() {
        let t = binary10_truth();
        let count: usize = (0..10)
            .flat_map(|i| (i + 1..10).map(move |j| (i, j)))
            .filter(|&(i, j)| t[i][j])
            .count();
        assert_eq!(count, 8);
        assert!(t[8][9] && t[9][8]);
    }

    #[test]
    fn exact_copies_at_unit_reliability() {
        let p = Binary10Params {
            gamma2: 1.0,
            n: 300,
            ..Default::default()
        };
        let g = gen_binary10(&p).unwrap();
        assert_eq!(g.dataset.column(4), g.dataset.column(5));
        assert_eq!(g.dataset.column(4), g.dataset.column(6));
    }

    #[test]
    fn exact_or_gate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(noisy_or(&[0, 0], 1.0, &mut rng), 0);
        assert_eq!(noisy_or(&[1, 0], 1.0, &mut rng), 1);
        assert_eq!(noisy_or(&[0, 1], 1.0, &mut rng), 1);
        assert_eq!(noisy_or(&[1, 1], 1.0, &mut rng), 1);
    }

    #[test]
    fn deterministic_given_seed() {
        let p = Binary10Params {
            seed: 9,
            n: 200,
            ..Default::default()
        };
        assert_eq!(gen_binary10(&p).unwrap(), gen_binary10(&p).unwrap());
    }

    #[test]
    fn s9_s10_information() {
        let p = Binary10Params {
            n: 100_000,
            seed: 5,
            ..Default::default()
        };
        let g = gen_binary10(&p).unwrap();
        let exact = std::f64::consts::LN_2 + 0.8 * 0.8f64.ln() + 0.2 * 0.2f64.ln();
        let est = mutual_information(&g.dataset, 8, 9).unwrap();
        assert!((est - exact).abs() < 0.01, "{est} vs {exact}");
    }
}
