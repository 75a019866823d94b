//! Six-node VAR(2) star networks with hubs `S1` and `S6` and leaves `S2..S5`.
//!
//! Every node has the same AR(2) self-dynamics. `S1` drives the leaves at
//! lag 1 with `hub_out`. In the competing structure `S6` also drives the
//! leaves; in the propagation structure the leaves drive `S6`, both with
//! coefficient `other_arm`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{adjacency_from_edges, Generated};
use crate::error::{Error, Result};
use crate::info::default_channel_names;
use crate::var::{SeriesDataset, VarModel};

const SELF_LAG1: f64 = 0.4;
const SELF_LAG2: f64 = -0.2;
const BURN_IN: usize = 500;
const HUB: usize = 0;
const OTHER_HUB: usize = 5;
const LEAVES: [usize; 4] = [1, 2, 3, 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarStructure {
    Competing,
    Propagation,
}

impl std::fmt::Display for StarStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StarStructure::Competing => "competing",
            StarStructure::Propagation => "propagation",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarStarsParams {
    pub structure: StarStructure,
    pub hub_out: f64,
    pub other_arm: f64,
    pub n: usize,
    pub seed: u64,
}

impl VarStarsParams {
    /// Balanced sweep point `other_arm = 1 - hub_out`.
    pub fn sweep_point(structure: StarStructure, hub_out: f64, n: usize, seed: u64) -> Self {
        Self {
            structure,
            hub_out,
            other_arm: 1.0 - hub_out,
            n,
            seed,
        }
    }

    pub fn model(&self) -> Result<VarModel> {
        let mut a1 = DMatrix::zeros(6, 6);
        let mut a2 = DMatrix::zeros(6, 6);
        for k in 0..6 {
            a1[(k, k)] = SELF_LAG1;
            a2[(k, k)] = SELF_LAG2;
        }
        for &leaf in &LEAVES {
            a1[(leaf, HUB)] = self.hub_out;
            match self.structure {
                StarStructure::Competing => a1[(leaf, OTHER_HUB)] = self.other_arm,
                StarStructure::Propagation => a1[(OTHER_HUB, leaf)] = self.other_arm,
            }
        }
        let model = VarModel::new(vec![a1, a2], DMatrix::identity(6, 6))?;
        let radius = model.spectral_radius();
        if radius >= 1.0 {
            return Err(Error::NonStationary { radius });
        }
        Ok(model)
    }

    /// Pairs joined by a nonzero cross-coefficient.
    pub fn truth(&self) -> Vec<Vec<bool>> {
        let mut edges = Vec::new();
        for &leaf in &LEAVES {
            if self.hub_out != 0.0 {
                edges.push((HUB, leaf));
            }
            if self.other_arm != 0.0 {
                edges.push((OTHER_HUB, leaf));
            }
        }
        adjacency_from_edges(6, &edges)
    }
}

/// Generates `params.n` samples (after burn-in) seeded with `params.seed`.
pub fn gen_var_stars(params: &VarStarsParams) -> Result<Generated<SeriesDataset>> {
    let model = params.model()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let dataset = model.simulate(params.n, BURN_IN, default_channel_names(6), &mut rng)?;
    Ok(Generated {
        dataset,
        truth: params.truth(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stationary_over_sweep() {
        for structure in [StarStructure::Competing, StarStructure::Propagation] {
            for k in 1..=9 {
                let p = VarStarsParams::sweep_point(structure, k as f64 / 10.0, 100, 0);
                assert!(p.model().unwrap().spectral_radius() < 1.0);
            }
        }
    }

    #[test]
    fn isolated_hub_without_outflow() {
        let p = VarStarsParams::sweep_point(StarStructure::Competing, 0.0, 100, 0);
        let t = p.truth();
        assert!(t[0].iter().all(|&e| !e));
        assert_eq!(t[5].iter().filter(|&&e| e).count(), 4);
    }

    #[test]
    fn generation_is_deterministic() {
        let p = VarStarsParams::sweep_point(StarStructure::Propagation, 0.5, 300, 11);
        let a = gen_var_stars(&p).unwrap();
        let b = gen_var_stars(&p).unwrap();
        assert_eq!(a.dataset, b.dataset);
        assert_eq!(a.dataset.n_samples(), 300);
    }

    #[test]
    fn radius_set_by_self_dynamics() {
        let mut none = VarStarsParams::sweep_point(StarStructure::Competing, 0.0, 10, 0);
        none.other_arm = 0.0;
        let r0 = none.model().unwrap().spectral_radius();
        assert!((r0 - 0.2f64.sqrt()).abs() < 1e-9);
        for structure in [StarStructure::Competing, StarStructure::Propagation] {
            let p = VarStarsParams::sweep_point(structure, 0.3, 10, 0);
            assert!((p.model().unwrap().spectral_radius() - r0).abs() < 1e-3);
        }
    }
}
