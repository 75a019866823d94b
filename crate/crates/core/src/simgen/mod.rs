//! Simulated network systems with known structure, and exact oracles for
//! the three-node examples.

mod binary10;
mod three_node;
mod var_stars;

use serde::{Deserialize, Serialize};

pub use binary10::{binary10_truth, gen_binary10, noisy_or, Binary10Params};
pub use three_node::{
    dynamic_sweep, exact_three_node_dynamic, exact_three_node_static, gen_three_node_dynamic,
    gen_three_node_static, static_sweep, three_node_static_pmf, ExactLink, ExactMeasures,
    SweepPoint, ThreeNodeDynamicParams, ThreeNodeStaticParams, EXACT_ZERO_TOL,
};
pub use var_stars::{gen_var_stars, StarStructure, VarStarsParams};

/// Generated data with the ground-truth undirected adjacency of the
/// generating system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generated<D> {
    pub dataset: D,
    pub truth: Vec<Vec<bool>>,
}

/// Symmetric adjacency matrix from an undirected edge list.
pub fn adjacency_from_edges(m: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; m]; m];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    adj
}

/// Samples a fair binary symbol.
fn coin<R: rand::Rng + ?Sized>(rng: &mut R) -> u32 {
    rng.random_bool(0.5) as u32
}

/// Returns `value` with probability `reliability`, its complement otherwise.
fn noisy_copy<R: rand::Rng + ?Sized>(value: u32, reliability: f64, rng: &mut R) -> u32 {
    if rng.random_bool(reliability) {
        value
    } else {
        1 - value
    }
}
