//! Three-node systems with a common target `S3` of `S1` and `S2`, where `S1`
//! also drives `S2`.
//!
//! Static version: binary variables. `S1` is a fair coin, `S2` copies `S1`
//! with probability `alpha`. `S3` picks one parent uniformly at random per
//! observation and copies it with that parent's reliability (`beta` for `S1`,
//! `gamma` for `S2`); a reliability of 0.5 removes the parent's influence.
//!
//! Dynamic version: VAR(1) with unit innovations and no self-dynamics,
//! `S2_n = a S1_{n-1} + u2`, `S3_n = b S1_{n-1} + c S2_{n-1} + u3`.

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{adjacency_from_edges, coin, noisy_copy, Generated};
use crate::error::{Error, Result};
use crate::info::{
    default_channel_names, table_conditional_mutual_information, table_mutual_information,
    ProbabilityTable, SymbolDataset,
};
use crate::significance::{classify_link, LinkClass};
use crate::var::{GaussianInfo, SeriesDataset, VarModel};

/// Measures at or below this value count as zero in exact classifications.
pub const EXACT_ZERO_TOL: f64 = 1e-10;

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeNodeStaticParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ThreeNodeStaticParams {
    /// The sweep parametrization `gamma = 1.5 - alpha`, `beta = 0.9`.
    pub fn sweep_point(alpha: f64) -> Self {
        Self {
            alpha,
            beta: 0.9,
            gamma: 1.5 - alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !(0.5 - 1e-12..=1.0 + 1e-12).contains(&v) {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} outside [0.5, 1]"
                )));
            }
        }
        Ok(())
    }

    pub fn truth(&self) -> Vec<Vec<bool>> {
        let mut edges = Vec::new();
        for ((a, b), w) in PAIRS.iter().zip([self.alpha, self.beta, self.gamma]) {
            if (w - 0.5).abs() > 1e-12 {
                edges.push((*a, *b));
            }
        }
        adjacency_from_edges(3, &edges)
    }
}

/// Exact joint pmf `p(s1, s2, s3)` over channels `[0, 1, 2]`.
pub fn three_node_static_pmf(params: &ThreeNodeStaticParams) -> Result<ProbabilityTable> {
    params.validate()?;
    let agree = |x: usize, y: usize, w: f64| if x == y { w } else { 1.0 - w };
    let mut p = Vec::with_capacity(8);
    for s1 in 0..2 {
        for s2 in 0..2 {
            for s3 in 0..2 {
                let gate = 0.5 * agree(s3, s1, params.beta) + 0.5 * agree(s3, s2, params.gamma);
                p.push(0.5 * agree(s2, s1, params.alpha) * gate);
            }
        }
    }
    ProbabilityTable::new(vec![0, 1, 2], vec![2, 2, 2], p)
}

pub fn gen_three_node_static<R: Rng + ?Sized>(
    params: &ThreeNodeStaticParams,
    n: usize,
    rng: &mut R,
) -> Result<Generated<SymbolDataset>> {
    params.validate()?;
    let mut cols: Vec<Vec<u32>> = (0..3).map(|_| Vec::with_capacity(n)).collect();
    for _ in 0..n {
        let s1 = coin(rng);
        let s2 = noisy_copy(s1, params.alpha, rng);
        let s3 = if rng.random_bool(0.5) {
            noisy_copy(s1, params.beta, rng)
        } else {
            noisy_copy(s2, params.gamma, rng)
        };
        cols[0].push(s1);
        cols[1].push(s2);
        cols[2].push(s3);
    }
    Ok(Generated {
        dataset: SymbolDataset::new(cols, vec![2, 2, 2], default_channel_names(3))?,
        truth: params.truth(),
    })
}

/// Exact measures of one link, classified with zero meaning `<= EXACT_ZERO_TOL`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactLink {
    pub i: usize,
    pub j: usize,
    pub is_value: f64,
    pub cis_value: f64,
    pub nis_value: f64,
    pub b_index: f64,
    pub link_class: LinkClass,
}

impl ExactLink {
    fn new(i: usize, j: usize, is_value: f64, cis_value: f64) -> Result<Self> {
        let c = classify_link(
            is_value,
            cis_value,
            is_value > EXACT_ZERO_TOL,
            cis_value > EXACT_ZERO_TOL,
        )?;
        Ok(Self {
            i,
            j,
            is_value,
            cis_value,
            nis_value: is_value - cis_value,
            b_index: c.b_index,
            link_class: c.link_class,
        })
    }
}

/// Exact measures for the links `(S1,S2)`, `(S1,S3)`, `(S2,S3)`, in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactMeasures {
    pub links: Vec<ExactLink>,
}

impl ExactMeasures {
    pub fn link(&self, i: usize, j: usize) -> &ExactLink {
        let (i, j) = (i.min(j), i.max(j));
        self.links
            .iter()
            .find(|l| l.i == i && l.j == j)
            .expect("three-node link")
    }
}

pub fn exact_three_node_static(params: &ThreeNodeStaticParams) -> Result<ExactMeasures> {
    let table = three_node_static_pmf(params)?;
    let links = PAIRS
        .iter()
        .map(|&(i, j)| {
            let z = 3 - i - j;
            ExactLink::new(
                i,
                j,
                table_mutual_information(&table, i, j)?,
                table_conditional_mutual_information(&table, i, j, &[z])?,
            )
        })
        .collect::<Result<_>>()?;
    Ok(ExactMeasures { links })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeNodeDynamicParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ThreeNodeDynamicParams {
    /// The sweep parametrization `c = 1 - a`, `b = 1`.
    pub fn sweep_point(a: f64) -> Self {
        Self {
            a,
            b: 1.0,
            c: 1.0 - a,
        }
    }

    pub fn model(&self) -> Result<VarModel> {
        let mut a1 = DMatrix::zeros(3, 3);
        a1[(1, 0)] = self.a;
        a1[(2, 0)] = self.b;
        a1[(2, 1)] = self.c;
        VarModel::new(vec![a1], DMatrix::identity(3, 3))
    }

    pub fn truth(&self) -> Vec<Vec<bool>> {
        let edges: Vec<_> = PAIRS
            .iter()
            .zip([self.a, self.b, self.c])
            .filter(|(_, w)| *w != 0.0)
            .map(|(e, _)| *e)
            .collect();
        adjacency_from_edges(3, &edges)
    }
}

pub fn gen_three_node_dynamic<R: Rng + ?Sized>(
    params: &ThreeNodeDynamicParams,
    n: usize,
    rng: &mut R,
) -> Result<Generated<SeriesDataset>> {
    let dataset = params
        .model()?
        .simulate(n, 100, default_channel_names(3), rng)?;
    Ok(Generated {
        dataset,
        truth: params.truth(),
    })
}

/// Model-exact MIR / cMIR of the true VAR, with restricted order `q`.
pub fn exact_three_node_dynamic(
    params: &ThreeNodeDynamicParams,
    q: usize,
) -> Result<ExactMeasures> {
    let mut info = GaussianInfo::new(&params.model()?, q)?;
    let links = PAIRS
        .iter()
        .map(|&(i, j)| {
            let z = 3 - i - j;
            ExactLink::new(i, j, info.mir(i, j)?, info.cmir(i, j, &[z])?)
        })
        .collect::<Result<_>>()?;
    Ok(ExactMeasures { links })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub parameter: f64,
    pub measures: ExactMeasures,
}

fn grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidInput("sweep step must be positive".into()));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| start + k as f64 * step).collect())
}

/// Exact static measures for `alpha` from 0.5 to 1 with `gamma = 1.5 - alpha`.
pub fn static_sweep(step: f64) -> Result<Vec<SweepPoint>> {
    grid(0.5, 1.0, step)?
        .into_iter()
        .map(|alpha| {
            Ok(SweepPoint {
                parameter: alpha,
                measures: exact_three_node_static(&ThreeNodeStaticParams::sweep_point(alpha))?,
            })
        })
        .collect()
}

/// Exact dynamic measures for `a` from 0 to 1 with `c = 1 - a`, `b = 1`.
pub fn dynamic_sweep(step: f64, q: usize) -> Result<Vec<SweepPoint>> {
    grid(0.0, 1.0, step)?
        .into_iter()
        .map(|a| {
            Ok(SweepPoint {
                parameter: a,
                measures: exact_three_node_dynamic(&ThreeNodeDynamicParams::sweep_point(a), q)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::mutual_information;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Brute-force enumeration of the generative process: every branch of
    /// every coin flip, accumulated into an 8-cell table.
    fn enumerate_pmf(p: &ThreeNodeStaticParams) -> [f64; 8] {
        let mut out = [0.0; 8];
        for s1 in 0..2usize {
            for copy2 in [true, false] {
                let w2 = if copy2 { p.alpha } else { 1.0 - p.alpha };
                let s2 = if copy2 { s1 } else { 1 - s1 };
                for parent_is_s1 in [true, false] {
                    let (src, rel) = if parent_is_s1 {
                        (s1, p.beta)
                    } else {
                        (s2, p.gamma)
                    };
                    for copy3 in [true, false] {
                        let w3 = if copy3 { rel } else { 1.0 - rel };
                        let s3 = if copy3 { src } else { 1 - src };
                        out[s1 * 4 + s2 * 2 + s3] += 0.5 * w2 * 0.5 * w3;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn analytic_pmf_matches_enumeration() {
        for alpha in [0.5, 0.6, 0.75, 0.9, 1.0] {
            let p = ThreeNodeStaticParams::sweep_point(alpha);
            let t = three_node_static_pmf(&p).unwrap();
            for (a, b) in t.probabilities().iter().zip(enumerate_pmf(&p)) {
                assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn deterministic_copy_at_alpha_one() {
        let p = ThreeNodeStaticParams {
            alpha: 1.0,
            beta: 1.0,
            gamma: 0.5,
        };
        let g = gen_three_node_static(&p, 500, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(g.dataset.column(0), g.dataset.column(1));
    }

    #[test]
    fn pure_common_target_at_alpha_half() {
        let m = exact_three_node_static(&ThreeNodeStaticParams::sweep_point(0.5)).unwrap();
        let l = m.link(0, 1);
        assert!(l.is_value.abs() < 1e-12);
        assert!(l.cis_value > 1e-3);
        assert_eq!(l.b_index, -1.0);
        assert_eq!(l.link_class, LinkClass::CommonTarget);
    }

    #[test]
    fn pure_common_drive_at_gamma_half() {
        let m = exact_three_node_static(&ThreeNodeStaticParams::sweep_point(1.0)).unwrap();
        let l = m.link(1, 2);
        assert!(l.cis_value < 1e-12);
        assert_eq!(l.b_index, 1.0);
    }

    #[test]
    fn static_nis_shared_by_all_links() {
        for alpha in [0.5, 0.6, 0.8, 1.0] {
            let m = exact_three_node_static(&ThreeNodeStaticParams::sweep_point(alpha)).unwrap();
            let nis: Vec<f64> = m.links.iter().map(|l| l.nis_value).collect();
            assert_abs_diff_eq!(nis[0], nis[1], epsilon = 1e-12);
            assert_abs_diff_eq!(nis[0], nis[2], epsilon = 1e-12);
        }
    }

    #[test]
    fn sampled_mi_vanishes_at_alpha_half() {
        let g = gen_three_node_static(
            &ThreeNodeStaticParams::sweep_point(0.5),
            100_000,
            &mut ChaCha8Rng::seed_from_u64(2),
        )
        .unwrap();
        assert!(mutual_information(&g.dataset, 0, 1).unwrap() < 1e-3);
    }

    #[test]
    fn dynamic_limit_cases() {
        let target =
            exact_three_node_dynamic(&ThreeNodeDynamicParams::sweep_point(0.0), 20).unwrap();
        assert_eq!(target.link(0, 1).b_index, -1.0);
        let drive = exact_three_node_dynamic(
            &ThreeNodeDynamicParams {
                a: 1.0,
                b: 1.0,
                c: 0.0,
            },
            20,
        )
        .unwrap();
        assert_eq!(drive.link(1, 2).b_index, 1.0);
    }

    #[test]
    fn sweep_grids() {
        assert_eq!(static_sweep(0.025).unwrap().len(), 21);
        let d = dynamic_sweep(0.05, 20).unwrap();
        assert_eq!(d.len(), 21);
        assert_abs_diff_eq!(d[20].parameter, 1.0, epsilon = 1e-12);
    }
}
