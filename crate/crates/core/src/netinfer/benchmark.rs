//! Reconstruction accuracy of the simulated networks over repeated runs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{analyze_dynamic, analyze_static_with, DynamicOptions, StaticOptions};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::significance::{SurrogateConfig, SurrogateMethod};
use crate::simgen::{gen_binary10, gen_var_stars, Binary10Params, StarStructure, VarStarsParams};

/// Simulated system and parameter grid of a benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    /// Ten-node binary network; a single parameter point.
    Binary10 {
        gamma1: f64,
        gamma2: f64,
        gamma3: f64,
    },
    /// Star networks swept over `hub_out`, with `other_arm = 1 - hub_out`.
    VarStars {
        structure: StarStructure,
        hub_out: Vec<f64>,
    },
}

impl Scenario {
    pub fn binary10_default() -> Self {
        let d = Binary10Params::default();
        Scenario::Binary10 {
            gamma1: d.gamma1,
            gamma2: d.gamma2,
            gamma3: d.gamma3,
        }
    }

    pub fn id(&self) -> String {
        match self {
            Scenario::Binary10 { .. } => "binary10".into(),
            Scenario::VarStars { structure, .. } => format!("var-stars-{structure}"),
        }
    }

    /// Swept parameter values; `None` for single-point scenarios.
    pub fn parameters(&self) -> Vec<Option<f64>> {
        match self {
            Scenario::Binary10 { .. } => vec![None],
            Scenario::VarStars { hub_out, .. } => hub_out.iter().map(|&h| Some(h)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkConfig {
    pub lengths: Vec<usize>,
    pub runs: usize,
    /// Surrogate settings; `master_seed` seeds the whole benchmark. Static
    /// scenarios always use shuffle surrogates.
    pub surrogates: SurrogateConfig,
    pub static_options: StaticOptions,
    pub dynamic: DynamicOptions,
}

/// Confusion counts over unordered node pairs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    /// `tp / (tp + fn)`, NaN without true edges.
    pub fn sensitivity(&self) -> f64 {
        self.tp as f64 / (self.tp + self.fn_) as f64
    }

    /// `tn / (tn + fp)`, NaN without absent edges.
    pub fn specificity(&self) -> f64 {
        self.tn as f64 / (self.tn + self.fp) as f64
    }

    fn add(&mut self, other: &Confusion) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.tn += other.tn;
        self.fn_ += other.fn_;
    }
}

/// Compares the upper triangles of two adjacency matrices.
pub fn confusion(truth: &[Vec<bool>], predicted: &[Vec<bool>]) -> Confusion {
    let mut c = Confusion::default();
    for i in 0..truth.len() {
        for j in i + 1..truth.len() {
            match (truth[i][j], predicted[i][j]) {
                (true, true) => c.tp += 1,
                (true, false) => c.fn_ += 1,
                (false, true) => c.fp += 1,
                (false, false) => c.tn += 1,
            }
        }
    }
    c
}

/// Result of one generation + analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub n: usize,
    pub parameter_index: usize,
    pub run: usize,
    pub confusion: Option<Confusion>,
    /// Predicted edges absent from the truth, as `(i, j)` with `i < j`.
    pub false_positives: Vec<(usize, usize)>,
    pub error: Option<String>,
}

/// Aggregate over the successful runs at one `(n, parameter)` point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub n: usize,
    pub parameter_index: usize,
    pub parameter: Option<f64>,
    pub runs: usize,
    pub failed_runs: usize,
    pub counts: Confusion,
    pub sensitivity: f64,
    pub specificity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub scenario: String,
    pub rows: Vec<BenchmarkRow>,
    pub outcomes: Vec<RunOutcome>,
}

impl BenchmarkReport {
    pub fn row(&self, n: usize, parameter_index: usize) -> Option<&BenchmarkRow> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.parameter_index == parameter_index)
    }

    /// Fraction of successful runs at `(n, parameter)` that predicted the
    /// absent edge `(i, j)`.
    pub fn false_positive_rate(&self, n: usize, parameter_index: usize, i: usize, j: usize) -> f64 {
        let key = (i.min(j), i.max(j));
        let ok: Vec<_> = self
            .outcomes
            .iter()
            .filter(|o| o.n == n && o.parameter_index == parameter_index && o.confusion.is_some())
            .collect();
        let hits = ok
            .iter()
            .filter(|o| o.false_positives.contains(&key))
            .count();
        hits as f64 / ok.len() as f64
    }
}

type Adjacency = Vec<Vec<bool>>;

fn run_once(
    scenario: &Scenario,
    parameter: Option<f64>,
    n: usize,
    data_seed: u64,
    surrogates: SurrogateConfig,
    config: &BenchmarkConfig,
) -> Result<(Adjacency, Adjacency)> {
    match scenario {
        Scenario::Binary10 {
            gamma1,
            gamma2,
            gamma3,
        } => {
            let generated = gen_binary10(&Binary10Params {
                gamma1: *gamma1,
                gamma2: *gamma2,
                gamma3: *gamma3,
                n,
                seed: data_seed,
            })?;
            let cfg = SurrogateConfig {
                method: SurrogateMethod::Shuffle,
                ..surrogates
            };
            let result = analyze_static_with(&generated.dataset, &cfg, &config.static_options)?;
            Ok((generated.truth, result.adjacency))
        }
        Scenario::VarStars { structure, .. } => {
            let hub_out = parameter.expect("swept scenario");
            let generated = gen_var_stars(&VarStarsParams::sweep_point(
                *structure, hub_out, n, data_seed,
            ))?;
            let result = analyze_dynamic(&generated.dataset, &surrogates, &config.dynamic)?;
            Ok((generated.truth, result.adjacency))
        }
    }
}

/// Runs `config.runs` independent generations and analyses for every length
/// and parameter point. Seeds derive from
/// `(master_seed, n, parameter index, run)`, so results do not depend on the
/// degree of parallelism. Failed runs are excluded from the aggregates and
/// counted separately.
pub fn benchmark(scenario: &Scenario, config: &BenchmarkConfig) -> Result<BenchmarkReport> {
    config.surrogates.validate()?;
    if config.runs == 0 || config.lengths.is_empty() {
        return Err(Error::InvalidInput(
            "benchmark needs runs and lengths".into(),
        ));
    }
    let parameters = scenario.parameters();
    if parameters.is_empty() {
        return Err(Error::InvalidInput("empty parameter grid".into()));
    }
    let mut tasks = Vec::new();
    for &n in &config.lengths {
        for p in 0..parameters.len() {
            for run in 0..config.runs {
                tasks.push((n, p, run));
            }
        }
    }
    let master = config.surrogates.master_seed;
    let outcomes: Vec<RunOutcome> = tasks
        .into_par_iter()
        .map(|(n, p, run)| {
            let seed = |k: u64| derive_seed(&[master, n as u64, p as u64, run as u64, k]);
            let data_seed = seed(0);
            let surrogates = SurrogateConfig {
                master_seed: seed(1),
                ..config.surrogates
            };
            let outcome = run_once(scenario, parameters[p], n, data_seed, surrogates, config);
            match outcome {
                Ok((truth, predicted)) => {
                    let m = truth.len();
                    let false_positives = (0..m)
                        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
                        .filter(|&(i, j)| predicted[i][j] && !truth[i][j])
                        .collect();
                    RunOutcome {
                        n,
                        parameter_index: p,
                        run,
                        confusion: Some(confusion(&truth, &predicted)),
                        false_positives,
                        error: None,
                    }
                }
                Err(e) => {
                    log::warn!("run {run} at n = {n}, parameter {p} failed: {e}");
                    RunOutcome {
                        n,
                        parameter_index: p,
                        run,
                        confusion: None,
                        false_positives: Vec::new(),
                        error: Some(e.to_string()),
                    }
                }
            }
        })
        .collect();

    let mut rows = Vec::new();
    for &n in &config.lengths {
        for (p, &parameter) in parameters.iter().enumerate() {
            let mut counts = Confusion::default();
            let mut runs = 0;
            let mut failed_runs = 0;
            for o in outcomes
                .iter()
                .filter(|o| o.n == n && o.parameter_index == p)
            {
                match &o.confusion {
                    Some(c) => {
                        counts.add(c);
                        runs += 1;
                    }
                    None => failed_runs += 1,
                }
            }
            rows.push(BenchmarkRow {
                n,
                parameter_index: p,
                parameter,
                runs,
                failed_runs,
                counts,
                sensitivity: counts.sensitivity(),
                specificity: counts.specificity(),
            });
        }
    }
    Ok(BenchmarkReport {
        scenario: scenario.id(),
        rows,
        outcomes,
    })
}
