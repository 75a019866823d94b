//! Whole-network analysis: per-link measures, surrogate significance,
//! classification and reconstruction.

mod benchmark;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{entropy_of_codes, subset_codes, EntropyCache, SymbolDataset, DEFAULT_CELL_CAP};
use crate::seed::stream_rng;
use crate::significance::{
    percentile_test, shuffle_series_surrogate, shuffle_surrogate, ConditionalNull, IaaftGenerator,
    LinkResult, Strata, SurrogateConfig, SurrogateMethod,
};
use crate::var::{fit_var, GaussianInfo, SeriesDataset, DEFAULT_RESTRICTED_ORDER};

pub use benchmark::{
    benchmark, confusion, BenchmarkConfig, BenchmarkReport, BenchmarkRow, Confusion, RunOutcome,
    Scenario,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalysisMode {
    Static,
    Dynamic,
}

impl std::fmt::Display for AnalysisMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AnalysisMode::Static => "static",
            AnalysisMode::Dynamic => "dynamic",
        })
    }
}

/// VAR identification and restricted-model settings for dynamic analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicOptions {
    pub p_max: usize,
    pub q: usize,
}

impl Default for DynamicOptions {
    fn default() -> Self {
        Self {
            p_max: 20,
            q: DEFAULT_RESTRICTED_ORDER,
        }
    }
}

/// Static analysis settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StaticOptions {
    /// Largest product alphabet for which a joint table is built.
    pub cell_cap: usize,
    pub conditional_null: ConditionalNull,
}

impl Default for StaticOptions {
    fn default() -> Self {
        Self {
            cell_cap: DEFAULT_CELL_CAP,
            conditional_null: ConditionalNull::Stratified,
        }
    }
}

/// Settings and fitted quantities recorded with a result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    pub surrogates: usize,
    pub alpha: f64,
    pub method: SurrogateMethod,
    pub iaaft_max_iter: usize,
    pub seed: u64,
    pub conditional_null: Option<ConditionalNull>,
    pub p_max: Option<usize>,
    pub q: Option<usize>,
    /// VAR order chosen on the original series.
    pub selected_order: Option<usize>,
    pub spectral_radius: Option<f64>,
    /// Surrogates whose pipeline succeeded and entered the null distribution.
    pub valid_surrogates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkResult {
    pub mode: AnalysisMode,
    pub channel_names: Vec<String>,
    /// One entry per unordered pair, in `(0,1), (0,2), .., (m-2,m-1)` order.
    pub links: Vec<LinkResult>,
    pub adjacency: Vec<Vec<bool>>,
    pub config: ConfigSnapshot,
}

impl NetworkResult {
    pub fn m(&self) -> usize {
        self.channel_names.len()
    }

    pub fn link(&self, i: usize, j: usize) -> Option<&LinkResult> {
        let (i, j) = (i.min(j), i.max(j));
        let m = self.m();
        if i == j || j >= m {
            return None;
        }
        self.links.get(pair_index(m, i, j))
    }

    fn matrix(&self, f: impl Fn(&LinkResult) -> f64) -> Vec<Vec<f64>> {
        let m = self.m();
        let mut out = vec![vec![f64::NAN; m]; m];
        for l in &self.links {
            let v = f(l);
            out[l.i][l.j] = v;
            out[l.j][l.i] = v;
        }
        out
    }

    pub fn is_matrix(&self) -> Vec<Vec<f64>> {
        self.matrix(|l| l.is_value)
    }

    pub fn cis_matrix(&self) -> Vec<Vec<f64>> {
        self.matrix(|l| l.cis_value)
    }

    pub fn nis_matrix(&self) -> Vec<Vec<f64>> {
        self.matrix(|l| l.nis_value)
    }

    /// Symmetric B-index matrix; NaN on the diagonal and for isolated links.
    pub fn b_matrix(&self) -> Vec<Vec<f64>> {
        self.matrix(|l| l.b())
    }
}

/// Network with an edge exactly where the link class is connected.
pub fn reconstruct(result: &NetworkResult) -> Vec<Vec<bool>> {
    let m = result.m();
    let mut adj = vec![vec![false; m]; m];
    for l in result.links.iter().filter(|l| l.is_connected()) {
        adj[l.i][l.j] = true;
        adj[l.j][l.i] = true;
    }
    adj
}

fn pair_index(m: usize, i: usize, j: usize) -> usize {
    i * (2 * m - i - 1) / 2 + (j - i - 1)
}

fn pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect()
}

fn others(m: usize, i: usize, j: usize) -> Vec<usize> {
    (0..m).filter(|&k| k != i && k != j).collect()
}

/// `(IS, cIS)` per pair.
type Measures = Vec<(f64, f64)>;

fn static_measures(dataset: &SymbolDataset, cap: usize) -> Result<Measures> {
    let m = dataset.n_channels();
    let mut cache = EntropyCache::new(dataset, cap);
    pairs(m)
        .into_iter()
        .map(|(i, j)| {
            let is = cache.mutual_information(i, j)?;
            let cis = cache.conditional_mutual_information(i, j, &others(m, i, j))?;
            Ok((is, cis))
        })
        .collect()
}

fn static_mi(dataset: &SymbolDataset, cap: usize) -> Result<Vec<f64>> {
    let mut cache = EntropyCache::new(dataset, cap);
    pairs(dataset.n_channels())
        .into_iter()
        .map(|(i, j)| cache.mutual_information(i, j))
        .collect()
}

/// cMI of one pair given all other channels, re-evaluated for surrogate
/// versions of channel `i` that keep its joint distribution with the
/// conditioning set. Only `H(X, Y, Z)` changes under such surrogates.
struct ConditionalLink {
    i: usize,
    strata: Strata,
    /// Joint code of `(Z, Y)` per observation.
    zy_codes: Vec<usize>,
    x_alphabet: usize,
    /// `H(X, Z) + H(Y, Z) - H(Z)`.
    base: f64,
}

impl ConditionalLink {
    fn new(cache: &mut EntropyCache, dataset: &SymbolDataset, i: usize, j: usize) -> Result<Self> {
        let z = others(dataset.n_channels(), i, j);
        let with = |a: usize| -> Vec<usize> { z.iter().copied().chain([a]).collect() };
        let base = cache.entropy(&with(i))? + cache.entropy(&with(j))? - cache.entropy(&z)?;
        Ok(Self {
            i,
            strata: Strata::new(&subset_codes(dataset, &z)),
            zy_codes: subset_codes(dataset, &with(j)),
            x_alphabet: dataset.alphabet_sizes()[i] as usize,
            base,
        })
    }

    fn cmi(&self, x: &[u32], scratch: &mut Vec<usize>) -> f64 {
        scratch.clear();
        scratch.extend(
            self.zy_codes
                .iter()
                .zip(x)
                .map(|(&zy, &xv)| zy * self.x_alphabet + xv as usize),
        );
        (self.base - entropy_of_codes(scratch)).max(0.0)
    }
}

struct DynamicMeasures {
    values: Measures,
    order: usize,
    spectral_radius: f64,
}

fn dynamic_measures(series: &SeriesDataset, options: &DynamicOptions) -> Result<DynamicMeasures> {
    let m = series.n_channels();
    let fit = fit_var(series, options.p_max)?;
    if !fit.stationary {
        return Err(Error::NonStationary {
            radius: fit.spectral_radius,
        });
    }
    let mut info = GaussianInfo::new(&fit.model, options.q)?;
    let values = pairs(m)
        .into_iter()
        .map(|(i, j)| Ok((info.mir(i, j)?, info.cmir(i, j, &others(m, i, j))?)))
        .collect::<Result<_>>()?;
    Ok(DynamicMeasures {
        values,
        order: fit.order,
        spectral_radius: fit.spectral_radius,
    })
}

fn require_three_channels(m: usize) -> Result<()> {
    if m < 3 {
        return Err(Error::InvalidInput(format!(
            "network analysis needs at least 3 channels, got {m}"
        )));
    }
    Ok(())
}

/// Tests every link against its surrogate distributions and classifies it.
fn assemble(
    m: usize,
    original: &Measures,
    null: &[Measures],
    alpha: f64,
) -> Result<(Vec<LinkResult>, Vec<Vec<bool>>)> {
    let mut links = Vec::with_capacity(original.len());
    let mut is_null = Vec::with_capacity(null.len());
    let mut cis_null = Vec::with_capacity(null.len());
    for (k, ((i, j), &(is, cis))) in pairs(m).into_iter().zip(original).enumerate() {
        is_null.clear();
        cis_null.clear();
        is_null.extend(null.iter().map(|s| s[k].0));
        cis_null.extend(null.iter().map(|s| s[k].1));
        links.push(LinkResult::new(
            i,
            j,
            is,
            cis,
            percentile_test(is, &is_null, alpha),
            percentile_test(cis, &cis_null, alpha),
        )?);
    }
    let mut adjacency = vec![vec![false; m]; m];
    for l in links.iter().filter(|l| l.is_connected()) {
        adjacency[l.i][l.j] = true;
        adjacency[l.j][l.i] = true;
    }
    Ok((links, adjacency))
}

/// Static analysis with default options.
pub fn analyze_static(dataset: &SymbolDataset, config: &SurrogateConfig) -> Result<NetworkResult> {
    analyze_static_with(dataset, config, &StaticOptions::default())
}

/// Static analysis: MI and cMI given all other channels for every pair.
///
/// MI is tested against datasets with every channel shuffled independently.
/// cMI is tested either against the same datasets or, with the stratified
/// null, against surrogates that permute the first channel of the pair
/// within groups of identical conditioning symbols. Surrogate `r` draws from
/// stream `r` of the master seed.
pub fn analyze_static_with(
    dataset: &SymbolDataset,
    config: &SurrogateConfig,
    options: &StaticOptions,
) -> Result<NetworkResult> {
    config.validate()?;
    let m = dataset.n_channels();
    require_three_channels(m)?;
    if config.method != SurrogateMethod::Shuffle {
        return Err(Error::InvalidInput(
            "static analysis supports shuffle surrogates only".into(),
        ));
    }
    if dataset.n_obs() < 2 {
        return Err(Error::InsufficientData(
            "shuffling needs at least 2 observations".into(),
        ));
    }
    let cap = options.cell_cap;
    let (original, null) = match options.conditional_null {
        ConditionalNull::Joint => {
            let original = static_measures(dataset, cap)?;
            let null = (0..config.count)
                .into_par_iter()
                .map(|r| {
                    let mut rng = stream_rng(config.master_seed, r as u64);
                    static_measures(&shuffle_surrogate(dataset, &mut rng), cap)
                })
                .collect::<Result<Vec<_>>>()?;
            (original, null)
        }
        ConditionalNull::Stratified => {
            let mut cache = EntropyCache::new(dataset, cap);
            cache.entropy(&(0..m).collect::<Vec<_>>())?;
            let links = pairs(m)
                .into_iter()
                .map(|(i, j)| ConditionalLink::new(&mut cache, dataset, i, j))
                .collect::<Result<Vec<_>>>()?;
            let mut scratch = Vec::new();
            let original = static_mi(dataset, cap)?
                .into_iter()
                .zip(&links)
                .map(|(is, l)| (is, l.cmi(dataset.column(l.i), &mut scratch)))
                .collect();
            let null = (0..config.count)
                .into_par_iter()
                .map(|r| {
                    let mut rng = stream_rng(config.master_seed, r as u64);
                    let is = static_mi(&shuffle_surrogate(dataset, &mut rng), cap)?;
                    let mut scratch = Vec::new();
                    let cis = links.iter().map(|l| {
                        let x = l.strata.shuffle(dataset.column(l.i), &mut rng);
                        l.cmi(&x, &mut scratch)
                    });
                    Ok(is.into_iter().zip(cis).collect())
                })
                .collect::<Result<Vec<_>>>()?;
            (original, null)
        }
    };
    let (links, adjacency) = assemble(m, &original, &null, config.alpha)?;
    Ok(NetworkResult {
        mode: AnalysisMode::Static,
        channel_names: dataset.channel_names().to_vec(),
        links,
        adjacency,
        config: ConfigSnapshot {
            surrogates: config.count,
            alpha: config.alpha,
            method: config.method,
            iaaft_max_iter: config.iaaft_max_iter,
            seed: config.master_seed,
            conditional_null: Some(options.conditional_null),
            p_max: None,
            q: None,
            selected_order: None,
            spectral_radius: None,
            valid_surrogates: null.len(),
        },
    })
}

/// Dynamic analysis: MIR and cMIR given all other channels for every pair.
///
/// Every surrogate re-runs order selection, identification and the
/// restricted models. Surrogates whose fitted model is unusable (for example
/// non-stationary) are left out of the null distribution and logged; the
/// analysis fails if too few remain to resolve the percentile.
pub fn analyze_dynamic(
    series: &SeriesDataset,
    config: &SurrogateConfig,
    options: &DynamicOptions,
) -> Result<NetworkResult> {
    config.validate()?;
    let m = series.n_channels();
    require_three_channels(m)?;
    if series.n_samples() < 4 {
        return Err(Error::InsufficientData(
            "surrogates need at least 4 samples".into(),
        ));
    }
    let original = dynamic_measures(series, options)?;
    let generators: Vec<IaaftGenerator> = match config.method {
        SurrogateMethod::Iaaft => series
            .columns()
            .iter()
            .map(|c| IaaftGenerator::new(c))
            .collect(),
        SurrogateMethod::Shuffle => Vec::new(),
    };
    let outcomes: Vec<Result<Measures>> = (0..config.count)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(config.master_seed, r as u64);
            let surrogate = match config.method {
                SurrogateMethod::Iaaft => series.with_columns(
                    generators
                        .iter()
                        .map(|g| g.generate(&mut rng, config.iaaft_max_iter))
                        .collect(),
                ),
                SurrogateMethod::Shuffle => shuffle_series_surrogate(series, &mut rng),
            };
            dynamic_measures(&surrogate, options).map(|d| d.values)
        })
        .collect();
    let mut null = Vec::with_capacity(outcomes.len());
    for (r, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(v) => null.push(v),
            Err(e) => log::warn!("surrogate {r} discarded: {e}"),
        }
    }
    if (null.len() as f64) * config.alpha < 1.0 - 1e-9 {
        return Err(Error::InsufficientData(format!(
            "only {} of {} surrogates usable",
            null.len(),
            config.count
        )));
    }
    let (links, adjacency) = assemble(m, &original.values, &null, config.alpha)?;
    Ok(NetworkResult {
        mode: AnalysisMode::Dynamic,
        channel_names: series.channel_names().to_vec(),
        links,
        adjacency,
        config: ConfigSnapshot {
            surrogates: config.count,
            alpha: config.alpha,
            method: config.method,
            iaaft_max_iter: config.iaaft_max_iter,
            seed: config.master_seed,
            conditional_null: None,
            p_max: Some(options.p_max),
            q: Some(options.q),
            selected_order: Some(original.order),
            spectral_radius: Some(original.spectral_radius),
            valid_surrogates: null.len(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn independent_symbols(m: usize, n: usize, seed: u64) -> SymbolDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SymbolDataset::from_unnamed(
            (0..m)
                .map(|_| (0..n).map(|_| rng.random_range(0..2)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn pair_indexing() {
        let m = 5;
        for (k, (i, j)) in pairs(m).into_iter().enumerate() {
            assert_eq!(pair_index(m, i, j), k);
        }
    }

    #[test]
    fn static_requires_shuffle_and_three_channels() {
        let d = independent_symbols(3, 50, 0);
        let cfg = SurrogateConfig::with_method(SurrogateMethod::Iaaft);
        assert!(analyze_static(&d, &cfg).is_err());
        let two = independent_symbols(2, 50, 0);
        assert!(analyze_static(&two, &SurrogateConfig::default()).is_err());
    }

    #[test]
    fn matrices_are_symmetric() {
        let d = independent_symbols(4, 300, 1);
        let r = analyze_static(&d, &SurrogateConfig::default()).unwrap();
        let b = r.b_matrix();
        let is = r.is_matrix();
        for i in 0..4 {
            assert!(b[i][i].is_nan());
            for j in 0..4 {
                if i != j {
                    assert_eq!(is[i][j], is[j][i]);
                    assert_eq!(b[i][j].to_bits(), b[j][i].to_bits());
                }
            }
        }
        assert_eq!(reconstruct(&r), r.adjacency);
    }

    #[test]
    fn static_analysis_is_deterministic() {
        let d = independent_symbols(3, 200, 2);
        let cfg = SurrogateConfig {
            master_seed: 17,
            ..SurrogateConfig::default()
        };
        assert_eq!(
            analyze_static(&d, &cfg).unwrap(),
            analyze_static(&d, &cfg).unwrap()
        );
    }
}
