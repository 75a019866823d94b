//! Plug-in information measures for discrete random variables.
//!
//! Probabilities are estimated as relative frequencies of symbol combinations,
//! and every measure is expressed through entropies of (marginals of) one
//! joint table, in nats. Conditional mutual information uses the chain rule
//! `I(X;Y|Z) = I(X;Y,Z) - I(X;Z)` so that the identity holds exactly for the
//! estimates, not only analytically.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of cells of a dense joint table (2^20).
pub const DEFAULT_CELL_CAP: usize = 1 << 20;

/// N observations of M discrete channels, stored column-wise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolDataset {
    columns: Vec<Vec<u32>>,
    alphabet_sizes: Vec<u32>,
    channel_names: Vec<String>,
}

impl SymbolDataset {
    pub fn new(
        columns: Vec<Vec<u32>>,
        alphabet_sizes: Vec<u32>,
        channel_names: Vec<String>,
    ) -> Result<Self> {
        if columns.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a symbol dataset needs at least 2 channels, got {}",
                columns.len()
            )));
        }
        if alphabet_sizes.len() != columns.len() || channel_names.len() != columns.len() {
            return Err(Error::InvalidInput(
                "columns, alphabet sizes and channel names differ in length".into(),
            ));
        }
        let n = columns[0].len();
        if n == 0 {
            return Err(Error::InsufficientData(
                "dataset has no observations".into(),
            ));
        }
        for (c, (col, &q)) in columns.iter().zip(&alphabet_sizes).enumerate() {
            if col.len() != n {
                return Err(Error::InvalidInput(format!(
                    "channel {c} has {} observations, expected {n}",
                    col.len()
                )));
            }
            if q == 0 {
                return Err(Error::InvalidInput(format!(
                    "channel {c} has an empty alphabet"
                )));
            }
            if let Some((row, &s)) = col.iter().enumerate().find(|(_, &s)| s >= q) {
                return Err(Error::SymbolOutOfRange {
                    row,
                    channel: c,
                    symbol: s,
                    alphabet: q,
                });
            }
        }
        Ok(Self {
            columns,
            alphabet_sizes,
            channel_names,
        })
    }

    /// Builds a dataset inferring each alphabet as `max symbol + 1`.
    pub fn from_columns(columns: Vec<Vec<u32>>, channel_names: Vec<String>) -> Result<Self> {
        let alphabet_sizes = columns
            .iter()
            .map(|c| c.iter().copied().max().map_or(1, |m| m + 1))
            .collect();
        Self::new(columns, alphabet_sizes, channel_names)
    }

    /// Like [`SymbolDataset::from_columns`] with names `S1..SM`.
    pub fn from_unnamed(columns: Vec<Vec<u32>>) -> Result<Self> {
        let names = default_channel_names(columns.len());
        Self::from_columns(columns, names)
    }

    pub fn n_obs(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_channels(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, channel: usize) -> &[u32] {
        &self.columns[channel]
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn alphabet_sizes(&self) -> &[u32] {
        &self.alphabet_sizes
    }

    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    /// Returns a copy with columns replaced, keeping alphabets and names.
    /// Used by surrogate generators, which only permute symbols.
    pub(crate) fn with_columns(&self, columns: Vec<Vec<u32>>) -> Self {
        debug_assert_eq!(columns.len(), self.columns.len());
        Self {
            columns,
            alphabet_sizes: self.alphabet_sizes.clone(),
            channel_names: self.channel_names.clone(),
        }
    }

    /// Reorders channels: output channel `k` is input channel `order[k]`.
    pub fn permute_channels(&self, order: &[usize]) -> Result<Self> {
        validate_subset(order, self.n_channels())?;
        if order.len() != self.n_channels() {
            return Err(Error::InvalidInput(
                "permutation must cover every channel".into(),
            ));
        }
        Ok(Self {
            columns: order.iter().map(|&c| self.columns[c].clone()).collect(),
            alphabet_sizes: order.iter().map(|&c| self.alphabet_sizes[c]).collect(),
            channel_names: order
                .iter()
                .map(|&c| self.channel_names[c].clone())
                .collect(),
        })
    }
}

pub(crate) fn default_channel_names(m: usize) -> Vec<String> {
    (1..=m).map(|k| format!("S{k}")).collect()
}

/// Dense joint probability table over an ordered channel subset.
///
/// Cells are stored row-major: the last channel of the subset varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    channels: Vec<usize>,
    shape: Vec<usize>,
    probabilities: Vec<f64>,
}

impl ProbabilityTable {
    pub fn new(channels: Vec<usize>, shape: Vec<usize>, probabilities: Vec<f64>) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::EmptySubset);
        }
        if shape.len() != channels.len() {
            return Err(Error::InvalidInput(
                "table shape and channel list differ in length".into(),
            ));
        }
        validate_subset(&channels, usize::MAX)?;
        let cells: usize = shape.iter().product();
        if cells != probabilities.len() {
            return Err(Error::InvalidInput(format!(
                "table has {} cells, shape implies {cells}",
                probabilities.len()
            )));
        }
        if probabilities.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(Error::InvalidInput(
                "probabilities must lie in [0, 1]".into(),
            ));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self {
            channels,
            shape,
            probabilities,
        })
    }

    pub fn channels(&self) -> &[usize] {
        &self.channels
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Probability of one symbol combination, ordered like `channels()`.
    pub fn get(&self, symbols: &[usize]) -> f64 {
        assert_eq!(symbols.len(), self.shape.len());
        let mut idx = 0;
        for (&s, &q) in symbols.iter().zip(&self.shape) {
            assert!(s < q, "symbol {s} outside alphabet of size {q}");
            idx = idx * q + s;
        }
        self.probabilities[idx]
    }

    /// Marginal table over `keep`, given as channel ids present in this table.
    pub fn marginal(&self, keep: &[usize]) -> Result<ProbabilityTable> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        validate_subset(keep, usize::MAX)?;
        let positions = keep
            .iter()
            .map(|c| {
                self.channels
                    .iter()
                    .position(|x| x == c)
                    .ok_or(Error::ChannelOutOfRange {
                        index: *c,
                        channels: self.channels.len(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let out_shape: Vec<usize> = positions.iter().map(|&p| self.shape[p]).collect();
        let mut out = vec![0.0; out_shape.iter().product()];
        let mut digits = vec![0usize; self.shape.len()];
        for &p in &self.probabilities {
            let mut idx = 0;
            for (&pos, &q) in positions.iter().zip(&out_shape) {
                idx = idx * q + digits[pos];
            }
            out[idx] += p;
            // advance the mixed-radix counter, last digit fastest
            for d in (0..digits.len()).rev() {
                digits[d] += 1;
                if digits[d] < self.shape[d] {
                    break;
                }
                digits[d] = 0;
            }
        }
        Ok(ProbabilityTable {
            channels: keep.to_vec(),
            shape: out_shape,
            probabilities: out,
        })
    }

    /// Entropy of the marginal over `subset` (channel ids of this table).
    pub fn marginal_entropy(&self, subset: &[usize]) -> Result<f64> {
        Ok(entropy(&self.marginal(subset)?))
    }
}

/// Shannon entropy in nats with `0 log 0 = 0`.
pub fn entropy(table: &ProbabilityTable) -> f64 {
    let h: f64 = table
        .probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum();
    h.max(0.0)
}

fn validate_subset(subset: &[usize], channels: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    for (k, &c) in subset.iter().enumerate() {
        if c >= channels {
            return Err(Error::ChannelOutOfRange { index: c, channels });
        }
        if subset[..k].contains(&c) {
            return Err(Error::DuplicateChannel(c));
        }
    }
    Ok(())
}

fn product_cells(dataset: &SymbolDataset, subset: &[usize], cap: usize) -> Result<usize> {
    let cells: u128 = subset
        .iter()
        .map(|&c| dataset.alphabet_sizes[c] as u128)
        .product();
    if cells > cap as u128 {
        return Err(Error::AlphabetTooLarge { cells, cap });
    }
    Ok(cells as usize)
}

/// Mixed-radix code of each observation restricted to `subset`.
pub(crate) fn subset_codes(dataset: &SymbolDataset, subset: &[usize]) -> Vec<usize> {
    let mut codes = vec![0usize; dataset.n_obs()];
    for &c in subset {
        let q = dataset.alphabet_sizes[c] as usize;
        for (code, &s) in codes.iter_mut().zip(&dataset.columns[c]) {
            *code = *code * q + s as usize;
        }
    }
    codes
}

/// Empirical joint pmf of the channels in `subset`, with the default cell cap.
pub fn joint_pmf(dataset: &SymbolDataset, subset: &[usize]) -> Result<ProbabilityTable> {
    joint_pmf_capped(dataset, subset, DEFAULT_CELL_CAP)
}

pub fn joint_pmf_capped(
    dataset: &SymbolDataset,
    subset: &[usize],
    cap: usize,
) -> Result<ProbabilityTable> {
    validate_subset(subset, dataset.n_channels())?;
    let cells = product_cells(dataset, subset, cap)?;
    let mut counts = vec![0u64; cells];
    for code in subset_codes(dataset, subset) {
        counts[code] += 1;
    }
    let n = dataset.n_obs() as f64;
    Ok(ProbabilityTable {
        channels: subset.to_vec(),
        shape: subset
            .iter()
            .map(|&c| dataset.alphabet_sizes[c] as usize)
            .collect(),
        probabilities: counts.into_iter().map(|c| c as f64 / n).collect(),
    })
}

/// `I(X;Y)` for two channels of a table.
pub fn table_mutual_information(table: &ProbabilityTable, x: usize, y: usize) -> Result<f64> {
    if x == y {
        return Err(Error::SameChannel(x, y));
    }
    let hx = table.marginal_entropy(&[x])?;
    let hy = table.marginal_entropy(&[y])?;
    let hxy = table.marginal_entropy(&[x, y])?;
    Ok((hx + hy - hxy).max(0.0))
}

/// `I(X;Y|Z) = I(X;Y,Z) - I(X;Z)` on one table.
pub fn table_conditional_mutual_information(
    table: &ProbabilityTable,
    x: usize,
    y: usize,
    zset: &[usize],
) -> Result<f64> {
    check_pair_and_conditioning(x, y, zset)?;
    if zset.is_empty() {
        return table_mutual_information(table, x, y);
    }
    let yz: Vec<usize> = std::iter::once(y).chain(zset.iter().copied()).collect();
    let xz: Vec<usize> = std::iter::once(x).chain(zset.iter().copied()).collect();
    let xyz: Vec<usize> = [x, y].into_iter().chain(zset.iter().copied()).collect();
    let hx = table.marginal_entropy(&[x])?;
    let hz = table.marginal_entropy(zset)?;
    let i_x_yz = hx + table.marginal_entropy(&yz)? - table.marginal_entropy(&xyz)?;
    let i_x_z = hx + hz - table.marginal_entropy(&xz)?;
    Ok((i_x_yz - i_x_z).max(0.0))
}

fn check_pair_and_conditioning(x: usize, y: usize, zset: &[usize]) -> Result<()> {
    if x == y {
        return Err(Error::SameChannel(x, y));
    }
    if let Some(&z) = zset.iter().find(|&&z| z == x || z == y) {
        return Err(Error::OverlappingChannels(z));
    }
    Ok(())
}

/// Plug-in mutual information between channels `i` and `j`, in nats.
pub fn mutual_information(dataset: &SymbolDataset, i: usize, j: usize) -> Result<f64> {
    if i == j {
        return Err(Error::SameChannel(i, j));
    }
    let table = joint_pmf(dataset, &[i, j])?;
    table_mutual_information(&table, i, j)
}

/// Plug-in conditional mutual information `I(X_i; X_j | X_zset)`, in nats.
pub fn conditional_mutual_information(
    dataset: &SymbolDataset,
    i: usize,
    j: usize,
    zset: &[usize],
) -> Result<f64> {
    check_pair_and_conditioning(i, j, zset)?;
    let subset: Vec<usize> = [i, j].into_iter().chain(zset.iter().copied()).collect();
    let table = joint_pmf(dataset, &subset)?;
    table_conditional_mutual_information(&table, i, j, zset)
}

/// Entropy from raw counts over `n` observations: `ln n - (1/n) sum c ln c`.
fn entropy_from_counts(counts: impl Iterator<Item = u64>, n: usize) -> f64 {
    let nf = n as f64;
    let s: f64 = counts
        .filter(|&c| c > 0)
        .map(|c| {
            let c = c as f64;
            c * c.ln()
        })
        .sum();
    (nf.ln() - s / nf).max(0.0)
}

/// Plug-in entropy of a sequence of joint-symbol codes; reorders `codes`.
pub(crate) fn entropy_of_codes(codes: &mut [usize]) -> f64 {
    let n = codes.len();
    codes.sort_unstable();
    entropy_from_counts(codes.chunk_by(|a, b| a == b).map(|r| r.len() as u64), n)
}

/// Memoized subset entropies of one dataset.
///
/// Network analysis evaluates the same marginals (singletons, pairs, the
/// conditioning sets, the full set) for many links; this computes each once.
/// Values agree with `entropy(&joint_pmf(..))` up to rounding.
pub struct EntropyCache<'a> {
    dataset: &'a SymbolDataset,
    cap: usize,
    cache: HashMap<Vec<usize>, f64>,
    scratch: Vec<u64>,
}

impl<'a> EntropyCache<'a> {
    pub fn new(dataset: &'a SymbolDataset, cap: usize) -> Self {
        Self {
            dataset,
            cap,
            cache: HashMap::new(),
            scratch: Vec::new(),
        }
    }

    /// Entropy of the channels in `subset`; the order of `subset` is irrelevant.
    pub fn entropy(&mut self, subset: &[usize]) -> Result<f64> {
        let mut key = subset.to_vec();
        key.sort_unstable();
        if let Some(&h) = self.cache.get(&key) {
            return Ok(h);
        }
        validate_subset(&key, self.dataset.n_channels())?;
        let cells = product_cells(self.dataset, &key, self.cap)?;
        let n = self.dataset.n_obs();
        let codes = subset_codes(self.dataset, &key);
        let h = if cells <= 4 * n + 64 {
            self.scratch.clear();
            self.scratch.resize(cells, 0);
            for code in codes {
                self.scratch[code] += 1;
            }
            entropy_from_counts(self.scratch.iter().copied(), n)
        } else {
            // sparse occupancy: count runs of sorted codes
            let mut codes = codes;
            codes.sort_unstable();
            let runs = codes.chunk_by(|a, b| a == b).map(|r| r.len() as u64);
            entropy_from_counts(runs, n)
        };
        self.cache.insert(key, h);
        Ok(h)
    }

    pub fn mutual_information(&mut self, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Err(Error::SameChannel(i, j));
        }
        let v = self.entropy(&[i])? + self.entropy(&[j])? - self.entropy(&[i, j])?;
        Ok(v.max(0.0))
    }

    pub fn conditional_mutual_information(
        &mut self,
        i: usize,
        j: usize,
        zset: &[usize],
    ) -> Result<f64> {
        check_pair_and_conditioning(i, j, zset)?;
        if zset.is_empty() {
            return self.mutual_information(i, j);
        }
        let with = |a: &[usize]| -> Vec<usize> { a.iter().chain(zset).copied().collect() };
        let hx = self.entropy(&[i])?;
        let i_x_yz = hx + self.entropy(&with(&[j]))? - self.entropy(&with(&[i, j]))?;
        let i_x_z = hx + self.entropy(zset)? - self.entropy(&with(&[i]))?;
        Ok((i_x_yz - i_x_z).max(0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ds(cols: Vec<Vec<u32>>) -> SymbolDataset {
        SymbolDataset::from_unnamed(cols).unwrap()
    }

    #[test]
    fn pmf_counts_frequencies() {
        let d = ds(vec![vec![0, 1, 0, 1], vec![0, 0, 0, 0]]);
        let t = joint_pmf(&d, &[0]).unwrap();
        assert_eq!(t.probabilities(), &[0.5, 0.5]);
    }

    #[test]
    fn pmf_identical_columns_is_diagonal() {
        let c = vec![0, 1, 1, 0, 1, 0, 0];
        let d = ds(vec![c.clone(), c]);
        let t = joint_pmf(&d, &[0, 1]).unwrap();
        assert_abs_diff_eq!(t.get(&[0, 0]) + t.get(&[1, 1]), 1.0, epsilon = 1e-15);
        assert_eq!(t.get(&[0, 1]), 0.0);
        assert_eq!(t.get(&[1, 0]), 0.0);
    }

    #[test]
    fn pmf_rejects_bad_subsets() {
        let d = ds(vec![vec![0, 1], vec![1, 0]]);
        assert!(matches!(joint_pmf(&d, &[]), Err(Error::EmptySubset)));
        assert!(matches!(
            joint_pmf(&d, &[0, 0]),
            Err(Error::DuplicateChannel(0))
        ));
        assert!(matches!(
            joint_pmf(&d, &[2]),
            Err(Error::ChannelOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn pmf_enforces_cell_cap() {
        let d = SymbolDataset::new(
            vec![vec![0; 3], vec![0; 3], vec![0; 3]],
            vec![1000, 1000, 1000],
            default_channel_names(3),
        )
        .unwrap();
        assert!(matches!(
            joint_pmf(&d, &[0, 1, 2]),
            Err(Error::AlphabetTooLarge { .. })
        ));
        assert!(joint_pmf_capped(&d, &[0, 1], 1_000_000).is_ok());
    }

    #[test]
    fn dataset_rejects_out_of_alphabet_symbols() {
        let r = SymbolDataset::new(
            vec![vec![0, 2], vec![0, 1]],
            vec![2, 2],
            default_channel_names(2),
        );
        assert!(matches!(
            r,
            Err(Error::SymbolOutOfRange {
                row: 1,
                channel: 0,
                ..
            })
        ));
    }

    #[test]
    fn entropy_closed_forms() {
        let uniform = ProbabilityTable::new(vec![0], vec![2], vec![0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(entropy(&uniform), std::f64::consts::LN_2, epsilon = 1e-15);
        let det = ProbabilityTable::new(vec![0], vec![3], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(entropy(&det), 0.0);
        // -0.9 ln 0.9 - 0.1 ln 0.1
        let skew = ProbabilityTable::new(vec![0], vec![2], vec![0.9, 0.1]).unwrap();
        assert_abs_diff_eq!(entropy(&skew), 0.325_082_973_391_448_2, epsilon = 1e-12);
    }

    #[test]
    fn mi_of_perfect_copy_is_ln2() {
        let c: Vec<u32> = (0..1000).map(|k| (k % 2) as u32).collect();
        let d = ds(vec![c.clone(), c]);
        assert_abs_diff_eq!(
            mutual_information(&d, 0, 1).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-12
        );
        assert!(matches!(
            mutual_information(&d, 1, 1),
            Err(Error::SameChannel(1, 1))
        ));
    }

    #[test]
    fn mi_of_independent_columns_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<u32> = (0..50_000).map(|_| rng.random_range(0..2)).collect();
        let b: Vec<u32> = (0..50_000).map(|_| rng.random_range(0..2)).collect();
        assert!(mutual_information(&ds(vec![a, b]), 0, 1).unwrap() < 1e-3);
    }

    #[test]
    fn cmi_with_empty_conditioning_equals_mi() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a: Vec<u32> = (0..500).map(|_| rng.random_range(0..3)).collect();
        let b: Vec<u32> = a
            .iter()
            .map(|&x| if rng.random_bool(0.7) { x } else { 0 })
            .collect();
        let d = ds(vec![a, b]);
        assert_abs_diff_eq!(
            conditional_mutual_information(&d, 0, 1, &[]).unwrap(),
            mutual_information(&d, 0, 1).unwrap(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn cmi_irrelevant_conditioning_on_exact_table() {
        // Z independent of (X,Y): p(x,y,z) = p(x,y) p(z)
        let pxy = [0.4, 0.1, 0.1, 0.4];
        let pz = [0.3, 0.7];
        let mut p = Vec::new();
        for a in pxy {
            for b in pz {
                p.push(a * b);
            }
        }
        let t = ProbabilityTable::new(vec![0, 1, 2], vec![2, 2, 2], p).unwrap();
        let mi = table_mutual_information(&t, 0, 1).unwrap();
        let cmi = table_conditional_mutual_information(&t, 0, 1, &[2]).unwrap();
        assert_abs_diff_eq!(mi, cmi, epsilon = 1e-14);
    }

    #[test]
    fn cmi_rejects_overlap() {
        let d = ds(vec![vec![0, 1], vec![1, 0], vec![0, 0]]);
        assert!(matches!(
            conditional_mutual_information(&d, 0, 1, &[1, 2]),
            Err(Error::OverlappingChannels(1))
        ));
    }

    #[test]
    fn marginal_sums_out_channels() {
        let t = ProbabilityTable::new(vec![4, 7], vec![2, 3], vec![0.1, 0.2, 0.1, 0.3, 0.2, 0.1])
            .unwrap();
        let m = t.marginal(&[7]).unwrap();
        assert_abs_diff_eq!(m.probabilities()[0], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(m.probabilities()[1], 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(m.probabilities()[2], 0.2, epsilon = 1e-15);
        let swapped = t.marginal(&[7, 4]).unwrap();
        assert_abs_diff_eq!(swapped.get(&[1, 0]), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn cache_agrees_with_table_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cols: Vec<Vec<u32>> = (0..4)
            .map(|_| (0..300).map(|_| rng.random_range(0..3)).collect())
            .collect();
        let d = ds(cols);
        let mut cache = EntropyCache::new(&d, DEFAULT_CELL_CAP);
        let a = cache.conditional_mutual_information(0, 2, &[1, 3]).unwrap();
        let b = conditional_mutual_information(&d, 0, 2, &[1, 3]).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        // sparse counting branch
        let big = SymbolDataset::new(
            d.columns().to_vec(),
            vec![30, 30, 30, 30],
            d.channel_names().to_vec(),
        )
        .unwrap();
        let mut cache = EntropyCache::new(&big, DEFAULT_CELL_CAP);
        let h = cache.entropy(&[0, 1, 2, 3]).unwrap();
        let h_ref = entropy(&joint_pmf(&big, &[0, 1, 2, 3]).unwrap());
        assert_abs_diff_eq!(h, h_ref, epsilon = 1e-12);
    }
}
