//! Surrogate-data significance testing and link classification.

mod conditional;
mod iaaft;
mod link;
mod shuffle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use conditional::{stratified_shuffle, ConditionalNull, Strata};
pub use iaaft::{iaaft_surrogate, IaaftGenerator};
pub use link::{b_index, classify_link, Classification, LinkClass, LinkResult};
pub use shuffle::{shuffle_series_surrogate, shuffle_surrogate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurrogateMethod {
    /// Independent random permutation of every channel.
    Shuffle,
    /// Iterative amplitude-adjusted Fourier transform, per channel.
    Iaaft,
}

impl std::fmt::Display for SurrogateMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SurrogateMethod::Shuffle => "shuffle",
            SurrogateMethod::Iaaft => "iaaft",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurrogateConfig {
    pub count: usize,
    pub alpha: f64,
    pub method: SurrogateMethod,
    pub iaaft_max_iter: usize,
    pub master_seed: u64,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        Self {
            count: 100,
            alpha: 0.05,
            method: SurrogateMethod::Shuffle,
            iaaft_max_iter: 100,
            master_seed: 0,
        }
    }
}

impl SurrogateConfig {
    pub fn with_method(method: SurrogateMethod) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidInput(
                "surrogate count must be positive".into(),
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if (self.count as f64) * self.alpha < 1.0 - 1e-9 {
            return Err(Error::InvalidInput(format!(
                "{} surrogates cannot resolve the {} percentile",
                self.count,
                1.0 - self.alpha
            )));
        }
        if self.iaaft_max_iter == 0 {
            return Err(Error::InvalidInput(
                "iaaft_max_iter must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Index (1-based) of the order statistic used as threshold:
/// `ceil((1 - alpha) * count)`, clamped to `1..=count`.
pub fn threshold_rank(count: usize, alpha: f64) -> usize {
    let k = ((1.0 - alpha) * count as f64 - 1e-9).ceil();
    (k.max(1.0) as usize).min(count)
}

/// True iff `original` strictly exceeds the `ceil((1 - alpha) * count)`-th
/// smallest surrogate value. An empty surrogate list never rejects.
pub fn percentile_test(original: f64, surrogate_values: &[f64], alpha: f64) -> bool {
    if surrogate_values.is_empty() {
        return false;
    }
    let mut sorted = surrogate_values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let k = threshold_rank(sorted.len(), alpha);
    original > sorted[k - 1]
}
