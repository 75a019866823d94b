use rand::seq::SliceRandom;
use rand::Rng;

use crate::info::SymbolDataset;
use crate::var::SeriesDataset;

/// Permutes every channel independently, keeping each column's multiset of
/// symbols and therefore its marginal distribution.
pub fn shuffle_surrogate<R: Rng + ?Sized>(dataset: &SymbolDataset, rng: &mut R) -> SymbolDataset {
    let columns = dataset
        .columns()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.shuffle(rng);
            c
        })
        .collect();
    dataset.with_columns(columns)
}

/// Random-shuffle surrogate of a real-valued dataset (destroys all temporal
/// structure as well as cross-channel coupling).
pub fn shuffle_series_surrogate<R: Rng + ?Sized>(
    series: &SeriesDataset,
    rng: &mut R,
) -> SeriesDataset {
    let columns = series
        .columns()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.shuffle(rng);
            c
        })
        .collect();
    series.with_columns(columns)
}
