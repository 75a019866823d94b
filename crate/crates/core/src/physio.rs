//! Beat-to-beat cardiovascular variables.
//!
//! Beats are numbered from 1. A derived series records the number of its
//! first beat so that series with different valid ranges can be aligned.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::SymbolDataset;
use crate::var::SeriesDataset;

/// Measured per-beat parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BeatColumn {
    /// Heart period, ms.
    Hp,
    /// Systolic pressure, mmHg.
    Sp,
    /// Diastolic pressure, mmHg.
    Dp,
    /// Respiration amplitude, arbitrary units.
    Ra,
    /// Mean arterial pressure, mmHg.
    Map,
    /// Maximum of the impedance derivative, Ω/s.
    ZMax,
    /// Left ventricular ejection time, ms.
    Lvet,
}

impl BeatColumn {
    pub const ALL: [BeatColumn; 7] = [
        BeatColumn::Hp,
        BeatColumn::Sp,
        BeatColumn::Dp,
        BeatColumn::Ra,
        BeatColumn::Map,
        BeatColumn::ZMax,
        BeatColumn::Lvet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BeatColumn::Hp => "HP",
            BeatColumn::Sp => "SP",
            BeatColumn::Dp => "DP",
            BeatColumn::Ra => "RA",
            BeatColumn::Map => "MAP",
            BeatColumn::ZMax => "ZMAX",
            BeatColumn::Lvet => "LVET",
        }
    }

    /// Case-insensitive lookup; also accepts `Z'max`.
    pub fn parse(name: &str) -> Option<Self> {
        let upper = name.trim().to_ascii_uppercase().replace('\'', "");
        Self::ALL.into_iter().find(|c| c.name() == upper)
    }
}

/// Per-beat parameter columns of equal length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeatSeries {
    n: usize,
    columns: BTreeMap<BeatColumn, Vec<f64>>,
}

impl BeatSeries {
    /// Rejects ragged or non-finite columns and non-positive HP or LVET.
    pub fn new(columns: BTreeMap<BeatColumn, Vec<f64>>) -> Result<Self> {
        let n = columns.values().next().map_or(0, Vec::len);
        if n == 0 {
            return Err(Error::InvalidInput(
                "beat series needs at least one beat".into(),
            ));
        }
        for (&col, values) in &columns {
            if values.len() != n {
                return Err(Error::InvalidInput(format!(
                    "column {} has {} beats, expected {n}",
                    col.name(),
                    values.len()
                )));
            }
            let positive = matches!(col, BeatColumn::Hp | BeatColumn::Lvet);
            for (row, &v) in values.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::Parse {
                        row: row + 1,
                        column: col.name().into(),
                        message: format!("non-finite value {v}"),
                    });
                }
                if positive && v <= 0.0 {
                    return Err(Error::Parse {
                        row: row + 1,
                        column: col.name().into(),
                        message: format!("{} must be positive, got {v}", col.name()),
                    });
                }
            }
        }
        Ok(Self { n, columns })
    }

    pub fn n_beats(&self) -> usize {
        self.n
    }

    pub fn column(&self, col: BeatColumn) -> Option<&[f64]> {
        self.columns.get(&col).map(Vec::as_slice)
    }

    pub fn columns(&self) -> &BTreeMap<BeatColumn, Vec<f64>> {
        &self.columns
    }

    fn require(&self, col: BeatColumn) -> Result<&[f64]> {
        self.column(col)
            .ok_or_else(|| Error::MissingColumn(col.name().into()))
    }
}

/// Values for consecutive beats `first_beat, first_beat + 1, ..`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeatAligned<T> {
    pub first_beat: usize,
    pub values: Vec<T>,
}

impl<T: Clone> BeatAligned<T> {
    /// One past the last beat.
    pub fn end_beat(&self) -> usize {
        self.first_beat + self.values.len()
    }

    fn slice(&self, first: usize, end: usize) -> Vec<T> {
        self.values[first - self.first_beat..end - self.first_beat].to_vec()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscreteKind {
    /// Heart-rate variation: 1 iff `HP[n+1] > HP[n]`.
    Hv,
    /// Systolic-pressure variation: 1 iff `SP[n] > SP[n-1]`.
    Sv,
    /// Respiration phase: 1 iff `RA[n+1] > RA[n+2]`.
    Rp,
}

impl DiscreteKind {
    pub fn name(self) -> &'static str {
        match self {
            DiscreteKind::Hv => "HV",
            DiscreteKind::Sv => "SV",
            DiscreteKind::Rp => "RP",
        }
    }
}

/// Binary beat variable over beats `2..=N-1` (HV, SV) or `2..=N-2` (RP,
/// whose last value needs `RA[n+2]`). Ties map to 0.
pub fn derive_discrete(kind: DiscreteKind, series: &BeatSeries) -> Result<BeatAligned<u32>> {
    let n = series.n_beats();
    let (col, min_beats) = match kind {
        DiscreteKind::Hv => (BeatColumn::Hp, 3),
        DiscreteKind::Sv => (BeatColumn::Sp, 3),
        DiscreteKind::Rp => (BeatColumn::Ra, 4),
    };
    let x = series.require(col)?;
    if n < min_beats {
        return Err(Error::InsufficientData(format!(
            "{} needs at least {min_beats} beats, got {n}",
            kind.name()
        )));
    }
    // x[k] holds beat k + 1
    let beat = |b: usize| x[b - 1];
    let last = match kind {
        DiscreteKind::Rp => n - 2,
        _ => n - 1,
    };
    let values = (2..=last)
        .map(|b| match kind {
            DiscreteKind::Hv => (beat(b + 1) > beat(b)) as u32,
            DiscreteKind::Sv => (beat(b) > beat(b - 1)) as u32,
            DiscreteKind::Rp => (beat(b + 1) > beat(b + 2)) as u32,
        })
        .collect();
    Ok(BeatAligned {
        first_beat: 2,
        values,
    })
}

fn common_range<T: Clone>(series: &[&BeatAligned<T>]) -> Result<(usize, usize)> {
    let first = series.iter().map(|s| s.first_beat).max().unwrap_or(0);
    let end = series.iter().map(|s| s.end_beat()).min().unwrap_or(0);
    if end <= first {
        return Err(Error::InsufficientData(
            "derived series do not overlap".into(),
        ));
    }
    Ok((first, end))
}

/// Derives the requested binary variables on their common beat range.
pub fn derive_discrete_dataset(
    series: &BeatSeries,
    kinds: &[DiscreteKind],
) -> Result<(usize, SymbolDataset)> {
    let derived = kinds
        .iter()
        .map(|&k| derive_discrete(k, series))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<_> = derived.iter().collect();
    let (first, end) = common_range(&refs)?;
    let columns = derived.iter().map(|d| d.slice(first, end)).collect();
    let names = kinds.iter().map(|k| k.name().to_string()).collect();
    Ok((
        first,
        SymbolDataset::new(columns, vec![2; kinds.len()], names)?,
    ))
}

/// `CO[n] = 60 * SV[n] / HP[n-1]` with stroke volume
/// `SV[n] = beta * ZMAX[n] * LVET[n]`, for beats `2..=N`. HP and LVET are
/// converted from ms to s, so `60 / HP` is in beats per minute.
pub fn derive_cardiac_output(series: &BeatSeries, beta: f64) -> Result<BeatAligned<f64>> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "beta must be positive, got {beta}"
        )));
    }
    let hp = series.require(BeatColumn::Hp)?;
    let z = series.require(BeatColumn::ZMax)?;
    let lvet = series.require(BeatColumn::Lvet)?;
    let n = series.n_beats();
    if n < 2 {
        return Err(Error::InsufficientData(
            "cardiac output needs at least 2 beats".into(),
        ));
    }
    let values = (1..n)
        .map(|k| {
            let stroke = beta * z[k] * lvet[k] / 1000.0;
            60.0 * stroke / (hp[k - 1] / 1000.0)
        })
        .collect();
    Ok(BeatAligned {
        first_beat: 2,
        values,
    })
}

/// `PR[n] = MAP[n] / CO[n]` on the beats where both are defined.
pub fn derive_peripheral_resistance(
    series: &BeatSeries,
    co: &BeatAligned<f64>,
) -> Result<BeatAligned<f64>> {
    let map = series.require(BeatColumn::Map)?;
    let map = BeatAligned {
        first_beat: 1,
        values: map.to_vec(),
    };
    let (first, end) = common_range(&[&map, co])?;
    let values = map
        .slice(first, end)
        .into_iter()
        .zip(co.slice(first, end))
        .enumerate()
        .map(|(k, (m, c))| {
            if c > 0.0 {
                Ok(m / c)
            } else {
                Err(Error::InvalidInput(format!(
                    "cardiac output at beat {} is not positive ({c})",
                    first + k
                )))
            }
        })
        .collect::<Result<_>>()?;
    Ok(BeatAligned {
        first_beat: first,
        values,
    })
}

/// Aligns real-valued beat series (measured or derived) on their common
/// beat range as a dataset for dynamic analysis.
pub fn aligned_series(named: &[(&str, &BeatAligned<f64>)]) -> Result<(usize, SeriesDataset)> {
    let refs: Vec<_> = named.iter().map(|(_, s)| *s).collect();
    let (first, end) = common_range(&refs)?;
    let columns = refs.iter().map(|s| s.slice(first, end)).collect();
    let names = named.iter().map(|(n, _)| n.to_string()).collect();
    Ok((first, SeriesDataset::new(columns, names)?))
}

/// A measured column as a beat-aligned series starting at beat 1.
pub fn measured(series: &BeatSeries, col: BeatColumn) -> Result<BeatAligned<f64>> {
    Ok(BeatAligned {
        first_beat: 1,
        values: series.require(col)?.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beats(cols: &[(BeatColumn, Vec<f64>)]) -> BeatSeries {
        BeatSeries::new(cols.iter().cloned().collect()).unwrap()
    }

    #[test]
    fn hv_rule() {
        let s = beats(&[(BeatColumn::Hp, vec![800.0, 820.0, 810.0])]);
        let hv = derive_discrete(DiscreteKind::Hv, &s).unwrap();
        assert_eq!(
            hv,
            BeatAligned {
                first_beat: 2,
                values: vec![0]
            }
        );
    }

    #[test]
    fn sv_ties_map_to_zero() {
        let s = beats(&[(BeatColumn::Sp, vec![120.0; 6])]);
        let sv = derive_discrete(DiscreteKind::Sv, &s).unwrap();
        assert_eq!(sv.values, vec![0; 4]);
    }

    #[test]
    fn rp_of_increasing_respiration() {
        let s = beats(&[(BeatColumn::Ra, (0..8).map(f64::from).collect())]);
        let rp = derive_discrete(DiscreteKind::Rp, &s).unwrap();
        assert_eq!(rp.values, vec![0; 5]);
        let s = beats(&[(BeatColumn::Ra, vec![5.0, 4.0, 3.0, 2.0])]);
        assert_eq!(
            derive_discrete(DiscreteKind::Rp, &s).unwrap().values,
            vec![1]
        );
    }

    #[test]
    fn discrete_set_aligns_on_common_beats() {
        let s = beats(&[
            (BeatColumn::Hp, vec![800.0, 820.0, 810.0, 830.0, 800.0]),
            (BeatColumn::Sp, vec![120.0, 118.0, 125.0, 125.0, 130.0]),
            (BeatColumn::Ra, vec![1.0, 2.0, 1.5, 1.0, 2.0]),
        ]);
        let (first, ds) =
            derive_discrete_dataset(&s, &[DiscreteKind::Hv, DiscreteKind::Sv, DiscreteKind::Rp])
                .unwrap();
        assert_eq!(first, 2);
        assert_eq!(ds.n_obs(), 2);
        assert_eq!(ds.column(0), &[0, 1]);
        assert_eq!(ds.column(1), &[0, 1]);
        assert_eq!(ds.column(2), &[1, 0]);
        let (_, two) = derive_discrete_dataset(&s, &[DiscreteKind::Hv, DiscreteKind::Sv]).unwrap();
        assert_eq!(two.n_obs(), 3);
    }

    #[test]
    fn too_short_or_missing() {
        let s = beats(&[(BeatColumn::Hp, vec![800.0, 820.0])]);
        assert!(matches!(
            derive_discrete(DiscreteKind::Hv, &s),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            derive_discrete(DiscreteKind::Sv, &s),
            Err(Error::MissingColumn(_))
        ));
    }

    #[test]
    fn cardiac_output_units() {
        let s = beats(&[
            (BeatColumn::Hp, vec![1000.0, 1000.0]),
            (BeatColumn::ZMax, vec![1.0, 1.0]),
            (BeatColumn::Lvet, vec![300.0, 300.0]),
        ]);
        let co = derive_cardiac_output(&s, 1.0).unwrap();
        assert_eq!(co.first_beat, 2);
        assert!((co.values[0] - 18.0).abs() < 1e-12);
    }

    #[test]
    fn resistance_ratio() {
        let s = beats(&[
            (BeatColumn::Hp, vec![1000.0; 3]),
            (BeatColumn::ZMax, vec![1.0; 3]),
            (BeatColumn::Lvet, vec![300.0; 3]),
            (BeatColumn::Map, vec![90.0, 36.0, 72.0]),
        ]);
        let co = derive_cardiac_output(&s, 1.0).unwrap();
        let pr = derive_peripheral_resistance(&s, &co).unwrap();
        assert_eq!(pr.first_beat, 2);
        assert_eq!(pr.values, vec![2.0, 4.0]);
    }

    #[test]
    fn invalid_beats_rejected() {
        let mut cols = BTreeMap::new();
        cols.insert(BeatColumn::Hp, vec![800.0, 0.0]);
        assert!(BeatSeries::new(cols).is_err());
        let mut cols = BTreeMap::new();
        cols.insert(BeatColumn::Sp, vec![120.0, f64::NAN]);
        assert!(matches!(
            BeatSeries::new(cols),
            Err(Error::Parse { row: 2, .. })
        ));
    }

    #[test]
    fn column_names() {
        assert_eq!(BeatColumn::parse("z'max"), Some(BeatColumn::ZMax));
        assert_eq!(BeatColumn::parse(" hp "), Some(BeatColumn::Hp));
        assert_eq!(BeatColumn::parse("ECG"), None);
    }
}
