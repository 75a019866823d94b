use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::default_channel_names;

/// N samples of M real-valued channels, stored column-wise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDataset {
    columns: Vec<Vec<f64>>,
    channel_names: Vec<String>,
}

impl SeriesDataset {
    pub fn new(columns: Vec<Vec<f64>>, channel_names: Vec<String>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::InvalidInput("series dataset has no channels".into()));
        }
        if channel_names.len() != columns.len() {
            return Err(Error::InvalidInput(
                "channel names and columns differ in length".into(),
            ));
        }
        let n = columns[0].len();
        if n == 0 {
            return Err(Error::InsufficientData(
                "series dataset has no samples".into(),
            ));
        }
        for (c, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::InvalidInput(format!(
                    "channel {c} has {} samples, expected {n}",
                    col.len()
                )));
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::Parse {
                    row,
                    column: channel_names[c].clone(),
                    message: "non-finite value".into(),
                });
            }
        }
        Ok(Self {
            columns,
            channel_names,
        })
    }

    pub fn from_unnamed(columns: Vec<Vec<f64>>) -> Result<Self> {
        let names = default_channel_names(columns.len());
        Self::new(columns, names)
    }

    pub fn n_samples(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_channels(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, channel: usize) -> &[f64] {
        &self.columns[channel]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    pub(crate) fn with_columns(&self, columns: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(columns.len(), self.columns.len());
        Self {
            columns,
            channel_names: self.channel_names.clone(),
        }
    }

    /// Reorders channels: output channel `k` is input channel `order[k]`.
    pub fn permute_channels(&self, order: &[usize]) -> Result<Self> {
        let m = self.n_channels();
        let mut seen = vec![false; m];
        if order.len() != m {
            return Err(Error::InvalidInput(
                "permutation must cover every channel".into(),
            ));
        }
        for &c in order {
            if c >= m {
                return Err(Error::ChannelOutOfRange {
                    index: c,
                    channels: m,
                });
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::DuplicateChannel(c));
            }
        }
        Ok(Self {
            columns: order.iter().map(|&c| self.columns[c].clone()).collect(),
            channel_names: order
                .iter()
                .map(|&c| self.channel_names[c].clone())
                .collect(),
        })
    }

    /// Multiplies one channel by `factor`.
    pub fn scale_channel(&self, channel: usize, factor: f64) -> Self {
        let mut columns = self.columns.clone();
        columns[channel].iter_mut().for_each(|v| *v *= factor);
        self.with_columns(columns)
    }

    /// Mean-removed data as an N×M matrix.
    pub(crate) fn centered_matrix(&self) -> DMatrix<f64> {
        let n = self.n_samples();
        let m = self.n_channels();
        let means: Vec<f64> = self
            .columns
            .iter()
            .map(|c| c.iter().sum::<f64>() / n as f64)
            .collect();
        DMatrix::from_fn(n, m, |t, c| self.columns[c][t] - means[c])
    }
}
