use log::warn;
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{cholesky_checked, ln_det_spd, symmetrize};
use crate::var::{SeriesDataset, VarModel};

/// Outcome of least-squares identification with AIC order selection.
#[derive(Debug, Clone)]
pub struct VarFit {
    pub model: VarModel,
    /// Selected order.
    pub order: usize,
    /// AIC for every candidate order `1..=p_max` (index `p - 1`).
    pub aic: Vec<f64>,
    pub spectral_radius: f64,
    pub stationary: bool,
}

/// Lagged regressor matrix: row `t - start` holds `[S_{t-1}, ..., S_{t-lags}]`.
fn lagged_regressors(x: &DMatrix<f64>, lags: usize, start: usize) -> DMatrix<f64> {
    let n = x.nrows();
    let m = x.ncols();
    let rows = n - start;
    let mut z = DMatrix::zeros(rows, m * lags);
    for k in 0..lags {
        z.view_mut((0, k * m), (rows, m))
            .copy_from(&x.view((start - k - 1, 0), (rows, m)));
    }
    z
}

/// Fits a VAR model of fixed order `p` by ordinary least squares on
/// mean-removed data (no intercept).
pub fn fit_var_order(series: &SeriesDataset, p: usize) -> Result<VarModel> {
    let n = series.n_samples();
    let m = series.n_channels();
    if p == 0 {
        return Err(Error::InvalidInput("model order must be at least 1".into()));
    }
    if n <= p || n - p <= m * p + 1 {
        return Err(Error::InsufficientData(format!(
            "{n} samples cannot identify a {m}-channel VAR({p})"
        )));
    }
    let x = series.centered_matrix();
    let z = lagged_regressors(&x, p, p);
    let y = x.rows(p, n - p).into_owned();
    let gram = z.tr_mul(&z);
    let chol = cholesky_checked(gram).ok_or(Error::RankDeficient { order: p })?;
    let b = chol.solve(&z.tr_mul(&y));
    let resid = &y - &z * &b;
    let sigma = symmetrize(&(resid.tr_mul(&resid) / (n - p) as f64));
    if cholesky_checked(sigma.clone()).is_none() {
        return Err(Error::NotPositiveDefinite("residual covariance".into()));
    }
    let coeffs = (0..p).map(|k| b.rows(k * m, m).transpose()).collect();
    VarModel::new(coeffs, sigma)
}

/// Least-squares VAR identification with the order chosen in `1..=p_max`
/// by minimizing `ln det Sigma_U(p) + 2 p M^2 / N`.
///
/// Candidate orders are compared on the common sample that the largest
/// order allows; the selected order is then refitted on all available
/// samples. A non-stationary result is returned with `stationary = false`.
pub fn fit_var(series: &SeriesDataset, p_max: usize) -> Result<VarFit> {
    let n = series.n_samples();
    let m = series.n_channels();
    if p_max == 0 {
        return Err(Error::InvalidInput("p_max must be at least 1".into()));
    }
    if n <= p_max || n - p_max <= m * p_max + 1 {
        return Err(Error::InsufficientData(format!(
            "{n} samples cannot identify a {m}-channel VAR with p_max = {p_max}"
        )));
    }
    let x = series.centered_matrix();
    let t = n - p_max;
    let z = lagged_regressors(&x, p_max, p_max);
    let y = x.rows(p_max, t).into_owned();
    let gram = z.tr_mul(&z);
    let cross = z.tr_mul(&y);
    let yy = y.tr_mul(&y);

    let mut aic = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let k = m * p;
        let g = gram.view((0, 0), (k, k)).into_owned();
        let c = cross.rows(0, k).into_owned();
        let Some(chol) = cholesky_checked(g) else {
            if p == 1 {
                return Err(Error::RankDeficient { order: p });
            }
            // higher orders cannot be identified either
            break;
        };
        let b = chol.solve(&c);
        let rss = &yy - c.tr_mul(&b);
        let sigma = (&rss + rss.transpose()) * (0.5 / t as f64);
        let value = match ln_det_spd(&sigma) {
            Some(ld) => ld + 2.0 * (p * m * m) as f64 / n as f64,
            None => f64::INFINITY,
        };
        aic.push(value);
    }
    let order = aic
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k + 1)
        .ok_or_else(|| Error::NotPositiveDefinite("residual covariance at every order".into()))?;

    let model = fit_var_order(series, order)?;
    let spectral_radius = model.spectral_radius();
    let stationary = spectral_radius < 1.0;
    if !stationary {
        warn!("fitted VAR({order}) is not stationary (spectral radius {spectral_radius:.4})");
    }
    Ok(VarFit {
        model,
        order,
        aic,
        spectral_radius,
        stationary,
    })
}
