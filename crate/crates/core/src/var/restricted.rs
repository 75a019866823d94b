use std::collections::HashMap;
use std::f64::consts::{E, PI};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_checked, submatrix, symmetrize};
use crate::var::{model_covariances, CovSequence, VarModel};

/// Default order of the restricted models.
pub const DEFAULT_RESTRICTED_ORDER: usize = 20;

/// Negative results within this distance of zero are clipped to zero.
const NEGATIVE_CLIP_TOL: f64 = 1e-9;

/// Autoregression of a channel subset on its own past, derived from the
/// covariance structure of the full process.
#[derive(Debug, Clone)]
pub struct RestrictedModel {
    pub subset: Vec<usize>,
    pub q: usize,
    /// `q` matrices over the subset, `B_1..B_q`.
    pub coeffs: Vec<DMatrix<f64>>,
    pub residual_cov: DMatrix<f64>,
}

fn check_subset(subset: &[usize], m: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    for (k, &c) in subset.iter().enumerate() {
        if c >= m {
            return Err(Error::ChannelOutOfRange {
                index: c,
                channels: m,
            });
        }
        if subset[..k].contains(&c) {
            return Err(Error::DuplicateChannel(c));
        }
    }
    Ok(())
}

/// Solves the order-`q` block-Toeplitz Yule-Walker system of `subset`.
///
/// With `W` the subset process and `G_k = E[W_n W_{n-k}^T]`, the coefficients
/// satisfy `G_k = sum_j B_j G_{k-j}` for `k = 1..q`, and the residual
/// covariance is `G_0 - sum_k B_k G_k^T`.
pub fn restricted_model(cov: &CovSequence, subset: &[usize], q: usize) -> Result<RestrictedModel> {
    check_subset(subset, cov.dim())?;
    if q == 0 || q > cov.max_lag() {
        return Err(Error::InvalidInput(format!(
            "restricted order {q} must be in 1..={}",
            cov.max_lag()
        )));
    }
    let d = subset.len();
    let g: Vec<DMatrix<f64>> = (0..=q).map(|k| submatrix(cov.lag(k), subset)).collect();

    // Toeplitz block (j, k) = G_{k-j}
    let mut toeplitz = DMatrix::zeros(q * d, q * d);
    for j in 0..q {
        for k in 0..q {
            let block = if k >= j {
                g[k - j].clone()
            } else {
                g[j - k].transpose()
            };
            toeplitz.view_mut((j * d, k * d), (d, d)).copy_from(&block);
        }
    }
    // stacked right-hand side: block row k holds G_{k+1}^T
    let mut rhs = DMatrix::zeros(q * d, d);
    for k in 0..q {
        rhs.view_mut((k * d, 0), (d, d))
            .copy_from(&g[k + 1].transpose());
    }
    let chol = cholesky_checked(symmetrize(&toeplitz)).ok_or_else(|| Error::SingularToeplitz {
        subset: subset.to_vec(),
    })?;
    let bt = chol.solve(&rhs);
    let residual = symmetrize(&(&g[0] - bt.tr_mul(&rhs)));
    let residual = ensure_positive_definite(residual)?;
    let coeffs = (0..q).map(|k| bt.rows(k * d, d).transpose()).collect();
    Ok(RestrictedModel {
        subset: subset.to_vec(),
        q,
        coeffs,
        residual_cov: residual,
    })
}

/// Applies a one-time diagonal jitter of `1e-10 * trace / dim` when the
/// matrix is numerically singular or indefinite; fails if that is not enough.
fn ensure_positive_definite(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let marginal = |m: &DMatrix<f64>| {
        let eig = SymmetricEigen::new(m.clone()).eigenvalues;
        let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
        let det: f64 = eig.iter().product();
        det <= 1e-300 || min <= 0.0
    };
    if !marginal(&m) {
        return Ok(m);
    }
    let d = m.nrows();
    let jitter = 1e-10 * m.trace() / d as f64;
    let jittered = &m + DMatrix::identity(d, d) * jitter;
    if jitter > 0.0 && !marginal(&jittered) {
        log::debug!("residual covariance needed diagonal jitter {jitter:e}");
        Ok(jittered)
    } else {
        Err(Error::NotPositiveDefinite(
            "restricted residual covariance".into(),
        ))
    }
}

/// Residual covariance of the order-`q` restricted model of `subset`.
pub fn restricted_residual_cov(
    cov: &CovSequence,
    subset: &[usize],
    q: usize,
) -> Result<DMatrix<f64>> {
    Ok(restricted_model(cov, subset, q)?.residual_cov)
}

fn ln_det(m: &DMatrix<f64>) -> Result<f64> {
    let eig = SymmetricEigen::new(m.clone()).eigenvalues;
    if eig.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotPositiveDefinite(
            "covariance has a non-positive eigenvalue".into(),
        ));
    }
    Ok(eig.iter().map(|v| v.ln()).sum())
}

/// Gaussian entropy rate `0.5 * ln((2 pi e)^d det(sigma))` in nats per sample.
pub fn entropy_rate(residual_cov: &DMatrix<f64>) -> Result<f64> {
    let d = residual_cov.nrows();
    Ok(0.5 * (d as f64 * (2.0 * PI * E).ln() + ln_det(residual_cov)?))
}

fn clip_negative(value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVE_CLIP_TOL {
        Ok(0.0)
    } else {
        Err(Error::NegativeInformation { value })
    }
}

/// Model-based information measures of one VAR process with memoized
/// restricted-model log-determinants.
pub struct GaussianInfo {
    cov: CovSequence,
    q: usize,
    cache: HashMap<Vec<usize>, f64>,
}

impl GaussianInfo {
    pub fn new(model: &VarModel, q: usize) -> Result<Self> {
        if q < model.order() {
            return Err(Error::InvalidInput(format!(
                "restricted order q = {q} is below model order p = {}",
                model.order()
            )));
        }
        Ok(Self::from_cov(model_covariances(model, q)?, q))
    }

    pub fn from_cov(cov: CovSequence, q: usize) -> Self {
        Self {
            cov,
            q,
            cache: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.cov.dim()
    }

    pub fn covariances(&self) -> &CovSequence {
        &self.cov
    }

    /// `ln det` of the restricted residual covariance of `subset` (any order).
    pub fn residual_ln_det(&mut self, subset: &[usize]) -> Result<f64> {
        let mut key = subset.to_vec();
        key.sort_unstable();
        if let Some(&v) = self.cache.get(&key) {
            return Ok(v);
        }
        let v = ln_det(&restricted_residual_cov(&self.cov, &key, self.q)?)?;
        self.cache.insert(key, v);
        Ok(v)
    }

    pub fn entropy_rate(&mut self, subset: &[usize]) -> Result<f64> {
        let d = subset.len() as f64;
        Ok(0.5 * (d * (2.0 * PI * E).ln() + self.residual_ln_det(subset)?))
    }

    /// Mutual information rate `I(X_i; X_j)`.
    pub fn mir(&mut self, i: usize, j: usize) -> Result<f64> {
        if i == j {
            return Err(Error::SameChannel(i, j));
        }
        let v = 0.5
            * (self.residual_ln_det(&[i])? + self.residual_ln_det(&[j])?
                - self.residual_ln_det(&[i, j])?);
        clip_negative(v)
    }

    /// Conditional MIR `I(X_i; X_j | X_zset) = I(X_i; X_j, X_z) - I(X_i; X_z)`.
    pub fn cmir(&mut self, i: usize, j: usize, zset: &[usize]) -> Result<f64> {
        if i == j {
            return Err(Error::SameChannel(i, j));
        }
        if let Some(&z) = zset.iter().find(|&&z| z == i || z == j) {
            return Err(Error::OverlappingChannels(z));
        }
        if zset.is_empty() {
            return self.mir(i, j);
        }
        let with = |a: &[usize]| -> Vec<usize> { a.iter().chain(zset).copied().collect() };
        // I(X;Y,Z) = 0.5 ln(|S_x| |S_yz| / |S_xyz|), I(X;Z) = 0.5 ln(|S_x| |S_z| / |S_xz|)
        let v = 0.5
            * (self.residual_ln_det(&with(&[j]))? + self.residual_ln_det(&with(&[i]))?
                - self.residual_ln_det(&with(&[i, j]))?
                - self.residual_ln_det(zset)?);
        clip_negative(v)
    }
}

/// Mutual information rate between channels `i` and `j` of a VAR model.
pub fn mir(model: &VarModel, i: usize, j: usize, q: usize) -> Result<f64> {
    GaussianInfo::new(model, q)?.mir(i, j)
}

/// Conditional mutual information rate of channels `i`, `j` given `zset`.
pub fn cmir(model: &VarModel, i: usize, j: usize, zset: &[usize], q: usize) -> Result<f64> {
    GaussianInfo::new(model, q)?.cmir(i, j, zset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// `X_n = u_n`, `Y_n = c X_{n-1} + v_n`.
    fn lagged_copy(c: f64) -> VarModel {
        VarModel::new(
            vec![DMatrix::from_row_slice(2, 2, &[0.0, 0.0, c, 0.0])],
            DMatrix::identity(2, 2),
        )
        .unwrap()
    }

    #[test]
    fn full_subset_reproduces_innovation_covariance() {
        let a1 = DMatrix::from_row_slice(3, 3, &[0.5, 0.2, 0.0, 0.0, 0.3, -0.2, 0.1, 0.0, 0.4]);
        let a2 = DMatrix::from_row_slice(3, 3, &[-0.2, 0.0, 0.0, 0.1, -0.1, 0.0, 0.0, 0.1, 0.0]);
        let sigma = DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.0, 0.3, 2.0, 0.1, 0.0, 0.1, 0.5]);
        let model = VarModel::new(vec![a1.clone(), a2.clone()], sigma.clone()).unwrap();
        let cov = model_covariances(&model, 6).unwrap();
        for q in [2, 3, 6] {
            let r = restricted_model(&cov, &[0, 1, 2], q).unwrap();
            assert!((r.residual_cov.clone() - &sigma).amax() < 1e-8, "q = {q}");
        }
        let r = restricted_model(&cov, &[0, 1, 2], 2).unwrap();
        assert!((&r.coeffs[0] - a1).amax() < 1e-8);
        assert!((&r.coeffs[1] - a2).amax() < 1e-8);
    }

    #[test]
    fn lagged_copy_residuals() {
        let c = 0.7;
        let cov = model_covariances(&lagged_copy(c), 20).unwrap();
        let ry = restricted_residual_cov(&cov, &[1], 20).unwrap();
        assert_abs_diff_eq!(ry[(0, 0)], 1.0 + c * c, epsilon = 1e-10);
        let rw = restricted_residual_cov(&cov, &[0, 1], 20).unwrap();
        assert!((rw - DMatrix::identity(2, 2)).amax() < 1e-8);
    }

    #[test]
    fn entropy_rate_closed_forms() {
        let h1 = 0.5 * (2.0 * PI * E).ln();
        assert_abs_diff_eq!(
            entropy_rate(&DMatrix::identity(1, 1)).unwrap(),
            h1,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            entropy_rate(&DMatrix::from_element(1, 1, E * E)).unwrap(),
            h1 + 1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            entropy_rate(&DMatrix::identity(2, 2)).unwrap(),
            2.0 * h1,
            epsilon = 1e-14
        );
        assert!(entropy_rate(&DMatrix::zeros(1, 1)).is_err());
    }

    #[test]
    fn mir_of_lagged_copy() {
        for c in [0.5, 1.0] {
            let v = mir(&lagged_copy(c), 0, 1, 20).unwrap();
            assert_abs_diff_eq!(v, 0.5 * (1.0 + c * c).ln(), epsilon = 1e-6);
            assert_eq!(v, mir(&lagged_copy(c), 1, 0, 20).unwrap());
        }
    }

    #[test]
    fn decoupled_channels_have_zero_mir() {
        let a1 = DMatrix::from_row_slice(3, 3, &[0.5, 0.2, 0.0, -0.3, 0.4, 0.0, 0.0, 0.0, 0.8]);
        let model = VarModel::new(vec![a1], DMatrix::identity(3, 3)).unwrap();
        assert!(mir(&model, 0, 2, 20).unwrap() < 1e-6);
        assert!(mir(&model, 1, 2, 20).unwrap() < 1e-6);
        // Z = {2} decoupled from {0, 1}: cmir = mir
        let a = mir(&model, 0, 1, 20).unwrap();
        let b = cmir(&model, 0, 1, &[2], 20).unwrap();
        assert!(a > 0.01);
        assert_abs_diff_eq!(a, b, epsilon = 1e-6);
    }

    #[test]
    fn cmir_checks_arguments() {
        let model = lagged_copy(0.5);
        assert!(matches!(
            cmir(&model, 0, 0, &[], 5),
            Err(Error::SameChannel(0, 0))
        ));
        assert!(matches!(
            cmir(&model, 0, 1, &[1], 5),
            Err(Error::OverlappingChannels(1))
        ));
        assert_eq!(
            cmir(&model, 0, 1, &[], 5).unwrap(),
            mir(&model, 0, 1, 5).unwrap()
        );
    }

    #[test]
    fn singular_toeplitz_is_reported() {
        let g0 = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let cov = CovSequence::new(vec![g0, DMatrix::zeros(2, 2)]).unwrap();
        assert!(matches!(
            restricted_model(&cov, &[0, 1], 1),
            Err(Error::SingularToeplitz { .. })
        ));
    }
}
