use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::symmetrize;
use crate::var::VarModel;

const LYAPUNOV_TOL: f64 = 1e-12;
const LYAPUNOV_MAX_DOUBLINGS: usize = 64;

/// Autocovariances `Gamma_k = E[S_n S_{n-k}^T]` for `k = 0..=q`;
/// negative lags follow from `Gamma_{-k} = Gamma_k^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovSequence {
    lags: Vec<DMatrix<f64>>,
}

impl CovSequence {
    pub fn new(lags: Vec<DMatrix<f64>>) -> Result<Self> {
        let Some(g0) = lags.first() else {
            return Err(Error::InvalidInput(
                "covariance sequence needs Gamma_0".into(),
            ));
        };
        let m = g0.nrows();
        if lags.iter().any(|g| g.nrows() != m || g.ncols() != m) {
            return Err(Error::InvalidInput(
                "covariance lags differ in shape".into(),
            ));
        }
        Ok(Self { lags })
    }

    pub fn dim(&self) -> usize {
        self.lags[0].nrows()
    }

    /// Largest stored lag.
    pub fn max_lag(&self) -> usize {
        self.lags.len() - 1
    }

    /// `Gamma_k` for `k >= 0`.
    pub fn lag(&self, k: usize) -> &DMatrix<f64> {
        &self.lags[k]
    }

    /// `Gamma_k` for any signed `k` within range.
    pub fn signed_lag(&self, k: isize) -> DMatrix<f64> {
        if k >= 0 {
            self.lags[k as usize].clone()
        } else {
            self.lags[(-k) as usize].transpose()
        }
    }

    pub fn lags(&self) -> &[DMatrix<f64>] {
        &self.lags
    }
}

/// Solves `X = A X A^T + Q` by doubling: `X <- X + A_k X A_k^T`,
/// `A_k <- A_k^2`, until the largest increment falls below 1e-12.
///
/// Requires the spectral radius of `a` to be below one.
pub fn solve_discrete_lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let mut x = q.clone();
    let mut ak = a.clone();
    for _ in 0..LYAPUNOV_MAX_DOUBLINGS {
        let inc = &ak * &x * ak.transpose();
        let step = inc.amax();
        if !step.is_finite() {
            break;
        }
        x += inc;
        if step <= LYAPUNOV_TOL {
            return Ok(symmetrize(&x));
        }
        ak = &ak * &ak;
    }
    Err(Error::LyapunovNoConvergence {
        iterations: LYAPUNOV_MAX_DOUBLINGS,
    })
}

/// Autocovariance sequence `Gamma_0..Gamma_q` implied by a stationary VAR.
///
/// `Gamma_0..Gamma_{p-1}` come from the companion-form Lyapunov equation;
/// higher lags follow `Gamma_k = sum_j A_j Gamma_{k-j}`.
pub fn model_covariances(model: &VarModel, q: usize) -> Result<CovSequence> {
    let m = model.dim();
    let p = model.order();
    if q < p {
        return Err(Error::InvalidInput(format!(
            "covariance horizon q = {q} is below model order p = {p}"
        )));
    }
    let radius = model.spectral_radius();
    if radius >= 1.0 {
        return Err(Error::NonStationary { radius });
    }
    let companion = model.companion();
    let mut noise = DMatrix::zeros(m * p, m * p);
    noise.view_mut((0, 0), (m, m)).copy_from(model.sigma_u());
    let psi = solve_discrete_lyapunov(&companion, &noise)?;

    let mut lags: Vec<DMatrix<f64>> = Vec::with_capacity(q + 1);
    for k in 0..p {
        lags.push(psi.view((0, k * m), (m, m)).into_owned());
    }
    for k in p..=q {
        let mut g = DMatrix::zeros(m, m);
        for (j, a) in model.coeffs().iter().enumerate() {
            // Gamma_{k-j-1}, always a non-negative lag here
            g += a * &lags[k - j - 1];
        }
        lags.push(g);
    }
    CovSequence::new(lags)
}

/// Evaluates `sum_j A_j Gamma_{k-j}` for `k >= 1`, using transposes for
/// negative lags. The Yule-Walker relation says this equals `Gamma_k`.
pub fn yule_walker_rhs(model: &VarModel, cov: &CovSequence, k: usize) -> DMatrix<f64> {
    let m = model.dim();
    let mut g = DMatrix::zeros(m, m);
    for (j, a) in model.coeffs().iter().enumerate() {
        g += a * cov.signed_lag(k as isize - j as isize - 1);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn scalar_ar1_closed_form() {
        let model = VarModel::new(
            vec![DMatrix::from_element(1, 1, 0.9)],
            DMatrix::identity(1, 1),
        )
        .unwrap();
        let cov = model_covariances(&model, 5).unwrap();
        let g0 = 1.0 / (1.0 - 0.81);
        assert_abs_diff_eq!(cov.lag(0)[(0, 0)], g0, epsilon = 1e-10);
        assert_abs_diff_eq!(cov.lag(1)[(0, 0)], 0.9 * g0, epsilon = 1e-10);
        assert_abs_diff_eq!(cov.lag(5)[(0, 0)], 0.9f64.powi(5) * g0, epsilon = 1e-10);
    }

    #[test]
    fn white_noise_covariances() {
        let model = VarModel::white_noise(DMatrix::identity(3, 3)).unwrap();
        let cov = model_covariances(&model, 4).unwrap();
        assert_abs_diff_eq!(cov.lag(0).clone(), DMatrix::identity(3, 3), epsilon = 1e-15);
        for k in 1..=4 {
            assert_eq!(cov.lag(k).amax(), 0.0);
        }
    }

    #[test]
    fn recursion_reproduces_lyapunov_lags() {
        let a1 = DMatrix::from_row_slice(3, 3, &[0.4, 0.1, 0.0, -0.2, 0.3, 0.2, 0.1, 0.0, 0.5]);
        let a2 = DMatrix::from_row_slice(3, 3, &[-0.2, 0.0, 0.1, 0.0, -0.1, 0.0, 0.05, 0.1, -0.2]);
        let a3 = DMatrix::from_row_slice(3, 3, &[0.1, 0.0, 0.0, 0.0, 0.05, 0.0, 0.0, 0.0, 0.1]);
        let sigma = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.1, 0.2, 1.5, -0.3, 0.1, -0.3, 0.8]);
        let model = VarModel::new(vec![a1, a2, a3], sigma).unwrap();
        let cov = model_covariances(&model, 8).unwrap();
        let g0 = cov.lag(0);
        assert!((g0 - g0.transpose()).amax() < 1e-12);
        assert!(g0.clone().cholesky().is_some());
        for k in 1..=8 {
            let diff = (yule_walker_rhs(&model, &cov, k) - cov.lag(k)).amax();
            assert!(diff < 1e-8, "lag {k}: {diff}");
        }
        // lag-0 equation: Gamma_0 = sum_j A_j Gamma_j^T + Sigma_U
        let mut rhs = model.sigma_u().clone();
        for (j, a) in model.coeffs().iter().enumerate() {
            rhs += a * cov.lag(j + 1).transpose();
        }
        assert!((rhs - g0).amax() < 1e-8);
    }

    #[test]
    fn rejects_nonstationary_model() {
        let model = VarModel::new(
            vec![DMatrix::from_element(1, 1, 1.01)],
            DMatrix::identity(1, 1),
        )
        .unwrap();
        assert!(matches!(
            model_covariances(&model, 3),
            Err(Error::NonStationary { .. })
        ));
    }

    #[test]
    fn rejects_short_horizon() {
        let model = VarModel::new(
            vec![DMatrix::zeros(1, 1), DMatrix::from_element(1, 1, 0.5)],
            DMatrix::identity(1, 1),
        )
        .unwrap();
        assert!(model_covariances(&model, 1).is_err());
    }
}
