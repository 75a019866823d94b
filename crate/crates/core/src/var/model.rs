use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::var::SeriesDataset;

/// Linear VAR(p) model `S_n = sum_k A_k S_{n-k} + U_n`, `cov(U) = sigma_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarModel {
    coeffs: Vec<DMatrix<f64>>,
    sigma_u: DMatrix<f64>,
}

impl VarModel {
    pub fn new(coeffs: Vec<DMatrix<f64>>, sigma_u: DMatrix<f64>) -> Result<Self> {
        let m = sigma_u.nrows();
        if m == 0 || sigma_u.ncols() != m {
            return Err(Error::InvalidInput(
                "innovation covariance must be square".into(),
            ));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("model order must be at least 1".into()));
        }
        if coeffs.iter().any(|a| a.nrows() != m || a.ncols() != m) {
            return Err(Error::InvalidInput(format!(
                "every coefficient matrix must be {m}x{m}"
            )));
        }
        let asym = (&sigma_u - sigma_u.transpose()).amax();
        if asym > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "innovation covariance is not symmetric (max deviation {asym:e})"
            )));
        }
        if sigma_u.clone().cholesky().is_none() {
            return Err(Error::NotPositiveDefinite("innovation covariance".into()));
        }
        Ok(Self { coeffs, sigma_u })
    }

    /// Zero-mean white noise with covariance `sigma_u` (order 1, `A_1 = 0`).
    pub fn white_noise(sigma_u: DMatrix<f64>) -> Result<Self> {
        let m = sigma_u.nrows();
        Self::new(vec![DMatrix::zeros(m, m)], sigma_u)
    }

    pub fn dim(&self) -> usize {
        self.sigma_u.nrows()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Lag matrices `A_1..A_p`.
    pub fn coeffs(&self) -> &[DMatrix<f64>] {
        &self.coeffs
    }

    pub fn sigma_u(&self) -> &DMatrix<f64> {
        &self.sigma_u
    }

    /// Companion matrix of size `Mp x Mp`.
    pub fn companion(&self) -> DMatrix<f64> {
        let m = self.dim();
        let p = self.order();
        let mut c = DMatrix::zeros(m * p, m * p);
        for (k, a) in self.coeffs.iter().enumerate() {
            c.view_mut((0, k * m), (m, m)).copy_from(a);
        }
        for k in 1..p {
            c.view_mut((k * m, (k - 1) * m), (m, m))
                .fill_with_identity();
        }
        c
    }

    pub fn spectral_radius(&self) -> f64 {
        self.companion()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_stationary(&self) -> bool {
        self.spectral_radius() < 1.0
    }

    /// Draws `n` samples after discarding `burn_in` transient samples,
    /// starting from zero initial conditions.
    pub fn simulate<R: Rng + ?Sized>(
        &self,
        n: usize,
        burn_in: usize,
        channel_names: Vec<String>,
        rng: &mut R,
    ) -> Result<SeriesDataset> {
        let m = self.dim();
        let p = self.order();
        let chol = self
            .sigma_u
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NotPositiveDefinite("innovation covariance".into()))?;
        let l = chol.l();
        let total = n + burn_in;
        // history[t] holds S_t; keep only the last p states in a ring
        let mut ring = vec![vec![0.0; m]; p];
        let mut head = 0usize;
        let mut columns = vec![Vec::with_capacity(n); m];
        let mut z = vec![0.0; m];
        let mut next = vec![0.0; m];
        for t in 0..total {
            for v in z.iter_mut() {
                *v = rng.sample(StandardNormal);
            }
            for (r, out) in next.iter_mut().enumerate() {
                let mut acc = 0.0;
                for c in 0..=r {
                    acc += l[(r, c)] * z[c];
                }
                *out = acc;
            }
            for (k, a) in self.coeffs.iter().enumerate() {
                // S_{t-k-1}
                let past = &ring[(head + p - k) % p];
                for r in 0..m {
                    let mut acc = 0.0;
                    for c in 0..m {
                        acc += a[(r, c)] * past[c];
                    }
                    next[r] += acc;
                }
            }
            head = (head + 1) % p;
            ring[head].copy_from_slice(&next);
            if t >= burn_in {
                for (col, &v) in columns.iter_mut().zip(&next) {
                    col.push(v);
                }
            }
        }
        SeriesDataset::new(columns, channel_names)
    }
}
