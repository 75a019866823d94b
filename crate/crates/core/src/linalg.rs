//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{Cholesky, DMatrix, Dyn};

/// Relative pivot threshold below which a Gram/covariance matrix is treated
/// as singular.
const PIVOT_RTOL: f64 = 1e-13;

/// Cholesky factorization that also rejects numerically singular matrices:
/// every squared pivot must exceed `PIVOT_RTOL` times the largest diagonal.
pub(crate) fn cholesky_checked(m: DMatrix<f64>) -> Option<Cholesky<f64, Dyn>> {
    let scale = m.diagonal().iter().fold(0.0f64, |a, &d| a.max(d.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return None;
    }
    let chol = m.cholesky()?;
    let floor = PIVOT_RTOL * scale;
    if chol.l_dirty().diagonal().iter().all(|&d| d * d > floor) {
        Some(chol)
    } else {
        None
    }
}

/// `ln det` of a symmetric positive definite matrix via Cholesky.
pub(crate) fn ln_det_spd(m: &DMatrix<f64>) -> Option<f64> {
    let chol = m.clone().cholesky()?;
    Some(
        2.0 * chol
            .l_dirty()
            .diagonal()
            .iter()
            .map(|d| d.ln())
            .sum::<f64>(),
    )
}

pub(crate) fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Rows and columns of `m` selected by `idx`.
pub(crate) fn submatrix(m: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}
