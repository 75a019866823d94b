//! Linear-Gaussian analysis of multivariate time series: VAR identification,
//! model-implied autocovariances, restricted-model residual covariances,
//! entropy rates and (conditional) mutual information rates.

mod covariance;
mod fit;
mod model;
mod restricted;
mod series;

pub use covariance::{model_covariances, solve_discrete_lyapunov, yule_walker_rhs, CovSequence};
pub use fit::{fit_var, fit_var_order, VarFit};
pub use model::VarModel;
pub use restricted::{
    cmir, entropy_rate, mir, restricted_model, restricted_residual_cov, GaussianInfo,
    RestrictedModel, DEFAULT_RESTRICTED_ORDER,
};
pub use series::SeriesDataset;
