//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LmgError {
    /// Constructor input outside its documented range (negative rates, non-half-integer spin, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Mathematical domain violation (special-function argument, energy outside [eps_g, 1], T = 0).
    #[error("domain error: {0}")]
    Domain(String),

    /// Positivity repair is undefined when kappa_xx = 0 (zero-temperature bath).
    #[error("degenerate temperature: kappa_xx = 0, positivity repair undefined")]
    DegenerateTemperature,

    /// An API precondition documented on the call was not met.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Problem size beyond the configured desk-scale cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Numerical failure (integrator step underflow, eigensolver non-convergence, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Least-squares tail fit rejected; the series is not in its exponential regime.
    #[error("fit quality too poor: R^2 = {r_squared:.6} < required {required:.6}")]
    FitQuality { r_squared: f64, required: f64 },

    #[error("linear algebra backend: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}

pub type Result<T> = std::result::Result<T, LmgError>;
