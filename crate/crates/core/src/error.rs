use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the model construction and the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "steady-state denominator vanishes at delta_a = {delta_a}, delta_m = {delta_m}, \
         g_am = {g_am}"
    )]
    SingularDenominator {
        delta_a: f64,
        delta_m: f64,
        g_am: f64,
    },

    #[error("drift matrix is unstable (spectral abscissa {spectral_abscissa:e})")]
    Unstable { spectral_abscissa: f64 },

    #[error("drift matrix is marginally stable (spectral abscissa {spectral_abscissa:e})")]
    MarginallyStable { spectral_abscissa: f64 },

    #[error("{context}: matrix is singular")]
    SingularMatrix { context: &'static str },

    #[error("{context}: matrix is not positive definite")]
    NotPositiveDefinite { context: &'static str },

    #[error("{context}: matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric {
        context: &'static str,
        asymmetry: f64,
    },

    #[error("eigenvalue iteration did not converge within {max_iterations} iterations")]
    EigenvaluesNotConverged { max_iterations: usize },

    #[error("Lyapunov residual {residual:e} exceeds bound {bound:e}")]
    LyapunovResidual { residual: f64, bound: f64 },

    #[error("covariance lost positive definiteness at t = {time}")]
    IntegrationDiverged { time: f64 },

    #[error(
        "no steady state within {steps} integration steps \
         (spectral abscissa {spectral_abscissa:e})"
    )]
    NoConvergence {
        steps: usize,
        spectral_abscissa: f64,
    },
}
