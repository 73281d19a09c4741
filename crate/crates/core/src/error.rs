use thiserror::Error;

/// Errors produced by the numerical routines.
///
/// Validation errors (bad parameters) are kept separate from numerical
/// failures so that the command-line front end can map them to distinct
/// exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("operation requires a {expected}D state, got {got}D")]
    Dimension { expected: usize, got: usize },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time {t} outside control horizon [0, {horizon}]")]
    OutsideHorizon { t: f64, horizon: f64 },

    #[error("krylov solver did not converge in {iterations} iterations (relative residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("observability numerically void: lambda_min = {lambda_min:.3e} below floor {floor:.1e}")]
    Unobservable { lambda_min: f64, floor: f64 },

    #[error("resolvent estimate infeasible at lambda = {lambda}: m = {m} too small on ker(Delta - lambda)")]
    Infeasible { lambda: f64, m: f64 },

    #[error("time {t} is not beyond the Miller time {miller_time}")]
    BelowMillerTime { t: f64, miller_time: f64 },

    #[error("non-positive mass in decay record tail")]
    NonPositiveMass,

    #[error("not enough samples for a decay fit: need {needed}, have {have}")]
    TooFewSamples { needed: usize, have: usize },

    #[error("fixed-point iteration diverged (data too large): contraction ratio {ratio:.3}")]
    DataTooLarge { ratio: f64 },

    #[error("fixed-point iteration did not converge in {iterations} iterations (last ratio {ratio:.3})")]
    FixedPointStalled { iterations: usize, ratio: f64 },

    #[error("forward certification failed: residual {residual:.3e} exceeds {bound:.3e}")]
    CertificationFailed { residual: f64, bound: f64 },

    #[error("stabilization stalled at t = {t}: {reason}")]
    StabilizationStall { t: f64, reason: String },

    #[error("eigen-decomposition failed: {0}")]
    Eigen(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    /// True for errors caused by bad input rather than numerical breakdown.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidGrid(_)
                | Error::GridMismatch(_)
                | Error::Dimension { .. }
                | Error::InvalidWindow(_)
                | Error::InvalidParameter(_)
                | Error::OutsideHorizon { .. }
                | Error::BelowMillerTime { .. }
        )
    }

    /// Short machine-readable tag used in JSON error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "invalid_grid",
            Error::GridMismatch(_) => "grid_mismatch",
            Error::Dimension { .. } => "dimension",
            Error::InvalidWindow(_) => "invalid_window",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::OutsideHorizon { .. } => "outside_horizon",
            Error::NoConvergence { .. } => "no_convergence",
            Error::Unobservable { .. } => "unobservable",
            Error::Infeasible { .. } => "infeasible",
            Error::BelowMillerTime { .. } => "below_miller_time",
            Error::NonPositiveMass => "non_positive_mass",
            Error::TooFewSamples { .. } => "too_few_samples",
            Error::DataTooLarge { .. } => "data_too_large",
            Error::FixedPointStalled { .. } => "fixed_point_stalled",
            Error::CertificationFailed { .. } => "certification_failed",
            Error::StabilizationStall { .. } => "stabilization_stall",
            Error::Eigen(_) => "eigen",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
