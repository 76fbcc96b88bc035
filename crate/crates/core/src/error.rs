use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("unphysical state: minimum eigenvalue {min_eigenvalue:.3e}")]
    UnphysicalState { min_eigenvalue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("complete positivity violated: Kossakowski matrix has eigenvalue {min_eigenvalue:.3e}")]
    CompletePositivity { min_eigenvalue: f64 },

    #[error("reduced and full dynamics disagree: residual {residual:.3e}")]
    ModelInconsistency { residual: f64 },

    #[error("integration diverged at step {step} (tau = {tau:.6}): {reason}")]
    IntegrationDiverged { step: usize, tau: f64, reason: String },

    #[error("Liouvillian has an empty kernel (smallest singular value {smallest:.3e})")]
    NoSteadyState { smallest: f64 },

    #[error("no localized phase: 1 - f at zero acceleration is {min_gap:.6e}, threshold {epsilon_loc:.6e}")]
    NoLocalizedPhase { min_gap: f64, epsilon_loc: f64 },

    #[error("correlation oracle failed: {0}")]
    OracleFailure(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
