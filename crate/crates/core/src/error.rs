use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid subsystem index set {indices:?} for {n} subsystems")]
    InvalidIndex { indices: Vec<usize>, n: usize },

    #[error("operator is not Hermitian (max |A - A†| = {0:.3e})")]
    NotHermitian(f64),

    #[error("expected a bipartite state, got {0} subsystems")]
    NotBipartite(usize),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid bath: {0}")]
    InvalidBath(String),

    #[error("nonzero detuning {0} on subsystem; only resonant coupling is supported")]
    Detuning(f64),

    #[error("the diagonal form requires a pure bath; route mixed baths through the nondiagonal form")]
    MixedBath,

    #[error("dissipator coefficient matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotCompletelyPositive(f64),

    #[error("trace drift {drift:.3e} at t = {time}; step too large")]
    TraceDrift { drift: f64, time: f64 },

    #[error("step {dt} exceeds the stability bound {bound:.3e}")]
    StepTooLarge { dt: f64, bound: f64 },

    #[error("eigensolver failed: {0}")]
    Eigen(String),

    #[error("jump operator is not linear in the mode operators (residual {0:.3e})")]
    NonlinearJump(f64),

    #[error("uncertainty relation violated (min eigenvalue of Σ + iΩ/2 is {0:.3e})")]
    Uncertainty(f64),

    #[error("Gaussian fidelity needs zero means and at least one pure state")]
    FidelityPrecondition,

    #[error("Fock truncation too small: top-level population {0:.3e}")]
    Truncation(f64),

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("config parse error: {0}")]
    Schema(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }

    /// Process exit code used by the command-line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Schema(_) | Error::Io(_) => 2,
            _ => 3,
        }
    }
}
