use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polynomial order {0} (supported: 1..=20)")]
    InvalidOrder(usize),

    #[error("invalid quadrature size {0}")]
    InvalidQuadrature(usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("inadmissible Euler state: {0}")]
    Inadmissible(String),

    #[error("Krylov iteration did not converge (last error estimate {estimate:.3e} after {substeps} substeps)")]
    KrylovDivergence { estimate: f64, substeps: usize },

    #[error("matrix exponential overflow (norm {0:.3e})")]
    Overflow(f64),

    #[error("solution blew up at step {step} (t = {time})")]
    BlowUp { step: usize, time: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("reference metadata mismatch: {0}")]
    ReferenceMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
