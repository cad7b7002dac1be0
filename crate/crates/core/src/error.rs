use thiserror::Error;

use crate::cycle::StrokeLedger;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("negative dissipator rate {0}")]
    NegativeRate(f64),

    #[error("frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),

    #[error("spectral response is undefined at zero frequency")]
    ZeroFrequency,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("state is not diagonal in the current frame (largest coherence {0:e})")]
    NotDiagonal(f64),

    #[error("no limit cycle after {iterations} iterations")]
    NonConvergence {
        iterations: usize,
        last_ledger: StrokeLedger,
    },

    #[error("ledger entry below 1e-14, convergence criterion undefined")]
    DegenerateLedger { iterations: usize, ledger: StrokeLedger },

    #[error("model {0} cannot operate without coupling (g = 0)")]
    NonOperational(&'static str),

    #[error("no engine-classified point on the scan")]
    NoEnginePoint,

    #[error("grid has {points} points, budget is {budget}")]
    GridTooLarge { points: usize, budget: usize },

    #[error("need at least 3 records for a fit, got {0}")]
    TooFewRecords(usize),
}

// Errors carry floats, so compare by rendered message.
impl PartialEq for Error {
    fn eq(&self, other: &Self) -> bool {
        self.to_string() == other.to_string()
    }
}
