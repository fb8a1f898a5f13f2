use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("degenerate pattern: {0}")]
    DegeneratePattern(String),

    #[error("insufficient control qubits: need at least {needed}, have {have}")]
    InsufficientControls { needed: usize, have: usize },

    #[error("invalid subspace vector: {0}")]
    InvalidSubspaceVector(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("qubit index {index} out of range for a {len}-qubit register")]
    QubitOutOfRange { index: usize, len: usize },

    #[error("register of {requested} qubits exceeds the cap of {cap}")]
    ResourceCap { requested: usize, cap: usize },

    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("measurement branch has zero probability")]
    ZeroProbabilityBranch,

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NonUnitary(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
