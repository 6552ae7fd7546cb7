use thiserror::Error;

/// Errors for state construction, marginals, invariants, and optimization.
#[derive(Debug, Error)]
pub enum Error {
    #[error("amplitude vector has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("amplitude vector has zero norm")]
    ZeroVector,

    #[error("qubit position {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("duplicate qubit position {qubit}")]
    DuplicateQubit { qubit: usize },

    #[error("empty qubit selection")]
    EmptySelection,

    #[error("qubit count {n} outside supported range {min}..={max}")]
    QubitCountOutOfRange { n: usize, min: usize, max: usize },

    #[error("matrix dimension {actual}, expected {expected}")]
    WrongDimension { expected: usize, actual: usize },

    #[error("matrix not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace {trace:?} differs from 1")]
    TraceNotOne { trace: (f64, f64) },

    #[error("matrix not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps")]
    EigensolverNoConvergence { sweeps: usize },

    #[error("mixing matrix is not an isometry (Gram deviation {deviation:.3e})")]
    NotIsometry { deviation: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid state family parameters: {0}")]
    InvalidFamily(String),

    #[error("state norm {norm} outside the accepted window around 1")]
    NormalizationRejected { norm: f64 },

    #[error("state file schema violation: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
