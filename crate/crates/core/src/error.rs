use thiserror::Error;

/// Errors produced by matrix, circuit and transform construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("size {qubits} qubits exceeds the configured budget of {budget} qubits")]
    Size { qubits: usize, budget: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("operator is not of dyadic order {order} (deviation {deviation:.3e})")]
    NotDyadicOrder { order: usize, deviation: f64 },

    #[error("cannot export circuit: {0}")]
    Export(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
