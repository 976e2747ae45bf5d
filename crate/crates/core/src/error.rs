use thiserror::Error;

/// Errors raised by circuit construction, decoding and experiment I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right} qubits")]
    LengthMismatch { left: usize, right: usize },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid code distance {0}: must be odd and at least 3")]
    InvalidDistance(usize),

    #[error("invalid probability {0}: must lie in [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("error mechanism {mechanism} flips {count} detectors of patch {patch}; graph is not matchable")]
    NotMatchable {
        mechanism: usize,
        patch: usize,
        count: usize,
    },

    #[error("decode failure: {0}")]
    DecodeFailure(String),

    #[error("circuit parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
