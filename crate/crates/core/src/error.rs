use thiserror::Error;

/// Errors raised by state arithmetic, resources, protocols and the harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("wire {wire} out of range for a {num_qubits}-qubit register")]
    WireOutOfRange { wire: usize, num_qubits: usize },

    #[error("wire {0} listed more than once")]
    DuplicateWire(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("register of {0} qubits exceeds the supported maximum of 8")]
    RegisterTooLarge(usize),

    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("Kraus operators do not form a trace-preserving channel: {0}")]
    InvalidChannel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unitary is not a member of group {0}")]
    NotInGroup(String),

    #[error("oracle already queried: simulators get a single query per session")]
    OracleExhausted,

    #[error("cannot compose: {0}")]
    Composition(String),

    #[error("verification failed for strategy {strategy}: advantage {advantage:.3e} exceeds {threshold:.3e}")]
    VerificationFailure {
        strategy: String,
        advantage: f64,
        threshold: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
