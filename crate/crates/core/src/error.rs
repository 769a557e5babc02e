use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("repeated qubit index {0} in two-qubit gate")]
    RepeatedQubit(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid outcome pattern `{0}`: expected a string over {{0,1,*}}")]
    Pattern(String),

    #[error("{qubits} qubits exceeds the oracle limit of {limit}")]
    OracleLimit { qubits: usize, limit: usize },

    #[error("{columns} columns exceeds the weight-enumerator limit of {limit}")]
    EnumerationLimit { columns: usize, limit: usize },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
