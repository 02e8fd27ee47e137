use thiserror::Error;

#[derive(Debug, Error)]
pub enum QdcError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("qubit {0} out of range for {1} qubits")]
    QubitOutOfRange(usize, usize),
    #[error("Pauli {0} is not Hermitian")]
    NonHermitian(String),
    #[error("gate {0} is not Clifford")]
    NonClifford(String),
    #[error("unsupported instruction: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("qubit {0} has no grid placement")]
    Unplaced(usize),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("simulation: {0}")]
    Simulation(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, QdcError>;
