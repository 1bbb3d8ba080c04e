use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("gate {kind} expects {expected} qubit(s), got {got}")]
    GateArity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("gate {kind} acts on qubit {qubit} twice")]
    RepeatedQubit { kind: &'static str, qubit: usize },

    #[error("rotation gate {kind} has no parameter slot")]
    MissingParamSlot { kind: &'static str },

    #[error("gate {kind} does not take a parameter")]
    UnexpectedParamSlot { kind: &'static str },

    #[error("parameter slot {slot} out of range for {len} parameters")]
    MissingParameter { slot: usize, len: usize },

    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },

    #[error("invalid Pauli character {0:?}")]
    InvalidPauli(char),

    #[error("operator acts on {operator} qubits but the state has {state}")]
    QubitCountMismatch { operator: usize, state: usize },

    #[error("register of {0} qubits is too large for dense simulation")]
    TooManyQubits(usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("matrix is not Hermitian (residue {0:e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("unknown ansatz template {0} (expected 1-4)")]
    UnknownTemplate(u8),

    #[error("no Hamiltonian for bond length {0} Å")]
    MissingBond(f64),

    #[error("output directory {0} already holds results; pass overwrite to replace them")]
    OutputExists(PathBuf),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NoConvergence { .. })
    }
}
