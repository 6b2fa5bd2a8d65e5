use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("site index {site} out of range for {n_qubits} qubits")]
    SiteOutOfRange { site: usize, n_qubits: usize },

    #[error("site {site} appears more than once in a term")]
    DuplicateSite { site: usize },

    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{what} requires at most {cap} qubits, got {n_qubits}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        n_qubits: usize,
    },

    #[error("seed set is empty")]
    EmptySeeds,

    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("the identity string has no k-finite layer")]
    IdentityMember,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integration unstable: {0}")]
    Unstable(String),

    /// A structural guarantee of the algebra was violated. These indicate
    /// a bug or an input that is not a fixpoint of its generation rule.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for command-line front ends.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Inconsistency(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            column,
            message: message.into(),
        }
    }
}
