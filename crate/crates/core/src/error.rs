use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("binomial coefficient C({n},{m}) overflows the exact integer range")]
    BinomialOverflow { n: usize, m: usize },

    #[error("Dicke index alpha={alpha} out of range for {n_qubits} qubits")]
    DickeIndex { alpha: usize, n_qubits: usize },

    #[error("full-space Dicke vector requested for {n_qubits} qubits (limit {limit})")]
    OracleTooLarge { n_qubits: usize, limit: usize },

    #[error("bipartition k={k} invalid for {n_qubits} qubits (need 1 <= k <= {max})")]
    Bipartition {
        k: usize,
        n_qubits: usize,
        max: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("eigensolver failed to converge on bipartition k={k}")]
    Eigensolver { k: usize },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("least-squares fit underdetermined: {points} points for {params} parameters")]
    Underdetermined { points: usize, params: usize },

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
