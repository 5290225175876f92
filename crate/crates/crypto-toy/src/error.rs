use thiserror::Error;

#[derive(Debug, Error)]
pub enum CryptoError {
    #[error("domain of {bits} bits exceeds the {limit}-bit limit for this backend")]
    DomainTooLarge { bits: usize, limit: usize },

    #[error("input {value:#x} does not fit in {bits} bits")]
    InputOutOfRange { value: u64, bits: usize },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error(transparent)]
    State(#[from] qstate_core::StateError),

    #[error("commitment registers carry non-classical weight {weight:.3e}")]
    NonClassicalCommitments { weight: f64 },

    #[error("malformed oracle dump: {0}")]
    Dump(String),
}

pub(crate) type Result<T> = std::result::Result<T, CryptoError>;
