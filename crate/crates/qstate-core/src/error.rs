use thiserror::Error;

use crate::Side;

/// Errors raised by state construction and manipulation.
#[derive(Debug, Error)]
pub enum StateError {
    #[error("qubit budget exceeded: {requested} qubits requested, limit is {limit}")]
    BudgetExceeded { requested: usize, limit: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("qubit index {index} out of range on side {side} (width {width})")]
    QubitOutOfRange {
        side: Side,
        index: usize,
        width: usize,
    },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("bit mask {mask:#x} does not fit in {width} bits")]
    MaskTooWide { mask: u64, width: usize },

    #[error("discarded register carries weight {weight:.3e} away from |0…0⟩")]
    DiscardNotZero { weight: f64 },

    #[error("projection outcome has zero probability")]
    ZeroProbabilityOutcome,

    #[error("malformed serialized state: {0}")]
    Serialization(String),
}

pub(crate) type Result<T> = std::result::Result<T, StateError>;
