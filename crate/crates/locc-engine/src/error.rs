use thiserror::Error;

use qstate_core::StateError;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    State(#[from] StateError),

    #[error("input partition ({in_a},{in_b}) does not match protocol ({p_a},{p_b})")]
    PartitionMismatch {
        in_a: usize,
        in_b: usize,
        p_a: usize,
        p_b: usize,
    },

    #[error("circuit width {width} does not match register width {expected}")]
    CircuitWidth { width: usize, expected: usize },

    #[error("unknown oracle handle '{0}'")]
    UnknownOracle(String),

    #[error("oracle '{handle}': gate spans {got} qubits, oracle is defined on {expected}")]
    OracleWidthMismatch {
        handle: String,
        got: usize,
        expected: usize,
    },

    #[error("oracle '{handle}' is a {kind} oracle, used by an incompatible gate")]
    OracleKindMismatch { handle: String, kind: &'static str },

    #[error("branch budget exceeded (more than {limit} branches)")]
    BranchBudget { limit: usize },

    #[error("protocol failed validation: {0}")]
    InvalidProtocol(String),

    #[error("classical bit index {bit} out of range (c = {c})")]
    ClassicalBitOutOfRange { bit: usize, c: usize },
}
