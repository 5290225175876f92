//! LOCC protocols as executable objects.
//!
//! A protocol is the standard two-party shape: registers `A`/`B` carry the
//! input, ancilla registers `A'`/`B'` start in `|0⟩`, and a `c`-bit
//! communication register `C` starts at zero. Each round applies a local
//! circuit on `(A, A', C)`, measures `C` in the computational basis, applies
//! a local circuit on `(B, B', C)`, and measures `C` again. After the last
//! round the first `m_a` qubits of `(A, A')` and the first `m_b` qubits of
//! `(B, B')` are the output; everything else is traced out (or, on request,
//! projected onto `|0…0⟩` with a loud failure if that projection loses
//! weight).
//!
//! Execution comes in two flavors: a seeded Monte-Carlo trajectory
//! ([`execute_sampled`]) and exhaustive branching over measurement outcomes
//! with exact probabilities ([`execute_branches`]). Oracle gates resolve
//! named reversible functions against an immutable [`OracleRegistry`]
//! snapshot, so both modes are pure functions of their arguments.
//!
//! Costs follow the circuit-description convention: every gate counts one,
//! plus one per ancilla qubit created and one per measured communication
//! bit per round.

mod circuit;
mod error;
mod exec;
mod format;
mod gate;
mod oracle;
mod protocol;
mod random;

pub use circuit::LocalCircuit;
pub use error::EngineError;
pub use exec::{
    channel_output, execute_branches, execute_sampled, Branch, OutputMode, OutputState,
    ProtocolInput, RoundTranscript, SampledRun, Transcript, BRANCH_BUDGET,
};
pub use format::{parse_protocol, serialize_protocol, ParseError};
pub use gate::{Gate, Span};
pub use oracle::{OracleEntry, OracleRegistry};
pub use protocol::{
    teleportation_protocol, LoccProtocol, ProtocolCost, Round, Violation,
};
pub use random::{random_protocol, RandomProtocolConfig};
