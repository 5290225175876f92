//! Deterministic, reproducible toy instantiations of the cryptographic
//! objects the constructions need: a SHA-256 counter-mode PRG, keyed
//! invertible permutations (table and Feistel backends), derived
//! shrink/blow functions, a lazily sampled random oracle with inversion,
//! bit commitments, and the pad-and-commit channel.
//!
//! Nothing here claims security at toy scale. The testable contracts are
//! correctness ones: bijectivity, exact invertibility, fiber regularity,
//! binding by injectivity, and channel round trips. Everything is
//! bit-exactly reproducible from seeds and keys; golden fixtures pin the
//! byte-level conventions.

mod commit;
mod error;
mod fgh;
mod nisbq;
mod prg;
mod prp;
mod ro;

pub use commit::{commit_bit, extract_bit, Commitment, COMMIT_RANDOMNESS_BITS};
pub use error::CryptoError;
pub use fgh::DerivedFunctions;
pub use nisbq::{NisbqChannel, NisbqMode};
pub use prg::{prg_bits, prg_bytes, PrgStream};
pub use prp::{PrpBackend, PrpInstance};
pub use ro::RandomOracle;
