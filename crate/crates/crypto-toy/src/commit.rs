use std::sync::OnceLock;

use crate::error::Result;
use crate::{CryptoError, PrpInstance};

/// Randomness width of the toy commitment (value width is one more bit).
pub const COMMIT_RANDOMNESS_BITS: usize = 15;

const COMMIT_KEY: &[u8] = b"commit/v1";

fn table() -> &'static PrpInstance {
    static TABLE: OnceLock<PrpInstance> = OnceLock::new();
    TABLE.get_or_init(|| {
        PrpInstance::new_table(COMMIT_RANDOMNESS_BITS + 1, COMMIT_KEY)
            .expect("fixed-size commitment table")
    })
}

/// A commitment to one bit: the opening `(bit, randomness)` and the
/// committed value. Binding is exact because the value is a fixed-key
/// permutation of `randomness || bit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Commitment {
    pub bit: bool,
    pub randomness: u16,
    pub value: u16,
}

pub fn commit_bit(bit: bool, randomness: u16) -> Result<Commitment> {
    if randomness >= 1 << COMMIT_RANDOMNESS_BITS {
        return Err(CryptoError::InputOutOfRange {
            value: randomness as u64,
            bits: COMMIT_RANDOMNESS_BITS,
        });
    }
    let payload = ((randomness as u64) << 1) | bit as u64;
    let value = table().forward(payload).expect("payload in range") as u16;
    Ok(Commitment {
        bit,
        randomness,
        value,
    })
}

/// Invert the commitment permutation and return the committed bit.
pub fn extract_bit(value: u16) -> bool {
    table().inverse(value as u64).expect("value in range") & 1 == 1
}
