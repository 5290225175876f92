use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::{CryptoError, PrgStream};

/// Largest domain for the exact table backend (2^20 entries).
pub const TABLE_DOMAIN_LIMIT: usize = 20;
/// Largest domain for the Feistel backend.
pub const FEISTEL_DOMAIN_LIMIT: usize = 62;
const MIN_FEISTEL_ROUNDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrpBackend {
    Table,
    Feistel { rounds: usize },
}

#[derive(Debug, Clone)]
enum Backend {
    Table { forward: Vec<u32>, inverse: Vec<u32> },
    Feistel { rounds: usize },
}

/// A keyed invertible permutation on `{0,1}^m`.
///
/// The table backend materializes a Fisher-Yates permutation from the PRG
/// stream (exact, exhaustively checkable, `m <= 20`). The Feistel backend
/// is a balanced 4+-round network with a SHA-256 round function and
/// cycle-walking for odd widths.
#[derive(Debug, Clone)]
pub struct PrpInstance {
    domain_bits: usize,
    key: Vec<u8>,
    backend: Backend,
}

impl PrpInstance {
    pub fn new_table(domain_bits: usize, key: &[u8]) -> Result<Self> {
        if domain_bits == 0 || domain_bits > TABLE_DOMAIN_LIMIT {
            return Err(CryptoError::DomainTooLarge {
                bits: domain_bits,
                limit: TABLE_DOMAIN_LIMIT,
            });
        }
        let size = 1usize << domain_bits;
        let mut seed = b"prp-table/v1".to_vec();
        seed.push(domain_bits as u8);
        seed.extend_from_slice(key);
        let mut stream = PrgStream::new(seed);
        let mut forward: Vec<u32> = (0..size as u32).collect();
        for i in (1..size).rev() {
            let j = stream.next_below(i as u64 + 1) as usize;
            forward.swap(i, j);
        }
        let mut inverse = vec![0u32; size];
        let mut seen = vec![false; size];
        for (x, &y) in forward.iter().enumerate() {
            inverse[y as usize] = x as u32;
            seen[y as usize] = true;
        }
        debug_assert!(seen.iter().all(|&s| s), "table permutation not bijective");
        Ok(PrpInstance {
            domain_bits,
            key: key.to_vec(),
            backend: Backend::Table { forward, inverse },
        })
    }

    pub fn new_feistel(domain_bits: usize, key: &[u8], rounds: usize) -> Result<Self> {
        if domain_bits < 2 || domain_bits > FEISTEL_DOMAIN_LIMIT {
            return Err(CryptoError::DomainTooLarge {
                bits: domain_bits,
                limit: FEISTEL_DOMAIN_LIMIT,
            });
        }
        if rounds < MIN_FEISTEL_ROUNDS {
            return Err(CryptoError::BadParameters(format!(
                "feistel needs at least {MIN_FEISTEL_ROUNDS} rounds, got {rounds}"
            )));
        }
        Ok(PrpInstance {
            domain_bits,
            key: key.to_vec(),
            backend: Backend::Feistel { rounds },
        })
    }

    /// Table backend when it fits, Feistel otherwise.
    pub fn new(domain_bits: usize, key: &[u8]) -> Result<Self> {
        if domain_bits <= TABLE_DOMAIN_LIMIT {
            Self::new_table(domain_bits, key)
        } else {
            Self::new_feistel(domain_bits, key, MIN_FEISTEL_ROUNDS)
        }
    }

    pub fn domain_bits(&self) -> usize {
        self.domain_bits
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn backend(&self) -> PrpBackend {
        match &self.backend {
            Backend::Table { .. } => PrpBackend::Table,
            Backend::Feistel { rounds } => PrpBackend::Feistel { rounds: *rounds },
        }
    }

    fn check_range(&self, value: u64) -> Result<()> {
        if value >= (1u64 << self.domain_bits) {
            return Err(CryptoError::InputOutOfRange {
                value,
                bits: self.domain_bits,
            });
        }
        Ok(())
    }

    pub fn forward(&self, x: u64) -> Result<u64> {
        self.check_range(x)?;
        Ok(match &self.backend {
            Backend::Table { forward, .. } => forward[x as usize] as u64,
            Backend::Feistel { rounds } => self.walk(x, *rounds, false),
        })
    }

    pub fn inverse(&self, y: u64) -> Result<u64> {
        self.check_range(y)?;
        Ok(match &self.backend {
            Backend::Table { inverse, .. } => inverse[y as usize] as u64,
            Backend::Feistel { rounds } => self.walk(y, *rounds, true),
        })
    }

    fn round_fn(&self, round: usize, r: u64, mask: u64) -> u64 {
        let mut hasher = Sha256::new();
        hasher.update(b"feistel/v1");
        hasher.update(&self.key);
        hasher.update([round as u8]);
        hasher.update(r.to_be_bytes());
        let digest = hasher.finalize();
        u64::from_be_bytes(digest[..8].try_into().unwrap()) & mask
    }

    fn walk(&self, x: u64, rounds: usize, invert: bool) -> u64 {
        // Balanced network on 2*half bits; cycle-walk back into the domain.
        let half = self.domain_bits.div_ceil(2);
        let mask = (1u64 << half) - 1;
        let limit = 1u64 << self.domain_bits;
        let mut v = x;
        loop {
            let (mut l, mut r) = (v >> half, v & mask);
            if !invert {
                for i in 0..rounds {
                    let (nl, nr) = (r, l ^ self.round_fn(i, r, mask));
                    l = nl;
                    r = nr;
                }
            } else {
                for i in (0..rounds).rev() {
                    let (nl, nr) = (r ^ self.round_fn(i, l, mask), l);
                    l = nl;
                    r = nr;
                }
            }
            v = (l << half) | r;
            if v < limit {
                return v;
            }
        }
    }
}
