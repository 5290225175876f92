use std::collections::BTreeMap;

use crate::error::Result;
use crate::{CryptoError, PrgStream};

const LAZY_DOMAIN_LIMIT: usize = 20;

/// A lazily sampled random oracle `{0,1}^in_bits -> {0,1}^out_bits` with an
/// inversion oracle.
///
/// Repeated queries are consistent; the reverse table records the first
/// sampled preimage of each image point, so the inversion oracle returns
/// *a* valid preimage whenever one has been sampled and `None` otherwise
/// (it never samples fresh preimages).
///
/// The tables are interior state: either confine an instance to one worker
/// or call [`populate_all`](Self::populate_all) once and share read-only.
#[derive(Debug, Clone)]
pub struct RandomOracle {
    in_bits: usize,
    out_bits: usize,
    seed: Vec<u8>,
    forward: BTreeMap<u64, u64>,
    reverse: BTreeMap<u64, u64>,
}

impl RandomOracle {
    pub fn new(in_bits: usize, out_bits: usize, seed: &[u8]) -> Result<Self> {
        if in_bits == 0 || in_bits > LAZY_DOMAIN_LIMIT {
            return Err(CryptoError::DomainTooLarge {
                bits: in_bits,
                limit: LAZY_DOMAIN_LIMIT,
            });
        }
        if out_bits == 0 || out_bits > 62 {
            return Err(CryptoError::DomainTooLarge {
                bits: out_bits,
                limit: 62,
            });
        }
        Ok(RandomOracle {
            in_bits,
            out_bits,
            seed: seed.to_vec(),
            forward: BTreeMap::new(),
            reverse: BTreeMap::new(),
        })
    }

    pub fn in_bits(&self) -> usize {
        self.in_bits
    }

    pub fn out_bits(&self) -> usize {
        self.out_bits
    }

    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    fn sample(&self, x: u64) -> u64 {
        let mut seed = b"ro/v1".to_vec();
        seed.extend_from_slice(&self.seed);
        seed.extend_from_slice(&x.to_be_bytes());
        PrgStream::new(seed).next_bits(self.out_bits)
    }

    pub fn query(&mut self, x: u64) -> Result<u64> {
        if x >= (1u64 << self.in_bits) {
            return Err(CryptoError::InputOutOfRange {
                value: x,
                bits: self.in_bits,
            });
        }
        if let Some(&y) = self.forward.get(&x) {
            return Ok(y);
        }
        let y = self.sample(x);
        self.forward.insert(x, y);
        self.reverse.entry(y).or_insert(x);
        Ok(y)
    }

    /// A recorded preimage of `y`, or `None` if `y` has never been sampled.
    pub fn inverse_query(&self, y: u64) -> Result<Option<u64>> {
        if y >= (1u64 << self.out_bits) {
            return Err(CryptoError::InputOutOfRange {
                value: y,
                bits: self.out_bits,
            });
        }
        Ok(self.reverse.get(&y).copied())
    }

    /// Force the whole (toy-sized) domain into the tables.
    pub fn populate_all(&mut self) -> Result<()> {
        for x in 0..(1u64 << self.in_bits) {
            self.query(x)?;
        }
        Ok(())
    }

    pub fn is_fully_populated(&self) -> bool {
        self.forward.len() == 1usize << self.in_bits
    }

    /// After full population: whether the left halves and right halves of
    /// the images are each pairwise distinct. Requires an even `out_bits`.
    pub fn halves_injective(&mut self) -> Result<(bool, bool)> {
        if self.out_bits % 2 != 0 {
            return Err(CryptoError::BadParameters(
                "halves need an even output width".into(),
            ));
        }
        self.populate_all()?;
        let ell = self.out_bits / 2;
        let mask = (1u64 << ell) - 1;
        let mut left = std::collections::BTreeSet::new();
        let mut right = std::collections::BTreeSet::new();
        let mut left_ok = true;
        let mut right_ok = true;
        for &y in self.forward.values() {
            left_ok &= left.insert(y >> ell);
            right_ok &= right.insert(y & mask);
        }
        Ok((left_ok, right_ok))
    }

    /// Dump the forward table as a JSON object of hex strings, so
    /// experiments are replayable.
    pub fn dump_json(&self) -> String {
        let map: serde_json::Map<String, serde_json::Value> = self
            .forward
            .iter()
            .map(|(x, y)| (format!("{x:x}"), serde_json::Value::String(format!("{y:x}"))))
            .collect();
        serde_json::Value::Object(map).to_string()
    }

    /// Rebuild an oracle from a dump; the reverse table records the
    /// smallest preimage of each image point (dump order is sorted).
    pub fn load_json(in_bits: usize, out_bits: usize, seed: &[u8], dump: &str) -> Result<Self> {
        let mut oracle = RandomOracle::new(in_bits, out_bits, seed)?;
        let value: serde_json::Value =
            serde_json::from_str(dump).map_err(|e| CryptoError::Dump(e.to_string()))?;
        let map = value
            .as_object()
            .ok_or_else(|| CryptoError::Dump("expected a JSON object".into()))?;
        for (k, v) in map {
            let x = u64::from_str_radix(k, 16).map_err(|e| CryptoError::Dump(e.to_string()))?;
            let y = v
                .as_str()
                .and_then(|s| u64::from_str_radix(s, 16).ok())
                .ok_or_else(|| CryptoError::Dump(format!("bad value for key {k}")))?;
            oracle.forward.insert(x, y);
            oracle.reverse.entry(y).or_insert(x);
        }
        Ok(oracle)
    }
}
