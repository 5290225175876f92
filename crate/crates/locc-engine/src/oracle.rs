use std::collections::BTreeMap;
use std::sync::Arc;

/// A registered reversible function that oracle gates can query.
///
/// Permutation entries are bijections on basis states of a fixed width,
/// applied in place. Function entries are arbitrary `in_bits → out_bits`
/// maps queried in the reversible XOR convention; their inverse may be
/// partial (an unknown image point XORs nothing, which keeps the gate a
/// permutation of basis states).
#[derive(Clone)]
pub enum OracleEntry {
    Permutation {
        bits: usize,
        forward: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
        inverse: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
    },
    Function {
        in_bits: usize,
        out_bits: usize,
        forward: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
        inverse: Arc<dyn Fn(u64) -> Option<u64> + Send + Sync>,
    },
}

impl std::fmt::Debug for OracleEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OracleEntry::Permutation { bits, .. } => {
                write!(f, "Permutation {{ bits: {bits} }}")
            }
            OracleEntry::Function {
                in_bits, out_bits, ..
            } => write!(f, "Function {{ in_bits: {in_bits}, out_bits: {out_bits} }}"),
        }
    }
}

/// Immutable snapshot of named oracles available to a protocol execution.
#[derive(Debug, Clone, Default)]
pub struct OracleRegistry {
    entries: BTreeMap<String, OracleEntry>,
}

impl OracleRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_permutation(
        &mut self,
        name: impl Into<String>,
        bits: usize,
        forward: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
        inverse: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
    ) {
        self.entries.insert(
            name.into(),
            OracleEntry::Permutation {
                bits,
                forward,
                inverse,
            },
        );
    }

    pub fn register_function(
        &mut self,
        name: impl Into<String>,
        in_bits: usize,
        out_bits: usize,
        forward: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
        inverse: Arc<dyn Fn(u64) -> Option<u64> + Send + Sync>,
    ) {
        self.entries.insert(
            name.into(),
            OracleEntry::Function {
                in_bits,
                out_bits,
                forward,
                inverse,
            },
        );
    }

    pub fn get(&self, name: &str) -> Option<&OracleEntry> {
        self.entries.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(|s| s.as_str())
    }
}
