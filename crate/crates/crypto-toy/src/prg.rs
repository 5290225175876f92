use sha2::{Digest, Sha256};

/// Deterministic byte expansion: block `i` is `SHA256(seed || u32_be(i))`,
/// output is the truncated block concatenation. Bit-exact across
/// implementations; the golden fixtures pin this convention.
pub fn prg_bytes(seed: &[u8], n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(n + 32);
    let mut counter: u32 = 0;
    while out.len() < n {
        let mut hasher = Sha256::new();
        hasher.update(seed);
        hasher.update(counter.to_be_bytes());
        out.extend_from_slice(&hasher.finalize());
        counter += 1;
    }
    out.truncate(n);
    out
}

/// First `count` bits of the PRG byte stream, MSB first within each byte.
pub fn prg_bits(seed: &[u8], count: usize) -> Vec<bool> {
    let bytes = prg_bytes(seed, count.div_ceil(8));
    (0..count)
        .map(|i| (bytes[i / 8] >> (7 - (i % 8))) & 1 == 1)
        .collect()
}

/// Sequential bit reader over the PRG stream, with rejection sampling for
/// bounded draws. Used to build table permutations reproducibly.
pub struct PrgStream {
    seed: Vec<u8>,
    counter: u32,
    buf: Vec<u8>,
    bitpos: usize,
}

impl PrgStream {
    pub fn new(seed: impl Into<Vec<u8>>) -> Self {
        PrgStream {
            seed: seed.into(),
            counter: 0,
            buf: Vec::new(),
            bitpos: 0,
        }
    }

    pub fn next_bit(&mut self) -> bool {
        let byte_idx = self.bitpos / 8;
        while byte_idx >= self.buf.len() {
            let mut hasher = Sha256::new();
            hasher.update(&self.seed);
            hasher.update(self.counter.to_be_bytes());
            self.buf.extend_from_slice(&hasher.finalize());
            self.counter += 1;
        }
        let bit = (self.buf[byte_idx] >> (7 - (self.bitpos % 8))) & 1 == 1;
        self.bitpos += 1;
        bit
    }

    /// Next `n` bits as an integer, MSB first. `n <= 64`.
    pub fn next_bits(&mut self, n: usize) -> u64 {
        debug_assert!(n <= 64);
        let mut v = 0u64;
        for _ in 0..n {
            v = (v << 1) | self.next_bit() as u64;
        }
        v
    }

    /// Uniform draw in `0..k` by rejection on the minimal bit width.
    pub fn next_below(&mut self, k: u64) -> u64 {
        if k <= 1 {
            return 0;
        }
        let bits = 64 - (k - 1).leading_zeros() as usize;
        loop {
            let v = self.next_bits(bits);
            if v < k {
                return v;
            }
        }
    }
}
