use crate::error::Result;
use crate::{CryptoError, PrpInstance};

/// The keyed function triple over a permutation family `F`:
/// `f(x) = F(k_f, x)` (an `m`-bit bijection), `g(x) = F(k_g, x || 0^(m-n))`
/// (injective `n -> m`), and `h(x)` = the `n`-bit prefix of `F(k_h, x)`
/// (surjective `m -> n` with every fiber exactly `2^(m-n)`).
#[derive(Debug, Clone)]
pub struct DerivedFunctions {
    m: usize,
    n: usize,
    prp_f: PrpInstance,
    prp_g: PrpInstance,
    prp_h: PrpInstance,
}

impl DerivedFunctions {
    pub fn new(m: usize, n: usize, k_f: &[u8], k_g: &[u8], k_h: &[u8]) -> Result<Self> {
        if n == 0 || m <= n {
            return Err(CryptoError::BadParameters(format!(
                "derived functions need m > n >= 1, got m={m}, n={n}"
            )));
        }
        Ok(DerivedFunctions {
            m,
            n,
            prp_f: PrpInstance::new(m, k_f)?,
            prp_g: PrpInstance::new(m, k_g)?,
            prp_h: PrpInstance::new(m, k_h)?,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prp_f(&self) -> &PrpInstance {
        &self.prp_f
    }

    pub fn prp_g(&self) -> &PrpInstance {
        &self.prp_g
    }

    pub fn prp_h(&self) -> &PrpInstance {
        &self.prp_h
    }

    /// `m`-bit bijection.
    pub fn f(&self, x: u64) -> Result<u64> {
        self.prp_f.forward(x)
    }

    pub fn f_inv(&self, y: u64) -> Result<u64> {
        self.prp_f.inverse(y)
    }

    /// Injective `n -> m`: pad with `m - n` zero bits, then permute.
    pub fn g(&self, x: u64) -> Result<u64> {
        if x >= (1u64 << self.n) {
            return Err(CryptoError::InputOutOfRange {
                value: x,
                bits: self.n,
            });
        }
        self.prp_g.forward(x << (self.m - self.n))
    }

    /// Surjective `m -> n`: permute, keep the n-bit prefix.
    pub fn h(&self, x: u64) -> Result<u64> {
        Ok(self.prp_h.forward(x)? >> (self.m - self.n))
    }

    pub fn gh(&self, x: u64) -> Result<u64> {
        let y = self.h(x)?;
        self.g(y)
    }
}
