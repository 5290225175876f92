use qstate_core::{DensityMatrix, PureState, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::Result;
use crate::{prg_bits, CryptoError};

/// The pad-and-commit channel: apply a quantum one-time pad to an `n`-qubit
/// register, then append commitment registers binding the `2n` pad bits.
///
/// Each pad bit is committed by a keyed one-bit permutation (derived from
/// the channel seed), one qubit per committed bit, so the whole experiment
/// fits the dense-density budget at `n <= 3`. Binding is exact; hiding is
/// not claimed at this scale and nothing downstream relies on it.
#[derive(Debug, Clone)]
pub struct NisbqChannel {
    lambda: usize,
    n: usize,
    /// Per-index bit flips: commitment i stores `bit ^ flips[i]`.
    /// Indices `0..n` commit the X-pad bits, `n..2n` the Z-pad bits.
    flips: Vec<bool>,
}

#[derive(Debug, Clone, Copy)]
pub enum NisbqMode {
    /// Uniform mixture over all `2^(2n)` pads.
    Exact,
    /// One pad draw, deterministic in the seed.
    Sampled { seed: u64 },
}

impl NisbqChannel {
    pub fn new(lambda: usize, n: usize) -> Self {
        let mut seed = b"nisbq/v1".to_vec();
        seed.extend_from_slice(&(lambda as u32).to_be_bytes());
        seed.extend_from_slice(&(n as u32).to_be_bytes());
        NisbqChannel {
            lambda,
            n,
            flips: prg_bits(&seed, 2 * n),
        }
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flips(&self) -> &[bool] {
        &self.flips
    }

    /// Commitment-register contents for pads `(a, b)`, as a `2n`-bit value
    /// in the usual big-endian convention.
    pub fn commit_register_value(&self, a: u64, b: u64) -> u64 {
        let n = self.n;
        let mut c = 0u64;
        for i in 0..n {
            let a_i = (a >> (n - 1 - i)) & 1 == 1;
            let b_i = (b >> (n - 1 - i)) & 1 == 1;
            c |= ((a_i ^ self.flips[i]) as u64) << (2 * n - 1 - i);
            c |= ((b_i ^ self.flips[n + i]) as u64) << (n - 1 - i);
        }
        c
    }

    /// Invert [`commit_register_value`](Self::commit_register_value).
    pub fn extract_pads(&self, c: u64) -> (u64, u64) {
        let n = self.n;
        let mut a = 0u64;
        let mut b = 0u64;
        for i in 0..n {
            let c_a = (c >> (2 * n - 1 - i)) & 1 == 1;
            let c_b = (c >> (n - 1 - i)) & 1 == 1;
            a |= ((c_a ^ self.flips[i]) as u64) << (n - 1 - i);
            b |= ((c_b ^ self.flips[n + i]) as u64) << (n - 1 - i);
        }
        (a, b)
    }

    /// Apply the channel to the `side` register (which must be exactly `n`
    /// qubits wide); the commitment registers are appended to that side.
    pub fn apply(
        &self,
        rho: &DensityMatrix,
        side: Side,
        mode: NisbqMode,
    ) -> Result<DensityMatrix> {
        let n = self.n;
        if rho.side_width(side) != n {
            return Err(CryptoError::BadParameters(format!(
                "channel acts on {n} qubits, side {side} has {}",
                rho.side_width(side)
            )));
        }
        let term = |a: u64, b: u64| -> Result<DensityMatrix> {
            let padded = rho.pauli_pad(side, a, b)?;
            let c = self.commit_register_value(a, b);
            let commit_state = match side {
                Side::A => PureState::basis_state(2 * n, 0, c, 0)?,
                Side::B => PureState::basis_state(0, 2 * n, 0, c)?,
            };
            Ok(padded.tensor(&commit_state.to_density()?)?)
        };
        match mode {
            NisbqMode::Sampled { seed } => {
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                let a = rng.random_range(0..(1u64 << n));
                let b = rng.random_range(0..(1u64 << n));
                term(a, b)
            }
            NisbqMode::Exact => {
                let w = 1.0 / (1u64 << (2 * n)) as f64;
                let mut parts = Vec::with_capacity(1 << (2 * n));
                for a in 0..(1u64 << n) {
                    for b in 0..(1u64 << n) {
                        parts.push((w, term(a, b)?));
                    }
                }
                Ok(DensityMatrix::mixture(&parts)?)
            }
        }
    }

    /// Undo the channel: read the commitment registers (which must be
    /// classical), recover the pads, unpad, and drop the commitments.
    pub fn invert(&self, state: &DensityMatrix, side: Side) -> Result<DensityMatrix> {
        let n = self.n;
        let w = state.side_width(side);
        if w != 3 * n {
            return Err(CryptoError::BadParameters(format!(
                "inversion expects a {}-qubit side ({n} payload + {} commitments), got {w}",
                3 * n,
                2 * n
            )));
        }
        let two_n = 2 * n;
        let cmask = (1usize << two_n) - 1;
        let (n_a, n_b) = (state.n_a(), state.n_b());
        let bmask = (1usize << n_b) - 1;
        let commit_of = |g: usize| -> usize {
            match side {
                Side::A => (g >> n_b) & cmask,
                Side::B => g & cmask,
            }
        };
        let compress = |g: usize| -> usize {
            match side {
                Side::A => {
                    let a = g >> n_b;
                    ((a >> two_n) << n_b) | (g & bmask)
                }
                Side::B => {
                    let a = g >> n_b;
                    let b = g & bmask;
                    (a << (n_b - two_n)) | (b >> two_n)
                }
            }
        };
        let dim = state.dim();
        let mat = state.matrix();

        // The input must be block-classical over commitment values.
        let mut off_weight = 0.0;
        for u in 0..dim {
            for v in 0..dim {
                if commit_of(u) != commit_of(v) {
                    off_weight += mat[(u, v)].norm_sqr();
                }
            }
        }
        let off_weight = off_weight.sqrt();
        if off_weight > 1e-9 {
            return Err(CryptoError::NonClassicalCommitments { weight: off_weight });
        }

        let (out_a, out_b) = match side {
            Side::A => (n_a - two_n, n_b),
            Side::B => (n_a, n_b - two_n),
        };
        let out_dim = 1usize << (out_a + out_b);
        let mut blocks: std::collections::BTreeMap<usize, nalgebra::DMatrix<num_complex::Complex64>> =
            std::collections::BTreeMap::new();
        for u in 0..dim {
            let cu = commit_of(u);
            for v in 0..dim {
                if commit_of(v) != cu {
                    continue;
                }
                let z = mat[(u, v)];
                if z.norm_sqr() == 0.0 {
                    continue;
                }
                blocks
                    .entry(cu)
                    .or_insert_with(|| nalgebra::DMatrix::zeros(out_dim, out_dim))
                    [(compress(u), compress(v))] = z;
            }
        }
        let mut acc = nalgebra::DMatrix::zeros(out_dim, out_dim);
        for (c, block) in blocks {
            let (a, b) = self.extract_pads(c as u64);
            let rho_c = DensityMatrix::from_matrix_unchecked(out_a, out_b, block)?;
            // The pad is self-inverse as a conjugation.
            let unpadded = rho_c.pauli_pad(side, a, b)?;
            acc += unpadded.matrix();
        }
        Ok(DensityMatrix::from_matrix_unchecked(out_a, out_b, acc)?)
    }
}
