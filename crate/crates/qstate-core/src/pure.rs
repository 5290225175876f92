use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::{
    parity, DensityMatrix, SchmidtDecomposition, Side, StateError, INVARIANT_TOL, ONE,
    PURE_QUBIT_BUDGET, ZERO,
};

/// A pure bipartite state on `n_a + n_b` qubits.
///
/// The amplitude at basis index `(a << n_b) | b` is the coefficient of
/// `|a⟩_A ⊗ |b⟩_B`, with both `a` and `b` read big-endian (qubit 0 of a side
/// is the most significant bit of that side's index).
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_a: usize,
    n_b: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    fn check_budget(total: usize) -> Result<()> {
        if total > PURE_QUBIT_BUDGET {
            return Err(StateError::BudgetExceeded {
                requested: total,
                limit: PURE_QUBIT_BUDGET,
            });
        }
        Ok(())
    }

    /// `|0…0⟩` on the given partition.
    pub fn zero_state(n_a: usize, n_b: usize) -> Result<Self> {
        Self::basis_state(n_a, n_b, 0, 0)
    }

    /// The computational basis state `|a⟩_A |b⟩_B`.
    pub fn basis_state(n_a: usize, n_b: usize, a: u64, b: u64) -> Result<Self> {
        Self::check_budget(n_a + n_b)?;
        check_mask(a, n_a)?;
        check_mask(b, n_b)?;
        let mut amps = vec![ZERO; 1usize << (n_a + n_b)];
        amps[((a << n_b) | b) as usize] = ONE;
        Ok(PureState { n_a, n_b, amps })
    }

    /// Build from an explicit amplitude vector; must have length
    /// `2^(n_a+n_b)` and unit norm within `1e-9`.
    pub fn from_amplitudes(n_a: usize, n_b: usize, amps: Vec<Complex64>) -> Result<Self> {
        Self::check_budget(n_a + n_b)?;
        if amps.len() != 1usize << (n_a + n_b) {
            return Err(StateError::DimensionMismatch(format!(
                "amplitude vector has length {}, expected {}",
                amps.len(),
                1usize << (n_a + n_b)
            )));
        }
        let state = PureState { n_a, n_b, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > INVARIANT_TOL {
            return Err(StateError::NotNormalized(norm));
        }
        Ok(state)
    }

    /// As [`from_amplitudes`](Self::from_amplitudes) but renormalizes instead
    /// of rejecting; fails only on an all-zero vector.
    pub fn from_amplitudes_normalized(
        n_a: usize,
        n_b: usize,
        mut amps: Vec<Complex64>,
    ) -> Result<Self> {
        Self::check_budget(n_a + n_b)?;
        if amps.len() != 1usize << (n_a + n_b) {
            return Err(StateError::DimensionMismatch(format!(
                "amplitude vector has length {}, expected {}",
                amps.len(),
                1usize << (n_a + n_b)
            )));
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-15 {
            return Err(StateError::NotNormalized(norm));
        }
        for z in &mut amps {
            *z /= norm;
        }
        Ok(PureState { n_a, n_b, amps })
    }

    /// `m` EPR pairs: `n_a = n_b = m`, amplitude `2^(-m/2)` wherever the A
    /// bits equal the B bits.
    pub fn epr_pairs(m: usize) -> Result<Self> {
        Self::check_budget(2 * m)?;
        let mut amps = vec![ZERO; 1usize << (2 * m)];
        let coeff = Complex64::new(1.0 / ((1u64 << m) as f64).sqrt(), 0.0);
        for a in 0..(1u64 << m) {
            amps[((a << m) | a) as usize] = coeff;
        }
        Ok(PureState { n_a: m, n_b: m, amps })
    }

    pub fn n_a(&self) -> usize {
        self.n_a
    }

    pub fn n_b(&self) -> usize {
        self.n_b
    }

    pub fn total_qubits(&self) -> usize {
        self.n_a + self.n_b
    }

    pub fn side_width(&self, side: Side) -> usize {
        match side {
            Side::A => self.n_a,
            Side::B => self.n_b,
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude of `|a⟩_A |b⟩_B`.
    pub fn amp(&self, a: u64, b: u64) -> Complex64 {
        self.amps[((a << self.n_b) | b) as usize]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.n_a != other.n_a || self.n_b != other.n_b {
            return Err(StateError::DimensionMismatch(format!(
                "inner product between ({},{}) and ({},{}) states",
                self.n_a, self.n_b, other.n_a, other.n_b
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| x.conj() * y)
            .sum())
    }

    /// Squared overlap `|⟨self|other⟩|²`.
    pub fn fidelity_with(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// Tensor product: A parts concatenate, B parts concatenate, so the A:B
    /// partition is preserved.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let n_a = self.n_a + other.n_a;
        let n_b = self.n_b + other.n_b;
        Self::check_budget(n_a + n_b)?;
        let mut amps = vec![ZERO; 1usize << (n_a + n_b)];
        for a1 in 0..(1u64 << self.n_a) {
            for b1 in 0..(1u64 << self.n_b) {
                let x1 = self.amp(a1, b1);
                if x1 == ZERO {
                    continue;
                }
                for a2 in 0..(1u64 << other.n_a) {
                    for b2 in 0..(1u64 << other.n_b) {
                        let x2 = other.amp(a2, b2);
                        if x2 == ZERO {
                            continue;
                        }
                        let a = (a1 << other.n_a) | a2;
                        let b = (b1 << other.n_b) | b2;
                        amps[((a << n_b) | b) as usize] = x1 * x2;
                    }
                }
            }
        }
        Ok(PureState { n_a, n_b, amps })
    }

    /// Reinterpret the same amplitude vector under a different A:B cut.
    /// Total qubit count must be unchanged.
    pub fn repartition(&self, n_a: usize, n_b: usize) -> Result<Self> {
        if n_a + n_b != self.n_a + self.n_b {
            return Err(StateError::DimensionMismatch(format!(
                "repartition ({},{}) changes total qubit count {}",
                n_a,
                n_b,
                self.total_qubits()
            )));
        }
        Ok(PureState {
            n_a,
            n_b,
            amps: self.amps.clone(),
        })
    }

    /// Global bit position (from the LSB of the basis index) of a side-local
    /// qubit index.
    fn bit_position(&self, side: Side, qubit: usize) -> Result<usize> {
        let width = self.side_width(side);
        if qubit >= width {
            return Err(StateError::QubitOutOfRange {
                side,
                index: qubit,
                width,
            });
        }
        Ok(match side {
            Side::A => self.n_b + self.n_a - 1 - qubit,
            Side::B => self.n_b - 1 - qubit,
        })
    }

    /// Apply a 2x2 gate to one qubit.
    pub fn apply_one_qubit(
        &mut self,
        side: Side,
        qubit: usize,
        m: &[[Complex64; 2]; 2],
    ) -> Result<()> {
        let p = self.bit_position(side, qubit)?;
        let mask = 1usize << p;
        for g in 0..self.amps.len() {
            if g & mask == 0 {
                let g1 = g | mask;
                let x0 = self.amps[g];
                let x1 = self.amps[g1];
                self.amps[g] = m[0][0] * x0 + m[0][1] * x1;
                self.amps[g1] = m[1][0] * x0 + m[1][1] * x1;
            }
        }
        Ok(())
    }

    /// Apply a 2x2 gate to `target` on the subspace where every control
    /// qubit (same side) is `|1⟩`.
    pub fn apply_controlled_one_qubit(
        &mut self,
        side: Side,
        controls: &[usize],
        target: usize,
        m: &[[Complex64; 2]; 2],
    ) -> Result<()> {
        let t = self.bit_position(side, target)?;
        let mut cmask = 0usize;
        for &c in controls {
            cmask |= 1usize << self.bit_position(side, c)?;
        }
        let tmask = 1usize << t;
        for g in 0..self.amps.len() {
            if g & tmask == 0 && g & cmask == cmask {
                let g1 = g | tmask;
                let x0 = self.amps[g];
                let x1 = self.amps[g1];
                self.amps[g] = m[0][0] * x0 + m[0][1] * x1;
                self.amps[g1] = m[1][0] * x0 + m[1][1] * x1;
            }
        }
        Ok(())
    }

    /// Permute computational basis values of the listed qubits (one side,
    /// listed MSB first): `|v⟩ → |f(v)⟩`. `f` must be a bijection on
    /// `2^k` values; this is how permutation oracles enter circuits.
    pub fn apply_basis_permutation(
        &mut self,
        side: Side,
        qubits: &[usize],
        f: &dyn Fn(u64) -> u64,
    ) -> Result<()> {
        let k = qubits.len();
        let mut positions = Vec::with_capacity(k);
        for &q in qubits {
            positions.push(self.bit_position(side, q)?);
        }
        let mut out = vec![ZERO; self.amps.len()];
        for g in 0..self.amps.len() {
            if self.amps[g] == ZERO {
                continue;
            }
            let mut v: u64 = 0;
            for (j, &p) in positions.iter().enumerate() {
                v |= (((g >> p) & 1) as u64) << (k - 1 - j);
            }
            let w = f(v);
            debug_assert!(w < (1u64 << k), "permutation output out of range");
            let mut g2 = g;
            for (j, &p) in positions.iter().enumerate() {
                let bit = (w >> (k - 1 - j)) & 1;
                g2 = (g2 & !(1usize << p)) | ((bit as usize) << p);
            }
            out[g2] = self.amps[g];
        }
        self.amps = out;
        Ok(())
    }

    /// Apply a dense unitary to an entire side.
    pub fn apply_side_unitary(&mut self, side: Side, u: &DMatrix<Complex64>) -> Result<()> {
        let w = self.side_width(side);
        let dim = 1usize << w;
        if u.nrows() != dim || u.ncols() != dim {
            return Err(StateError::DimensionMismatch(format!(
                "unitary is {}x{}, side {side} needs {dim}x{dim}",
                u.nrows(),
                u.ncols()
            )));
        }
        let other_dim = self.amps.len() >> w;
        let mut vin = vec![ZERO; dim];
        match side {
            Side::A => {
                // A index strides by 2^{n_b}.
                for b in 0..other_dim {
                    for a in 0..dim {
                        vin[a] = self.amps[(a << self.n_b) | b];
                    }
                    for a in 0..dim {
                        let mut acc = ZERO;
                        for a2 in 0..dim {
                            acc += u[(a, a2)] * vin[a2];
                        }
                        self.amps[(a << self.n_b) | b] = acc;
                    }
                }
            }
            Side::B => {
                for a in 0..other_dim {
                    let base = a << self.n_b;
                    vin.copy_from_slice(&self.amps[base..base + dim]);
                    for b in 0..dim {
                        let mut acc = ZERO;
                        for b2 in 0..dim {
                            acc += u[(b, b2)] * vin[b2];
                        }
                        self.amps[base + b] = acc;
                    }
                }
            }
        }
        Ok(())
    }

    /// Quantum one-time pad `σ_X(a)σ_Z(b)` on one side. Masks use the same
    /// big-endian convention as basis indices.
    pub fn pauli_pad(&self, side: Side, a: u64, b: u64) -> Result<Self> {
        let w = self.side_width(side);
        check_mask(a, w)?;
        check_mask(b, w)?;
        let mut out = vec![ZERO; self.amps.len()];
        for g in 0..self.amps.len() {
            let (ga, gb) = self.split_index(g);
            let (x, rebuild): (u64, Box<dyn Fn(u64) -> usize>) = match side {
                Side::A => (ga, Box::new(move |v| ((v << self.n_b) | gb) as usize)),
                Side::B => (gb, Box::new(move |v| ((ga << self.n_b) | v) as usize)),
            };
            // sigma_X(a) sigma_Z(b) |x> = (-1)^{b.x} |x ^ a>
            let target = rebuild(x ^ a);
            let sign = if parity(b & x) { -1.0 } else { 1.0 };
            out[target] = self.amps[g] * sign;
        }
        Ok(PureState {
            n_a: self.n_a,
            n_b: self.n_b,
            amps: out,
        })
    }

    fn split_index(&self, g: usize) -> (u64, u64) {
        let b_mask = (1usize << self.n_b) - 1;
        ((g >> self.n_b) as u64, (g & b_mask) as u64)
    }

    /// Append `count` qubits in basis state `|value⟩` at the end of a side
    /// (they become that side's highest qubit numbers).
    pub fn append_qubits(&self, side: Side, count: usize, value: u64) -> Result<Self> {
        Self::check_budget(self.total_qubits() + count)?;
        check_mask(value, count)?;
        let (n_a, n_b) = match side {
            Side::A => (self.n_a + count, self.n_b),
            Side::B => (self.n_a, self.n_b + count),
        };
        let mut amps = vec![ZERO; 1usize << (n_a + n_b)];
        for g in 0..self.amps.len() {
            let (a, b) = self.split_index(g);
            let (a2, b2) = match side {
                Side::A => ((a << count) | value, b),
                Side::B => (a, (b << count) | value),
            };
            amps[((a2 << n_b) | b2) as usize] = self.amps[g];
        }
        Ok(PureState { n_a, n_b, amps })
    }

    /// Marginal probabilities of measuring the listed qubits (one side,
    /// listed MSB first) in the computational basis.
    pub fn measure_probabilities(&self, side: Side, qubits: &[usize]) -> Result<Vec<f64>> {
        let k = qubits.len();
        let mut positions = Vec::with_capacity(k);
        for &q in qubits {
            positions.push(self.bit_position(side, q)?);
        }
        let mut probs = vec![0.0; 1usize << k];
        for g in 0..self.amps.len() {
            let p = self.amps[g].norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut v = 0usize;
            for (j, &pos) in positions.iter().enumerate() {
                v |= ((g >> pos) & 1) << (k - 1 - j);
            }
            probs[v] += p;
        }
        Ok(probs)
    }

    /// Project the listed qubits onto `|value⟩`, remove them from the state,
    /// and renormalize. Returns the outcome probability and the collapsed
    /// state. The listed qubits must be sorted ascending.
    pub fn project_and_remove(
        &self,
        side: Side,
        qubits: &[usize],
        value: u64,
    ) -> Result<(f64, Self)> {
        let k = qubits.len();
        check_mask(value, k)?;
        debug_assert!(qubits.windows(2).all(|w| w[0] < w[1]));
        let mut positions = Vec::with_capacity(k);
        for &q in qubits {
            positions.push(self.bit_position(side, q)?);
        }
        let keep_mask: usize = {
            let mut m = (1usize << self.total_qubits()) - 1;
            for &p in &positions {
                m &= !(1usize << p);
            }
            m
        };
        let (n_a, n_b) = match side {
            Side::A => (self.n_a - k, self.n_b),
            Side::B => (self.n_a, self.n_b - k),
        };
        let mut amps = vec![ZERO; 1usize << (n_a + n_b)];
        let mut prob = 0.0;
        for g in 0..self.amps.len() {
            let z = self.amps[g];
            if z == ZERO {
                continue;
            }
            let mut v = 0u64;
            for (j, &pos) in positions.iter().enumerate() {
                v |= (((g >> pos) & 1) as u64) << (k - 1 - j);
            }
            if v != value {
                continue;
            }
            prob += z.norm_sqr();
            // Compress: drop the projected bit positions.
            let mut g2 = 0usize;
            let mut shift = 0;
            for bit in 0..self.total_qubits() {
                if keep_mask & (1usize << bit) != 0 {
                    g2 |= ((g >> bit) & 1) << shift;
                    shift += 1;
                }
            }
            amps[g2] = z;
        }
        if prob <= 0.0 {
            return Err(StateError::ZeroProbabilityOutcome);
        }
        let scale = Complex64::new(1.0 / prob.sqrt(), 0.0);
        for z in &mut amps {
            *z *= scale;
        }
        Ok((prob, PureState { n_a, n_b, amps }))
    }

    /// Reduced density matrix on the kept side.
    pub fn partial_trace(&self, keep: Side) -> Result<DensityMatrix> {
        let (kept, other) = match keep {
            Side::A => (self.n_a, self.n_b),
            Side::B => (self.n_b, self.n_a),
        };
        DensityMatrix::check_budget(kept)?;
        let dim = 1usize << kept;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        match keep {
            Side::A => {
                for a in 0..dim {
                    for a2 in 0..dim {
                        let mut acc = ZERO;
                        for b in 0..(1usize << other) {
                            acc += self.amps[(a << self.n_b) | b]
                                * self.amps[(a2 << self.n_b) | b].conj();
                        }
                        m[(a, a2)] = acc;
                    }
                }
                DensityMatrix::from_matrix_unchecked(self.n_a, 0, m)
            }
            Side::B => {
                for b in 0..dim {
                    for b2 in 0..dim {
                        let mut acc = ZERO;
                        for a in 0..(1usize << other) {
                            acc += self.amps[(a << self.n_b) | b]
                                * self.amps[(a << self.n_b) | b2].conj();
                        }
                        m[(b, b2)] = acc;
                    }
                }
                DensityMatrix::from_matrix_unchecked(0, self.n_b, m)
            }
        }
    }

    /// Schmidt decomposition across the A:B cut, via SVD of the
    /// `2^n_a × 2^n_b` amplitude matrix. Coefficients are squared singular
    /// values, sorted descending.
    pub fn schmidt(&self) -> SchmidtDecomposition {
        SchmidtDecomposition::of(self)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::from_pure(self)
    }
}

pub(crate) fn check_mask(mask: u64, width: usize) -> Result<()> {
    if width < 64 && mask >= (1u64 << width) {
        return Err(StateError::MaskTooWide { mask, width });
    }
    Ok(())
}
