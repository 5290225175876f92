use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::Result;
use crate::pure::check_mask;
use crate::{
    parity, PureState, Side, StateError, DENSITY_QUBIT_BUDGET, EIGENVALUE_FLOOR, INVARIANT_TOL,
    ZERO,
};

/// A density matrix on `n_a + n_b` qubits, indexed like [`PureState`]
/// amplitudes (A high bits, B low bits, big-endian within a side).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_a: usize,
    n_b: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub(crate) fn check_budget(total: usize) -> Result<()> {
        if total > DENSITY_QUBIT_BUDGET {
            return Err(StateError::BudgetExceeded {
                requested: total,
                limit: DENSITY_QUBIT_BUDGET,
            });
        }
        Ok(())
    }

    /// Build from an explicit matrix; checks dimensions, hermiticity and
    /// unit trace (PSD is checked separately by [`validate`](Self::validate),
    /// since it needs an eigendecomposition).
    pub fn new(n_a: usize, n_b: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        Self::check_budget(n_a + n_b)?;
        let dim = 1usize << (n_a + n_b);
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(StateError::DimensionMismatch(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let rho = DensityMatrix { n_a, n_b, mat };
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > INVARIANT_TOL || tr.im.abs() > INVARIANT_TOL {
            return Err(StateError::InvalidDensity(format!("trace is {tr}")));
        }
        for i in 0..dim {
            for j in i..dim {
                let d = rho.mat[(i, j)] - rho.mat[(j, i)].conj();
                if d.norm() > INVARIANT_TOL {
                    return Err(StateError::InvalidDensity(format!(
                        "not Hermitian at ({i},{j}): asymmetry {:.3e}",
                        d.norm()
                    )));
                }
            }
        }
        Ok(rho)
    }

    /// Internal constructor for matrices that are valid by construction
    /// (partial traces, convex mixtures of valid states, ...).
    pub fn from_matrix_unchecked(n_a: usize, n_b: usize, mat: DMatrix<Complex64>) -> Result<Self> {
        Self::check_budget(n_a + n_b)?;
        let dim = 1usize << (n_a + n_b);
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(StateError::DimensionMismatch(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(DensityMatrix { n_a, n_b, mat })
    }

    pub fn from_pure(psi: &PureState) -> Result<Self> {
        Self::check_budget(psi.total_qubits())?;
        let amps = psi.amplitudes();
        let dim = amps.len();
        let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            if amps[i] == ZERO {
                continue;
            }
            for j in 0..dim {
                mat[(i, j)] = amps[i] * amps[j].conj();
            }
        }
        Ok(DensityMatrix {
            n_a: psi.n_a(),
            n_b: psi.n_b(),
            mat,
        })
    }

    /// `I / 2^(n_a+n_b)`.
    pub fn maximally_mixed(n_a: usize, n_b: usize) -> Result<Self> {
        Self::check_budget(n_a + n_b)?;
        let dim = 1usize << (n_a + n_b);
        let mat = DMatrix::from_diagonal_element(
            dim,
            dim,
            Complex64::new(1.0 / dim as f64, 0.0),
        );
        Ok(DensityMatrix { n_a, n_b, mat })
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

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.mat[(i, j)] * self.mat[(j, i)]).re;
            }
        }
        acc
    }

    /// Full physical validation: Hermitian, PSD (eigenvalues ≥ -1e-9),
    /// trace 1.
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > INVARIANT_TOL || tr.im.abs() > INVARIANT_TOL {
            return Err(StateError::InvalidDensity(format!("trace is {tr}")));
        }
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let d = self.mat[(i, j)] - self.mat[(j, i)].conj();
                if d.norm() > INVARIANT_TOL {
                    return Err(StateError::InvalidDensity("not Hermitian".into()));
                }
            }
        }
        if let Some(min) = self
            .eigenvalues()
            .iter()
            .cloned()
            .min_by(|a, b| a.total_cmp(b))
        {
            if min < -INVARIANT_TOL {
                return Err(StateError::InvalidDensity(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Eigenvalues (real, unsorted guarantee: returned descending).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(self.mat.clone());
        let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        vals
    }

    /// Spectral decomposition into (weight, eigenstate) pairs, keeping
    /// weights above the eigenvalue floor and sorted descending.
    pub fn eigen_decompose(&self) -> Result<Vec<(f64, PureState)>> {
        let eig = SymmetricEigen::new(self.mat.clone());
        let mut pairs: Vec<(f64, usize)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut out = Vec::new();
        for (v, i) in pairs {
            if v <= EIGENVALUE_FLOOR {
                continue;
            }
            let col: Vec<Complex64> = eig.eigenvectors.column(i).iter().cloned().collect();
            out.push((
                v,
                PureState::from_amplitudes_normalized(self.n_a, self.n_b, col)?,
            ));
        }
        Ok(out)
    }

    /// `⟨target|ρ|target⟩`, the squared-overlap fidelity with a pure state.
    pub fn fidelity_with_pure(&self, target: &PureState) -> Result<f64> {
        if target.n_a() != self.n_a || target.n_b() != self.n_b {
            return Err(StateError::DimensionMismatch(format!(
                "fidelity between ({},{}) density and ({},{}) pure state",
                self.n_a,
                self.n_b,
                target.n_a(),
                target.n_b()
            )));
        }
        let amps = target.amplitudes();
        let mut acc = ZERO;
        for i in 0..self.dim() {
            if amps[i] == ZERO {
                continue;
            }
            for j in 0..self.dim() {
                acc += amps[i].conj() * self.mat[(i, j)] * amps[j];
            }
        }
        Ok(acc.re.clamp(0.0, 1.0))
    }

    /// Partial trace onto the kept side.
    pub fn partial_trace(&self, keep: Side) -> Result<DensityMatrix> {
        let (kept_bits, other_bits) = match keep {
            Side::A => (self.n_a, self.n_b),
            Side::B => (self.n_b, self.n_a),
        };
        let dim = 1usize << kept_bits;
        let other = 1usize << other_bits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for k1 in 0..dim {
            for k2 in 0..dim {
                let mut acc = ZERO;
                for o in 0..other {
                    let (i, j) = match keep {
                        Side::A => ((k1 << self.n_b) | o, (k2 << self.n_b) | o),
                        Side::B => ((o << self.n_b) | k1, (o << self.n_b) | k2),
                    };
                    acc += self.mat[(i, j)];
                }
                m[(k1, k2)] = acc;
            }
        }
        match keep {
            Side::A => DensityMatrix::from_matrix_unchecked(self.n_a, 0, m),
            Side::B => DensityMatrix::from_matrix_unchecked(0, self.n_b, m),
        }
    }

    /// Tensor product; A parts concatenate, B parts concatenate.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n_a = self.n_a + other.n_a;
        let n_b = self.n_b + other.n_b;
        Self::check_budget(n_a + n_b)?;
        let dim = 1usize << (n_a + n_b);
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        let idx = |s: &DensityMatrix, a: usize, b: usize| (a << s.n_b) | b;
        for a1 in 0..1usize << self.n_a {
            for b1 in 0..1usize << self.n_b {
                for a1p in 0..1usize << self.n_a {
                    for b1p in 0..1usize << self.n_b {
                        let z1 = self.mat[(idx(self, a1, b1), idx(self, a1p, b1p))];
                        if z1 == ZERO {
                            continue;
                        }
                        for a2 in 0..1usize << other.n_a {
                            for b2 in 0..1usize << other.n_b {
                                for a2p in 0..1usize << other.n_a {
                                    for b2p in 0..1usize << other.n_b {
                                        let z2 = other.mat
                                            [(idx(other, a2, b2), idx(other, a2p, b2p))];
                                        if z2 == ZERO {
                                            continue;
                                        }
                                        let row = (((a1 << other.n_a) | a2) << n_b)
                                            | ((b1 << other.n_b) | b2);
                                        let col = (((a1p << other.n_a) | a2p) << n_b)
                                            | ((b1p << other.n_b) | b2p);
                                        m[(row, col)] = z1 * z2;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        DensityMatrix::from_matrix_unchecked(n_a, n_b, m)
    }

    /// Quantum one-time pad `σ_X(a)σ_Z(b)` on one side.
    pub fn pauli_pad(&self, side: Side, a: u64, b: u64) -> Result<DensityMatrix> {
        let w = self.side_width(side);
        check_mask(a, w)?;
        check_mask(b, w)?;
        let dim = self.dim();
        let side_mask = (1usize << w) - 1;
        let shift = match side {
            Side::A => self.n_b,
            Side::B => 0,
        };
        // rho'[u,v] = (-1)^{b.(u^v)} rho[u^a, v^a] on the side bits.
        let amask = (a as usize) << shift;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for u in 0..dim {
            let ub = ((u >> shift) & side_mask) as u64;
            for v in 0..dim {
                let vb = ((v >> shift) & side_mask) as u64;
                let src = self.mat[(u ^ amask, v ^ amask)];
                if src == ZERO {
                    continue;
                }
                let sign = if parity(b & (ub ^ vb)) { -1.0 } else { 1.0 };
                m[(u, v)] = src * sign;
            }
        }
        DensityMatrix::from_matrix_unchecked(self.n_a, self.n_b, m)
    }

    /// Convex mixture `Σ wᵢ ρᵢ`; weights must sum to 1 within 1e-9.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let first = parts
            .first()
            .ok_or_else(|| StateError::InvalidDensity("empty mixture".into()))?;
        let (n_a, n_b) = (first.1.n_a, first.1.n_b);
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > INVARIANT_TOL {
            return Err(StateError::InvalidDensity(format!(
                "mixture weights sum to {total}"
            )));
        }
        let dim = first.1.dim();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.n_a != n_a || rho.n_b != n_b {
                return Err(StateError::DimensionMismatch(
                    "mixture over mismatched partitions".into(),
                ));
            }
            m += rho.mat.clone() * Complex64::new(*w, 0.0);
        }
        DensityMatrix::from_matrix_unchecked(n_a, n_b, m)
    }

    /// Frobenius distance to another density matrix.
    pub fn frobenius_distance(&self, other: &DensityMatrix) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.mat[(i, j)] - other.mat[(i, j)]).norm_sqr();
            }
        }
        acc.sqrt()
    }
}
