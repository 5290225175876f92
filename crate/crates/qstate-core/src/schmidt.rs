use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{PureState, ZERO};

/// Schmidt decomposition `Σᵢ √λᵢ |uᵢ⟩|vᵢ⟩` of a bipartite pure state.
///
/// `coefficients` are the λᵢ (squared singular values of the amplitude
/// matrix), sorted descending; they sum to 1 for a normalized state. The
/// bases are orthonormal on A and B respectively. This is the exact oracle
/// behind every pure-state entanglement measure in the workspace.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<Complex64>>,
    pub right_basis: Vec<Vec<Complex64>>,
    n_a: usize,
    n_b: usize,
}

impl SchmidtDecomposition {
    pub(crate) fn of(state: &PureState) -> Self {
        let rows = 1usize << state.n_a();
        let cols = 1usize << state.n_b();
        let m = DMatrix::from_fn(rows, cols, |a, b| state.amp(a as u64, b as u64));
        let mut svd = m.svd(true, true);
        svd.sort_by_singular_values();
        let u = svd.u.expect("svd with u requested");
        let v_t = svd.v_t.expect("svd with v_t requested");
        let k = svd.singular_values.len();
        let mut coefficients = Vec::with_capacity(k);
        let mut left_basis = Vec::with_capacity(k);
        let mut right_basis = Vec::with_capacity(k);
        for i in 0..k {
            let s = svd.singular_values[i];
            coefficients.push(s * s);
            left_basis.push(u.column(i).iter().cloned().collect());
            // amplitude(a,b) = sum_i s_i * u[a,i] * v_t[i,b], so the i-th
            // right Schmidt vector has components v_t[i, b].
            right_basis.push(v_t.row(i).iter().cloned().collect());
        }
        SchmidtDecomposition {
            coefficients,
            left_basis,
            right_basis,
            n_a: state.n_a(),
            n_b: state.n_b(),
        }
    }

    /// Number of coefficients above `floor`.
    pub fn rank(&self, floor: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > floor).count()
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients.first().copied().unwrap_or(0.0)
    }

    /// Rebuild the state vector `Σᵢ √λᵢ |uᵢ⟩|vᵢ⟩`.
    pub fn reconstruct(&self) -> PureState {
        let n_b_dim = 1usize << self.n_b;
        let mut amps = vec![ZERO; 1usize << (self.n_a + self.n_b)];
        for ((c, u), v) in self
            .coefficients
            .iter()
            .zip(&self.left_basis)
            .zip(&self.right_basis)
        {
            let s = c.sqrt();
            if s == 0.0 {
                continue;
            }
            for (a, ua) in u.iter().enumerate() {
                if *ua == ZERO {
                    continue;
                }
                for (b, vb) in v.iter().enumerate() {
                    amps[a * n_b_dim + b] += s * ua * vb;
                }
            }
        }
        PureState::from_amplitudes_normalized(self.n_a, self.n_b, amps)
            .expect("reconstruction of a normalized state")
    }
}
