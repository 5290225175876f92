//! Exact dense linear algebra for bipartite quantum states.
//!
//! States live on an explicit `A:B` qubit partition. Amplitude indexing puts
//! the A qubits in the high-order bits and the B qubits in the low-order bits
//! of the basis index, and within each side qubit 0 is the most significant
//! bit (so a ket written `|q0 q1 …⟩` reads left to right). This one global
//! convention makes the amplitude-matrix reshape behind the Schmidt
//! decomposition unambiguous.
//!
//! Everything here is exact up to double precision: pure states are dense
//! complex vectors (up to 24 qubits), density matrices are dense complex
//! matrices (up to 12 qubits), and the Schmidt/spectral oracles go through
//! SVD and Hermitian eigendecomposition. Exceeding a budget is a
//! [`StateError::BudgetExceeded`], never an attempted allocation.
//!
//! States are immutable values from the caller's point of view: the `&mut`
//! gate primitives exist so an execution engine can evolve its own working
//! copy, but nothing here shares or hides mutable state.

mod density;
mod error;
pub mod io;
mod pure;
mod schmidt;

pub use density::DensityMatrix;
pub use error::StateError;
pub use pure::PureState;
pub use schmidt::SchmidtDecomposition;

use num_complex::Complex64;

/// Which side of the bipartition an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

/// Largest total qubit count for dense pure states (16 MiB of amplitudes).
pub const PURE_QUBIT_BUDGET: usize = 24;
/// Largest total qubit count for dense density matrices.
pub const DENSITY_QUBIT_BUDGET: usize = 12;

/// Eigenvalues below this are treated as exact zeros.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;
/// Tolerance for invariant checks (norms, traces, hermiticity).
pub const INVARIANT_TOL: f64 = 1e-9;
/// Tolerance for reconstruction checks (Schmidt round trips).
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Von Neumann entropy of a density matrix, in bits.
///
/// Eigenvalues below [`EIGENVALUE_FLOOR`] are treated as zero, so pure states
/// report exactly 0.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigenvalues()
        .iter()
        .filter(|&&p| p > EIGENVALUE_FLOOR)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Parity of the bitwise AND of two masks; the `(-1)` exponent in Pauli
/// phase bookkeeping.
pub(crate) fn parity(x: u64) -> bool {
    x.count_ones() % 2 == 1
}
