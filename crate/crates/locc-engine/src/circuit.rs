use num_complex::Complex64;
use qstate_core::{PureState, Side};

use crate::{EngineError, Gate, OracleEntry, OracleRegistry};

const Z0: Complex64 = Complex64::new(0.0, 0.0);
const Z1: Complex64 = Complex64::new(1.0, 0.0);

fn mat_x() -> [[Complex64; 2]; 2] {
    [[Z0, Z1], [Z1, Z0]]
}

fn mat_z() -> [[Complex64; 2]; 2] {
    [[Z1, Z0], [Z0, -Z1]]
}

fn mat_h() -> [[Complex64; 2]; 2] {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

fn mat_s() -> [[Complex64; 2]; 2] {
    [[Z1, Z0], [Z0, Complex64::new(0.0, 1.0)]]
}

fn mat_t() -> [[Complex64; 2]; 2] {
    let p = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    [[Z1, Z0], [Z0, p]]
}

/// An ordered gate list on `width` qubits. `ancilla_count` of those qubits
/// are understood to start in `|0⟩` when the circuit is used standalone;
/// inside a protocol round it must be zero (the protocol header declares
/// ancillas).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LocalCircuit {
    pub width: usize,
    pub ancilla_count: usize,
    pub gates: Vec<Gate>,
}

impl LocalCircuit {
    pub fn empty(width: usize) -> Self {
        LocalCircuit {
            width,
            ancilla_count: 0,
            gates: Vec::new(),
        }
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Apply every gate to one side of a state. The side's register must be
    /// exactly `width` qubits wide; the last `c_bits` of it are the
    /// communication register that `CcX`/`CcZ` controls refer to.
    pub fn apply_to_side(
        &self,
        state: &mut PureState,
        side: Side,
        c_bits: usize,
        registry: &OracleRegistry,
    ) -> Result<(), EngineError> {
        let w = state.side_width(side);
        if w != self.width {
            return Err(EngineError::CircuitWidth {
                width: self.width,
                expected: w,
            });
        }
        let c_base = self.width - c_bits;
        for gate in &self.gates {
            match gate {
                Gate::H(t) => state.apply_one_qubit(side, *t, &mat_h())?,
                Gate::X(t) => state.apply_one_qubit(side, *t, &mat_x())?,
                Gate::Z(t) => state.apply_one_qubit(side, *t, &mat_z())?,
                Gate::S(t) => state.apply_one_qubit(side, *t, &mat_s())?,
                Gate::T(t) => state.apply_one_qubit(side, *t, &mat_t())?,
                Gate::Cnot { control, target } => {
                    state.apply_controlled_one_qubit(side, &[*control], *target, &mat_x())?
                }
                Gate::Toffoli {
                    control0,
                    control1,
                    target,
                } => state.apply_controlled_one_qubit(
                    side,
                    &[*control0, *control1],
                    *target,
                    &mat_x(),
                )?,
                Gate::CcX { bit, target } => {
                    if *bit >= c_bits {
                        return Err(EngineError::ClassicalBitOutOfRange {
                            bit: *bit,
                            c: c_bits,
                        });
                    }
                    state.apply_controlled_one_qubit(side, &[c_base + *bit], *target, &mat_x())?
                }
                Gate::CcZ { bit, target } => {
                    if *bit >= c_bits {
                        return Err(EngineError::ClassicalBitOutOfRange {
                            bit: *bit,
                            c: c_bits,
                        });
                    }
                    state.apply_controlled_one_qubit(side, &[c_base + *bit], *target, &mat_z())?
                }
                Gate::OracleF { handle, span } | Gate::OracleFInv { handle, span } => {
                    let entry = registry
                        .get(handle)
                        .ok_or_else(|| EngineError::UnknownOracle(handle.clone()))?;
                    let OracleEntry::Permutation {
                        bits,
                        forward,
                        inverse,
                    } = entry
                    else {
                        return Err(EngineError::OracleKindMismatch {
                            handle: handle.clone(),
                            kind: "function",
                        });
                    };
                    if *bits != span.len {
                        return Err(EngineError::OracleWidthMismatch {
                            handle: handle.clone(),
                            got: span.len,
                            expected: *bits,
                        });
                    }
                    let map = if matches!(gate, Gate::OracleF { .. }) {
                        forward.clone()
                    } else {
                        inverse.clone()
                    };
                    state.apply_basis_permutation(side, &span.qubits(), &*map)?;
                }
                Gate::OracleH {
                    handle,
                    input,
                    output,
                }
                | Gate::OracleHInv {
                    handle,
                    input,
                    output,
                } => {
                    let entry = registry
                        .get(handle)
                        .ok_or_else(|| EngineError::UnknownOracle(handle.clone()))?;
                    let OracleEntry::Function {
                        in_bits,
                        out_bits,
                        forward,
                        inverse,
                    } = entry
                    else {
                        return Err(EngineError::OracleKindMismatch {
                            handle: handle.clone(),
                            kind: "permutation",
                        });
                    };
                    if *in_bits != input.len || *out_bits != output.len {
                        return Err(EngineError::OracleWidthMismatch {
                            handle: handle.clone(),
                            got: input.len + output.len,
                            expected: in_bits + out_bits,
                        });
                    }
                    let mut qubits = input.qubits();
                    qubits.extend(output.qubits());
                    let (kin, kout) = (*in_bits, *out_bits);
                    let ymask = (1u64 << kout) - 1;
                    if matches!(gate, Gate::OracleH { .. }) {
                        let f = forward.clone();
                        let map = move |v: u64| {
                            let x = v >> kout;
                            let y = v & ymask;
                            (x << kout) | (y ^ f(x))
                        };
                        state.apply_basis_permutation(side, &qubits, &map)?;
                    } else {
                        let g = inverse.clone();
                        let xmask = (1u64 << kin) - 1;
                        let map = move |v: u64| {
                            let x = v >> kout;
                            let y = v & ymask;
                            let pre = g(y).unwrap_or(0) & xmask;
                            (((x ^ pre) as u64) << kout) | y
                        };
                        state.apply_basis_permutation(side, &qubits, &map)?;
                    }
                }
            }
        }
        Ok(())
    }
}
