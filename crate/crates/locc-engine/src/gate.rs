/// A contiguous block of qubits, `start..=last`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub len: usize,
}

impl Span {
    pub fn new(start: usize, len: usize) -> Self {
        Span { start, len }
    }

    /// Inclusive range `lo..=hi`.
    pub fn inclusive(lo: usize, hi: usize) -> Self {
        Span {
            start: lo,
            len: hi - lo + 1,
        }
    }

    pub fn last(&self) -> usize {
        self.start + self.len - 1
    }

    pub fn qubits(&self) -> Vec<usize> {
        (self.start..self.start + self.len).collect()
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.last() && other.start <= self.last()
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.start, self.last())
    }
}

/// One gate of the fixed universal set, plus classically-controlled Paulis
/// and oracle queries.
///
/// `CcX`/`CcZ` controls index into the communication register. The oracle
/// gates name an entry of an [`OracleRegistry`](crate::OracleRegistry):
/// `OracleF`/`OracleFInv` apply a registered bijection in place
/// (`|x⟩ → |π(x)⟩`), while `OracleH` XORs a function value into an output
/// block (`|x,y⟩ → |x, y ⊕ f(x)⟩`) and `OracleHInv` XORs a preimage back
/// into the input block (`|x,y⟩ → |x ⊕ f⁻¹(y), y⟩`).
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    T(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Toffoli {
        control0: usize,
        control1: usize,
        target: usize,
    },
    CcX {
        bit: usize,
        target: usize,
    },
    CcZ {
        bit: usize,
        target: usize,
    },
    OracleF {
        handle: String,
        span: Span,
    },
    OracleFInv {
        handle: String,
        span: Span,
    },
    OracleH {
        handle: String,
        input: Span,
        output: Span,
    },
    OracleHInv {
        handle: String,
        input: Span,
        output: Span,
    },
}

impl Gate {
    /// Structural check against a circuit width and communication width.
    /// Returns a human-readable problem description on failure.
    pub fn check(&self, width: usize, c: usize) -> Result<(), String> {
        let q = |i: usize, role: &str| {
            if i >= width {
                Err(format!("{role} qubit {i} out of range (width {width})"))
            } else {
                Ok(())
            }
        };
        match self {
            Gate::H(t) | Gate::X(t) | Gate::Z(t) | Gate::S(t) | Gate::T(t) => q(*t, "target"),
            Gate::Cnot { control, target } => {
                q(*control, "control")?;
                q(*target, "target")?;
                if control == target {
                    return Err("CNOT control equals target".into());
                }
                Ok(())
            }
            Gate::Toffoli {
                control0,
                control1,
                target,
            } => {
                q(*control0, "control")?;
                q(*control1, "control")?;
                q(*target, "target")?;
                if control0 == control1 || control0 == target || control1 == target {
                    return Err("TOFFOLI indices are not distinct".into());
                }
                Ok(())
            }
            Gate::CcX { bit, target } | Gate::CcZ { bit, target } => {
                q(*target, "target")?;
                if *bit >= c {
                    return Err(format!("classical bit c{bit} out of range (c = {c})"));
                }
                Ok(())
            }
            Gate::OracleF { span, .. } | Gate::OracleFInv { span, .. } => {
                q(span.last(), "oracle span end")
            }
            Gate::OracleH { input, output, .. } | Gate::OracleHInv { input, output, .. } => {
                q(input.last(), "oracle input end")?;
                q(output.last(), "oracle output end")?;
                if input.overlaps(output) {
                    return Err("oracle input and output blocks overlap".into());
                }
                Ok(())
            }
        }
    }

    /// Qubits whose computational-basis value this gate can change.
    /// Diagonal gates (Z, S, T, CcZ) write nothing; controls are reads.
    pub fn written_qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(t) | Gate::X(t) => vec![*t],
            Gate::Z(_) | Gate::S(_) | Gate::T(_) | Gate::CcZ { .. } => vec![],
            Gate::Cnot { target, .. } => vec![*target],
            Gate::Toffoli { target, .. } => vec![*target],
            Gate::CcX { target, .. } => vec![*target],
            Gate::OracleF { span, .. } | Gate::OracleFInv { span, .. } => span.qubits(),
            Gate::OracleH { output, .. } => output.qubits(),
            Gate::OracleHInv { input, .. } => input.qubits(),
        }
    }

    pub fn oracle_handle(&self) -> Option<&str> {
        match self {
            Gate::OracleF { handle, .. }
            | Gate::OracleFInv { handle, .. }
            | Gate::OracleH { handle, .. }
            | Gate::OracleHInv { handle, .. } => Some(handle),
            _ => None,
        }
    }
}
