use qstate_core::{Side, PURE_QUBIT_BUDGET};

use crate::{EngineError, Gate, LocalCircuit, OracleEntry, OracleRegistry};

/// One round: A's circuit, then (after `C` is measured) B's circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct Round {
    pub circuit_a: LocalCircuit,
    pub circuit_b: LocalCircuit,
}

/// A two-party LOCC protocol in circuit-description form.
#[derive(Debug, Clone, PartialEq)]
pub struct LoccProtocol {
    /// Input qubits on each side.
    pub n_a: usize,
    pub n_b: usize,
    /// Ancilla qubits (registers A' and B'), initialized to `|0⟩`.
    pub t_a: usize,
    pub t_b: usize,
    /// Width of the communication register in bits.
    pub c: usize,
    /// Output qubits taken from the front of `(A, A')` and `(B, B')`.
    pub m_a: usize,
    pub m_b: usize,
    pub rounds: Vec<Round>,
    /// EPR pairs consumed when this protocol is used as a dilution map.
    /// Builder metadata; not part of the wire format.
    pub epr_inputs: Option<usize>,
}

/// Cost summary under the gate-counting convention: gates, plus one per
/// created ancilla qubit, plus one measurement event per communication bit
/// per round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolCost {
    pub gate_count: usize,
    pub rounds: usize,
    pub comm_bits: usize,
    pub epr_inputs: usize,
}

/// One structural violation found by [`LoccProtocol::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub round: Option<usize>,
    pub side: Option<Side>,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.round, self.side) {
            (Some(r), Some(s)) => write!(f, "round {r}, side {s}: {}", self.message),
            (Some(r), None) => write!(f, "round {r}: {}", self.message),
            _ => write!(f, "{}", self.message),
        }
    }
}

impl LoccProtocol {
    pub fn width_a(&self) -> usize {
        self.n_a + self.t_a + self.c
    }

    pub fn width_b(&self) -> usize {
        self.n_b + self.t_b + self.c
    }

    /// Total qubits alive at the peak of execution.
    pub fn peak_qubits(&self) -> usize {
        self.n_a + self.t_a + self.n_b + self.t_b + self.c
    }

    /// Structural validation; the empty list means every invariant holds.
    pub fn validate(&self) -> Vec<Violation> {
        self.validate_inner(None)
    }

    /// As [`validate`](Self::validate), additionally resolving oracle
    /// handles against a registry.
    pub fn validate_with_registry(&self, registry: &OracleRegistry) -> Vec<Violation> {
        self.validate_inner(Some(registry))
    }

    fn validate_inner(&self, registry: Option<&OracleRegistry>) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |round, side, message: String| {
            out.push(Violation {
                round,
                side,
                message,
            })
        };
        if self.rounds.is_empty() {
            push(None, None, "protocol has no rounds (r >= 1 required)".into());
        }
        if self.m_a > self.n_a + self.t_a {
            push(
                None,
                None,
                format!(
                    "m_a = {} exceeds n_a + t_a = {}",
                    self.m_a,
                    self.n_a + self.t_a
                ),
            );
        }
        if self.m_b > self.n_b + self.t_b {
            push(
                None,
                None,
                format!(
                    "m_b = {} exceeds n_b + t_b = {}",
                    self.m_b,
                    self.n_b + self.t_b
                ),
            );
        }
        if self.peak_qubits() > PURE_QUBIT_BUDGET {
            push(
                None,
                None,
                format!(
                    "peak width {} exceeds the {PURE_QUBIT_BUDGET}-qubit budget",
                    self.peak_qubits()
                ),
            );
        }
        for (i, round) in self.rounds.iter().enumerate() {
            let r = i + 1;
            for (side, circuit, expected) in [
                (Side::A, &round.circuit_a, self.width_a()),
                (Side::B, &round.circuit_b, self.width_b()),
            ] {
                if circuit.width != expected {
                    push(
                        Some(r),
                        Some(side),
                        format!("circuit width {} != {expected}", circuit.width),
                    );
                }
                if circuit.ancilla_count != 0 {
                    push(
                        Some(r),
                        Some(side),
                        "round circuits may not declare their own ancillas".into(),
                    );
                }
                for gate in &circuit.gates {
                    if let Err(msg) = gate.check(circuit.width, self.c) {
                        push(Some(r), Some(side), msg);
                    }
                    if let (Some(reg), Some(handle)) = (registry, gate.oracle_handle()) {
                        match reg.get(handle) {
                            None => push(
                                Some(r),
                                Some(side),
                                format!("unknown oracle handle '{handle}'"),
                            ),
                            Some(entry) => {
                                let ok = match (gate, entry) {
                                    (
                                        Gate::OracleF { span, .. } | Gate::OracleFInv { span, .. },
                                        OracleEntry::Permutation { bits, .. },
                                    ) => span.len == *bits,
                                    (
                                        Gate::OracleH { input, output, .. }
                                        | Gate::OracleHInv { input, output, .. },
                                        OracleEntry::Function {
                                            in_bits, out_bits, ..
                                        },
                                    ) => input.len == *in_bits && output.len == *out_bits,
                                    _ => false,
                                };
                                if !ok {
                                    push(
                                        Some(r),
                                        Some(side),
                                        format!("oracle '{handle}' does not match gate shape"),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Gate count, round count, communication bits and EPR inputs.
    pub fn circuit_size(&self) -> ProtocolCost {
        let gates: usize = self
            .rounds
            .iter()
            .map(|r| r.circuit_a.gate_count() + r.circuit_b.gate_count())
            .sum();
        let r = self.rounds.len();
        ProtocolCost {
            gate_count: gates + self.t_a + self.t_b + r * self.c,
            rounds: r,
            comm_bits: r * self.c,
            epr_inputs: self.epr_inputs.unwrap_or(0),
        }
    }

    /// True iff the protocol is one-way (A to B): a single round in which
    /// B's circuit never writes to the communication register. B may read
    /// `C`; diagonal gates on `C` count as reads.
    pub fn is_one_way(&self) -> bool {
        if self.rounds.len() != 1 {
            return false;
        }
        let c_base = self.n_b + self.t_b;
        self.rounds[0]
            .circuit_b
            .gates
            .iter()
            .flat_map(|g| g.written_qubits())
            .all(|q| q < c_base)
    }
}

/// Standard teleportation of an `ell`-qubit payload from A to B.
///
/// A holds the payload on qubits `0..ell` and EPR halves on `ell..2ell`;
/// B holds the matching EPR halves. One round: A Bell-measures each
/// payload/EPR-half pair into the communication register (2 bits per
/// qubit), B applies the Pauli corrections. The payload lands on B's
/// qubits exactly; A outputs nothing.
pub fn teleportation_protocol(ell: usize) -> Result<LoccProtocol, EngineError> {
    let peak = 5 * ell;
    if peak > PURE_QUBIT_BUDGET {
        return Err(EngineError::State(qstate_core::StateError::BudgetExceeded {
            requested: peak,
            limit: PURE_QUBIT_BUDGET,
        }));
    }
    let mut circuit_a = LocalCircuit::empty(4 * ell);
    for i in 0..ell {
        circuit_a.gates.push(Gate::Cnot {
            control: i,
            target: ell + i,
        });
        circuit_a.gates.push(Gate::H(i));
        // Copy the two measurement bits into C: z_i from the payload qubit,
        // x_i from the EPR half.
        circuit_a.gates.push(Gate::Cnot {
            control: i,
            target: 2 * ell + i,
        });
        circuit_a.gates.push(Gate::Cnot {
            control: ell + i,
            target: 3 * ell + i,
        });
    }
    let mut circuit_b = LocalCircuit::empty(3 * ell);
    for i in 0..ell {
        circuit_b.gates.push(Gate::CcX {
            bit: ell + i,
            target: i,
        });
        circuit_b.gates.push(Gate::CcZ { bit: i, target: i });
    }
    Ok(LoccProtocol {
        n_a: 2 * ell,
        n_b: ell,
        t_a: 0,
        t_b: 0,
        c: 2 * ell,
        m_a: 0,
        m_b: ell,
        rounds: vec![Round {
            circuit_a,
            circuit_b,
        }],
        epr_inputs: Some(ell),
    })
}
