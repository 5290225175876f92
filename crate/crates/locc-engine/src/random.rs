//! Random protocol generation for diagnostic sweeps (channel consistency,
//! LOCC monotonicity). Generated protocols keep every qubit in the output
//! so that branches stay pure on pure inputs.

use rand::Rng;

use crate::{Gate, LocalCircuit, LoccProtocol, Round};

#[derive(Debug, Clone, Copy)]
pub struct RandomProtocolConfig {
    pub n_a: usize,
    pub n_b: usize,
    pub max_ancilla: usize,
    pub max_c: usize,
    pub max_rounds: usize,
    pub max_gates_per_circuit: usize,
}

impl Default for RandomProtocolConfig {
    fn default() -> Self {
        RandomProtocolConfig {
            n_a: 2,
            n_b: 2,
            max_ancilla: 1,
            max_c: 2,
            max_rounds: 2,
            max_gates_per_circuit: 6,
        }
    }
}

pub fn random_protocol(rng: &mut impl Rng, cfg: &RandomProtocolConfig) -> LoccProtocol {
    let t_a = rng.random_range(0..=cfg.max_ancilla);
    let t_b = rng.random_range(0..=cfg.max_ancilla);
    let c = rng.random_range(0..=cfg.max_c);
    let r = rng.random_range(1..=cfg.max_rounds);
    let width_a = cfg.n_a + t_a + c;
    let width_b = cfg.n_b + t_b + c;
    let rounds = (0..r)
        .map(|_| Round {
            circuit_a: random_circuit(rng, width_a, c, cfg.max_gates_per_circuit),
            circuit_b: random_circuit(rng, width_b, c, cfg.max_gates_per_circuit),
        })
        .collect();
    LoccProtocol {
        n_a: cfg.n_a,
        n_b: cfg.n_b,
        t_a,
        t_b,
        c,
        m_a: cfg.n_a + t_a,
        m_b: cfg.n_b + t_b,
        rounds,
        epr_inputs: None,
    }
}

fn random_circuit(rng: &mut impl Rng, width: usize, c: usize, max_gates: usize) -> LocalCircuit {
    let mut circuit = LocalCircuit::empty(width);
    let n_gates = rng.random_range(0..=max_gates);
    for _ in 0..n_gates {
        let kind_max = if c > 0 { 9 } else { 7 };
        let gate = match rng.random_range(0..kind_max) {
            0 => Gate::H(rng.random_range(0..width)),
            1 => Gate::X(rng.random_range(0..width)),
            2 => Gate::Z(rng.random_range(0..width)),
            3 => Gate::S(rng.random_range(0..width)),
            4 => Gate::T(rng.random_range(0..width)),
            5 => {
                if width < 2 {
                    continue;
                }
                let control = rng.random_range(0..width);
                let mut target = rng.random_range(0..width);
                while target == control {
                    target = rng.random_range(0..width);
                }
                Gate::Cnot { control, target }
            }
            6 => {
                if width < 3 {
                    continue;
                }
                let mut idx: Vec<usize> = (0..width).collect();
                for i in 0..3 {
                    let j = rng.random_range(i..width);
                    idx.swap(i, j);
                }
                Gate::Toffoli {
                    control0: idx[0],
                    control1: idx[1],
                    target: idx[2],
                }
            }
            7 => Gate::CcX {
                bit: rng.random_range(0..c),
                target: rng.random_range(0..width),
            },
            _ => Gate::CcZ {
                bit: rng.random_range(0..c),
                target: rng.random_range(0..width),
            },
        };
        circuit.gates.push(gate);
    }
    circuit
}
