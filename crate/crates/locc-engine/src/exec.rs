use num_complex::Complex64;
use qstate_core::{DensityMatrix, PureState, Side, StateError, PURE_QUBIT_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeMap;

use crate::{EngineError, LocalCircuit, LoccProtocol, OracleRegistry, ProtocolCost};

/// Hard cap on exhaustive branch enumeration.
pub const BRANCH_BUDGET: usize = 1 << 16;

/// Numerical floor below which a measurement outcome is treated as
/// impossible during enumeration.
const PROB_FLOOR: f64 = 1e-12;

/// What happens to non-output qubits at the end of a protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputMode {
    /// Trace them out; the result may be mixed.
    #[default]
    TraceDiscarded,
    /// Project them onto `|0…0⟩`, failing loudly if that loses weight.
    ProjectDiscardedZero,
}

/// Protocol input: a pure state or a density matrix on `n_a + n_b` qubits.
#[derive(Debug, Clone, Copy)]
pub enum ProtocolInput<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

/// A protocol output, pure whenever the discarded registers factor out.
#[derive(Debug, Clone)]
pub enum OutputState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl OutputState {
    pub fn n_a(&self) -> usize {
        match self {
            OutputState::Pure(s) => s.n_a(),
            OutputState::Mixed(r) => r.n_a(),
        }
    }

    pub fn n_b(&self) -> usize {
        match self {
            OutputState::Pure(s) => s.n_b(),
            OutputState::Mixed(r) => r.n_b(),
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, OutputState::Pure(_))
    }

    pub fn fidelity_with_pure(&self, target: &PureState) -> Result<f64, StateError> {
        match self {
            OutputState::Pure(s) => s.fidelity_with(target),
            OutputState::Mixed(r) => r.fidelity_with_pure(target),
        }
    }

    pub fn to_density(&self) -> Result<DensityMatrix, StateError> {
        match self {
            OutputState::Pure(s) => s.to_density(),
            OutputState::Mixed(r) => Ok(r.clone()),
        }
    }
}

/// Measured communication-register contents of one round, bit 0 first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTranscript {
    pub after_a: Vec<bool>,
    pub after_b: Vec<bool>,
}

pub type Transcript = Vec<RoundTranscript>;

/// One trajectory of an exhaustive execution.
#[derive(Debug, Clone)]
pub struct Branch {
    pub probability: f64,
    pub state: OutputState,
    pub transcript: Transcript,
}

/// Result of a single Monte-Carlo trajectory.
#[derive(Debug, Clone)]
pub struct SampledRun {
    pub state: OutputState,
    pub transcript: Transcript,
    pub cost: ProtocolCost,
}

fn c_bits_vec(value: u64, c: usize) -> Vec<bool> {
    (0..c).map(|j| (value >> (c - 1 - j)) & 1 == 1).collect()
}

fn prepare_working_state(
    p: &LoccProtocol,
    input: &PureState,
) -> Result<PureState, EngineError> {
    if input.n_a() != p.n_a || input.n_b() != p.n_b {
        return Err(EngineError::PartitionMismatch {
            in_a: input.n_a(),
            in_b: input.n_b(),
            p_a: p.n_a,
            p_b: p.n_b,
        });
    }
    if p.peak_qubits() > PURE_QUBIT_BUDGET {
        return Err(EngineError::State(StateError::BudgetExceeded {
            requested: p.peak_qubits(),
            limit: PURE_QUBIT_BUDGET,
        }));
    }
    let state = input
        .append_qubits(Side::A, p.t_a, 0)?
        .append_qubits(Side::B, p.t_b, 0)?;
    Ok(state)
}

/// Apply one side's circuit with the communication register attached, then
/// measure and detach it. Returns every outcome above the probability floor.
fn enumerate_phase(
    state: &PureState,
    side: Side,
    circuit: &LocalCircuit,
    c: usize,
    c_value: u64,
    registry: &OracleRegistry,
) -> Result<Vec<(f64, u64, PureState)>, EngineError> {
    if c == 0 {
        let mut s = state.clone();
        circuit.apply_to_side(&mut s, side, 0, registry)?;
        return Ok(vec![(1.0, 0, s)]);
    }
    let mut s = state.append_qubits(side, c, c_value)?;
    circuit.apply_to_side(&mut s, side, c, registry)?;
    let base = s.side_width(side) - c;
    let c_qubits: Vec<usize> = (base..base + c).collect();
    let probs = s.measure_probabilities(side, &c_qubits)?;
    let mut out = Vec::new();
    for (v, &prob) in probs.iter().enumerate() {
        if prob < PROB_FLOOR {
            continue;
        }
        let (_, collapsed) = s.project_and_remove(side, &c_qubits, v as u64)?;
        out.push((prob, v as u64, collapsed));
    }
    Ok(out)
}

/// As [`enumerate_phase`] but sampling a single outcome.
fn sample_phase(
    state: PureState,
    side: Side,
    circuit: &LocalCircuit,
    c: usize,
    c_value: u64,
    registry: &OracleRegistry,
    rng: &mut ChaCha12Rng,
) -> Result<(u64, PureState), EngineError> {
    if c == 0 {
        let mut s = state;
        circuit.apply_to_side(&mut s, side, 0, registry)?;
        return Ok((0, s));
    }
    let mut s = state.append_qubits(side, c, c_value)?;
    circuit.apply_to_side(&mut s, side, c, registry)?;
    let base = s.side_width(side) - c;
    let c_qubits: Vec<usize> = (base..base + c).collect();
    let probs = s.measure_probabilities(side, &c_qubits)?;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut outcome = None;
    for (v, &prob) in probs.iter().enumerate() {
        acc += prob;
        if u < acc && prob > 0.0 {
            outcome = Some(v as u64);
            break;
        }
    }
    let outcome = outcome.unwrap_or_else(|| {
        // Rounding pushed the cumulative below 1; take the last possible one.
        probs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &p)| p > 0.0)
            .map(|(v, _)| v as u64)
            .expect("normalized state has at least one outcome")
    });
    let (_, collapsed) = s.project_and_remove(side, &c_qubits, outcome)?;
    Ok((outcome, collapsed))
}

fn extract_output(
    p: &LoccProtocol,
    state: &PureState,
    mode: OutputMode,
) -> Result<OutputState, EngineError> {
    let wa = p.n_a + p.t_a;
    let wb = p.n_b + p.t_b;
    let ka = wa - p.m_a;
    let kb = wb - p.m_b;
    if ka == 0 && kb == 0 {
        return Ok(OutputState::Pure(state.clone()));
    }
    match mode {
        OutputMode::ProjectDiscardedZero => {
            let mut weight = 1.0;
            let mut s = state.clone();
            for (side, m, w) in [(Side::A, p.m_a, wa), (Side::B, p.m_b, wb)] {
                if w > m {
                    let qubits: Vec<usize> = (m..w).collect();
                    match s.project_and_remove(side, &qubits, 0) {
                        Ok((pr, s2)) => {
                            weight *= pr;
                            s = s2;
                        }
                        Err(StateError::ZeroProbabilityOutcome) => {
                            return Err(EngineError::State(StateError::DiscardNotZero {
                                weight: 0.0,
                            }))
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
            }
            if weight < 1.0 - 1e-9 {
                return Err(EngineError::State(StateError::DiscardNotZero { weight }));
            }
            Ok(OutputState::Pure(s))
        }
        OutputMode::TraceDiscarded => {
            // Group amplitudes into columns indexed by the discarded
            // registers; one column (or a rank-one Gram matrix) means the
            // output is still pure.
            let b_mask = (1usize << wb) - 1;
            let ka_mask = (1usize << ka) - 1;
            let kb_mask = (1usize << kb) - 1;
            let out_dim = 1usize << (p.m_a + p.m_b);
            let mut columns: BTreeMap<usize, Vec<(usize, Complex64)>> = BTreeMap::new();
            for (g, &amp) in state.amplitudes().iter().enumerate() {
                if amp == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let a = g >> wb;
                let b = g & b_mask;
                let out_idx = ((a >> ka) << p.m_b) | (b >> kb);
                let rest_idx = ((a & ka_mask) << kb) | (b & kb_mask);
                columns.entry(rest_idx).or_default().push((out_idx, amp));
            }
            if columns.len() == 1 {
                let col = columns.into_values().next().unwrap();
                let mut amps = vec![Complex64::new(0.0, 0.0); out_dim];
                for (i, z) in col {
                    amps[i] = z;
                }
                return Ok(OutputState::Pure(PureState::from_amplitudes_normalized(
                    p.m_a, p.m_b, amps,
                )?));
            }
            let rho = {
                let mut m = nalgebra::DMatrix::<Complex64>::zeros(out_dim, out_dim);
                for col in columns.values() {
                    for &(i, zi) in col {
                        for &(j, zj) in col {
                            m[(i, j)] += zi * zj.conj();
                        }
                    }
                }
                DensityMatrix::from_matrix_unchecked(p.m_a, p.m_b, m)?
            };
            let purity = rho.purity();
            if purity >= 1.0 - 1e-9 {
                // Rank one: read the dominant vector off a nonzero column.
                let dim = rho.dim();
                let mut best = 0;
                for j in 1..dim {
                    if rho.matrix()[(j, j)].re > rho.matrix()[(best, best)].re {
                        best = j;
                    }
                }
                let amps: Vec<Complex64> = (0..dim).map(|i| rho.matrix()[(i, best)]).collect();
                return Ok(OutputState::Pure(PureState::from_amplitudes_normalized(
                    p.m_a, p.m_b, amps,
                )?));
            }
            Ok(OutputState::Mixed(rho))
        }
    }
}

fn branch_pure(
    p: &LoccProtocol,
    registry: &OracleRegistry,
    mode: OutputMode,
    state: PureState,
    c_value: u64,
    round: usize,
    prob: f64,
    transcript: Transcript,
    out: &mut Vec<Branch>,
) -> Result<(), EngineError> {
    if round == p.rounds.len() {
        if out.len() >= BRANCH_BUDGET {
            return Err(EngineError::BranchBudget {
                limit: BRANCH_BUDGET,
            });
        }
        let output = extract_output(p, &state, mode)?;
        out.push(Branch {
            probability: prob,
            state: output,
            transcript,
        });
        return Ok(());
    }
    let spec = &p.rounds[round];
    for (pa, ca, sa) in enumerate_phase(&state, Side::A, &spec.circuit_a, p.c, c_value, registry)?
    {
        for (pb, cb, sb) in
            enumerate_phase(&sa, Side::B, &spec.circuit_b, p.c, ca, registry)?
        {
            let mut t = transcript.clone();
            t.push(RoundTranscript {
                after_a: c_bits_vec(ca, p.c),
                after_b: c_bits_vec(cb, p.c),
            });
            branch_pure(
                p,
                registry,
                mode,
                sb,
                cb,
                round + 1,
                prob * pa * pb,
                t,
                out,
            )?;
        }
    }
    Ok(())
}

/// Exhaustive execution: every measurement trajectory with its exact
/// probability. Probabilities sum to 1, and the probability-weighted
/// mixture of the branch states is the channel output.
pub fn execute_branches(
    p: &LoccProtocol,
    registry: &OracleRegistry,
    input: ProtocolInput,
    mode: OutputMode,
) -> Result<Vec<Branch>, EngineError> {
    if p.rounds.len() * p.c > 16 {
        return Err(EngineError::BranchBudget {
            limit: BRANCH_BUDGET,
        });
    }
    match input {
        ProtocolInput::Pure(s) => {
            let base = prepare_working_state(p, s)?;
            let mut out = Vec::new();
            branch_pure(p, registry, mode, base, 0, 0, 1.0, Vec::new(), &mut out)?;
            Ok(out)
        }
        ProtocolInput::Mixed(rho) => {
            // Spectral mixture of pure-input runs.
            let mut out = Vec::new();
            for (w, psi) in rho.eigen_decompose()? {
                let base = prepare_working_state(p, &psi)?;
                let mut part = Vec::new();
                branch_pure(p, registry, mode, base, 0, 0, w, Vec::new(), &mut part)?;
                out.extend(part);
                if out.len() > BRANCH_BUDGET {
                    return Err(EngineError::BranchBudget {
                        limit: BRANCH_BUDGET,
                    });
                }
            }
            Ok(out)
        }
    }
}

/// One Monte-Carlo trajectory, deterministic given the seed.
pub fn execute_sampled(
    p: &LoccProtocol,
    registry: &OracleRegistry,
    input: ProtocolInput,
    seed: u64,
    mode: OutputMode,
) -> Result<SampledRun, EngineError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let pure_input;
    let input_state: &PureState = match input {
        ProtocolInput::Pure(s) => s,
        ProtocolInput::Mixed(rho) => {
            // Sample an eigenstate of the input density.
            let decomp = rho.eigen_decompose()?;
            let total: f64 = decomp.iter().map(|(w, _)| w).sum();
            let mut u: f64 = rng.random::<f64>() * total;
            let mut chosen = None;
            for (w, psi) in decomp {
                u -= w;
                if u <= 0.0 {
                    chosen = Some(psi);
                    break;
                }
            }
            pure_input = chosen.expect("nonempty spectral decomposition");
            &pure_input
        }
    };
    let mut state = prepare_working_state(p, input_state)?;
    let mut c_value = 0u64;
    let mut transcript = Vec::with_capacity(p.rounds.len());
    for round in &p.rounds {
        let (ca, sa) = sample_phase(
            state,
            Side::A,
            &round.circuit_a,
            p.c,
            c_value,
            registry,
            &mut rng,
        )?;
        let (cb, sb) = sample_phase(
            sa,
            Side::B,
            &round.circuit_b,
            p.c,
            ca,
            registry,
            &mut rng,
        )?;
        transcript.push(RoundTranscript {
            after_a: c_bits_vec(ca, p.c),
            after_b: c_bits_vec(cb, p.c),
        });
        state = sb;
        c_value = cb;
    }
    Ok(SampledRun {
        state: extract_output(p, &state, mode)?,
        transcript,
        cost: p.circuit_size(),
    })
}

/// The channel output `Γ(input)`: probability-weighted mixture over all
/// branches. Needs the output to fit the density budget.
pub fn channel_output(
    p: &LoccProtocol,
    registry: &OracleRegistry,
    input: ProtocolInput,
    mode: OutputMode,
) -> Result<DensityMatrix, EngineError> {
    let branches = execute_branches(p, registry, input, mode)?;
    let parts: Vec<(f64, DensityMatrix)> = branches
        .iter()
        .map(|b| Ok((b.probability, b.state.to_density()?)))
        .collect::<Result<_, StateError>>()?;
    Ok(DensityMatrix::mixture(&parts)?)
}
