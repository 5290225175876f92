use locc_engine::{
    channel_output, execute_branches, execute_sampled, parse_protocol, random_protocol,
    serialize_protocol, teleportation_protocol, EngineError, Gate, LocalCircuit, LoccProtocol,
    OracleRegistry, OutputMode, OutputState, ParseError, ProtocolInput, RandomProtocolConfig,
    Round,
};
use num_complex::Complex64;
use qstate_core::{PureState, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

const TELEPORT_FIXTURE: &str = include_str!("fixtures/teleport_1.locc");

fn empty_registry() -> OracleRegistry {
    OracleRegistry::new()
}

fn gaussian(rng: &mut ChaCha12Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn random_pure(rng: &mut ChaCha12Rng, n_a: usize, n_b: usize) -> PureState {
    let len = 1usize << (n_a + n_b);
    let amps: Vec<Complex64> = (0..len)
        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
        .collect();
    PureState::from_amplitudes_normalized(n_a, n_b, amps).unwrap()
}

fn identity_protocol(n_a: usize, n_b: usize) -> LoccProtocol {
    LoccProtocol {
        n_a,
        n_b,
        t_a: 0,
        t_b: 0,
        c: 0,
        m_a: n_a,
        m_b: n_b,
        rounds: vec![Round {
            circuit_a: LocalCircuit::empty(n_a),
            circuit_b: LocalCircuit::empty(n_b),
        }],
        epr_inputs: None,
    }
}

/// One round, one ancilla on A prepared in |+> and copied into the single
/// communication bit.
fn coin_flip_protocol() -> LoccProtocol {
    let mut circuit_a = LocalCircuit::empty(3); // n_a=1, t_a=1, c=1
    circuit_a.gates.push(Gate::H(1));
    circuit_a.gates.push(Gate::Cnot {
        control: 1,
        target: 2,
    });
    LoccProtocol {
        n_a: 1,
        n_b: 1,
        t_a: 1,
        t_b: 0,
        c: 1,
        m_a: 2,
        m_b: 1,
        rounds: vec![Round {
            circuit_a,
            circuit_b: LocalCircuit::empty(2),
        }],
        epr_inputs: None,
    }
}

#[test]
fn header_only_protocol_parses_with_zero_cost() {
    let p = parse_protocol("LOCC v1; nA=1; nB=1; tA=0; tB=0; c=0; mA=1; mB=1\nROUND 1\n")
        .unwrap();
    assert!(p.validate().is_empty());
    let cost = p.circuit_size();
    assert_eq!(cost.gate_count, 0);
    assert_eq!(cost.comm_bits, 0);
    assert_eq!(cost.rounds, 1);
}

#[test]
fn cnot_with_control_equal_to_target_is_rejected_with_line() {
    let text = "LOCC v1; nA=2; nB=1; tA=0; tB=0; c=0; mA=2; mB=1\nROUND 1\nA:\nCNOT 1 1\n";
    match parse_protocol(text) {
        Err(ParseError::WidthViolation { line: 4, message }) => {
            assert!(message.contains("control equals target"), "{message}");
        }
        other => panic!("expected width violation on line 4, got {other:?}"),
    }
}

#[test]
fn unknown_gate_is_reported_with_its_name() {
    let text = "LOCC v1; nA=1; nB=1; tA=0; tB=0; c=0; mA=1; mB=1\nROUND 1\nA:\nCNOTT 0 1\n";
    match parse_protocol(text) {
        Err(ParseError::UnknownGate { line: 4, name }) => assert_eq!(name, "CNOTT"),
        other => panic!("expected unknown gate, got {other:?}"),
    }
}

#[test]
fn teleportation_fixture_is_golden_and_round_trips() {
    let built = serialize_protocol(&teleportation_protocol(1).unwrap());
    assert_eq!(built, TELEPORT_FIXTURE);
    let parsed = parse_protocol(TELEPORT_FIXTURE).unwrap();
    assert_eq!(serialize_protocol(&parsed), TELEPORT_FIXTURE);
}

#[test]
fn parsing_is_case_and_whitespace_insensitive_and_canonicalizing() {
    let messy = "locc V1; Na=2; nb=1;   ta=0; tb=0; C=2; ma=0; mb=1\nround 1\nA:\n cnot 0 1\n h 0  # comment\nCNOT 0 2\nCNOT 1 3\nB:\nccx C1 0\nccz c0 0\n";
    let parsed = parse_protocol(messy).unwrap();
    assert_eq!(serialize_protocol(&parsed), TELEPORT_FIXTURE);
    // Canonicalization is idempotent.
    let again = parse_protocol(&serialize_protocol(&parsed)).unwrap();
    assert_eq!(serialize_protocol(&again), TELEPORT_FIXTURE);
}

#[test]
fn serialize_then_parse_is_identity_on_random_protocols() {
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let cfg = RandomProtocolConfig::default();
    for _ in 0..50 {
        let p = random_protocol(&mut rng, &cfg);
        let text = serialize_protocol(&p);
        let back = parse_protocol(&text).unwrap();
        assert_eq!(back, p);
    }
}

#[test]
fn validate_flags_output_width_and_circuit_width() {
    let p = teleportation_protocol(1).unwrap();
    assert!(p.validate().is_empty());

    let mut bad = p.clone();
    bad.m_a = 3;
    let violations = bad.validate();
    assert_eq!(violations.len(), 1);
    assert!(violations[0].message.contains("m_a"));

    let mut bad = p.clone();
    bad.rounds[0].circuit_b.width = 5;
    let violations = bad.validate();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0].round, Some(1));
    assert!(violations[0].to_string().contains("round 1"));
}

#[test]
fn identity_protocol_returns_its_input() {
    let mut rng = ChaCha12Rng::seed_from_u64(9);
    let input = random_pure(&mut rng, 1, 1);
    let p = identity_protocol(1, 1);
    let run = execute_sampled(
        &p,
        &empty_registry(),
        ProtocolInput::Pure(&input),
        3,
        OutputMode::TraceDiscarded,
    )
    .unwrap();
    match run.state {
        OutputState::Pure(s) => assert_eq!(s.amplitudes(), input.amplitudes()),
        OutputState::Mixed(_) => panic!("identity output should be pure"),
    }

    let branches = execute_branches(
        &p,
        &empty_registry(),
        ProtocolInput::Pure(&input),
        OutputMode::TraceDiscarded,
    )
    .unwrap();
    assert_eq!(branches.len(), 1);
    assert!((branches[0].probability - 1.0).abs() < 1e-12);
}

#[test]
fn measured_plus_ancilla_is_uniform_over_seeds() {
    let p = coin_flip_protocol();
    let input = PureState::zero_state(1, 1).unwrap();
    let trials = 10_000;
    let mut ones = 0usize;
    for seed in 0..trials {
        let run = execute_sampled(
            &p,
            &empty_registry(),
            ProtocolInput::Pure(&input),
            seed as u64,
            OutputMode::TraceDiscarded,
        )
        .unwrap();
        if run.transcript[0].after_a[0] {
            ones += 1;
        }
    }
    let expected = trials as f64 / 2.0;
    let chi2 = ((ones as f64 - expected).powi(2) + ((trials - ones) as f64 - expected).powi(2))
        / expected;
    assert!(chi2 < 10.83, "chi-square {chi2} too large (ones = {ones})");
}

#[test]
fn teleportation_moves_the_payload_for_every_seed() {
    let mut rng = ChaCha12Rng::seed_from_u64(21);
    let payload = random_pure(&mut rng, 1, 0);
    let input = payload.tensor(&PureState::epr_pairs(1).unwrap()).unwrap();
    let p = teleportation_protocol(1).unwrap();
    let target = payload.repartition(0, 1).unwrap();
    for seed in 0..64 {
        let run = execute_sampled(
            &p,
            &empty_registry(),
            ProtocolInput::Pure(&input),
            seed,
            OutputMode::TraceDiscarded,
        )
        .unwrap();
        let f = run.state.fidelity_with_pure(&target).unwrap();
        assert!((f - 1.0).abs() < 1e-9, "seed {seed}: fidelity {f}");
    }
}

#[test]
fn teleportation_has_four_uniform_branches() {
    let mut rng = ChaCha12Rng::seed_from_u64(23);
    let payload = random_pure(&mut rng, 1, 0);
    let input = payload.tensor(&PureState::epr_pairs(1).unwrap()).unwrap();
    let p = teleportation_protocol(1).unwrap();
    let target = payload.repartition(0, 1).unwrap();
    let branches = execute_branches(
        &p,
        &empty_registry(),
        ProtocolInput::Pure(&input),
        OutputMode::TraceDiscarded,
    )
    .unwrap();
    assert_eq!(branches.len(), 4);
    let mut total = 0.0;
    for b in &branches {
        assert!((b.probability - 0.25).abs() < 1e-9);
        total += b.probability;
        assert!((b.state.fidelity_with_pure(&target).unwrap() - 1.0).abs() < 1e-9);
        assert!(b.state.is_pure());
    }
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn teleportation_of_two_qubits_is_exact() {
    let mut rng = ChaCha12Rng::seed_from_u64(29);
    let payload = random_pure(&mut rng, 2, 0);
    let input = payload.tensor(&PureState::epr_pairs(2).unwrap()).unwrap();
    let p = teleportation_protocol(2).unwrap();
    assert_eq!(p.circuit_size().comm_bits, 4);
    let target = payload.repartition(0, 2).unwrap();
    let run = execute_sampled(
        &p,
        &empty_registry(),
        ProtocolInput::Pure(&input),
        7,
        OutputMode::TraceDiscarded,
    )
    .unwrap();
    let f = run.state.fidelity_with_pure(&target).unwrap();
    assert!((f - 1.0).abs() < 1e-9, "fidelity {f}");
}

#[test]
fn teleportation_budget_is_enforced() {
    assert!(teleportation_protocol(4).is_ok());
    match teleportation_protocol(5) {
        Err(EngineError::State(qstate_core::StateError::BudgetExceeded { .. })) => {}
        other => panic!("expected budget error, got {other:?}"),
    }
}

#[test]
fn circuit_size_follows_the_counting_convention() {
    let p = identity_protocol(1, 1);
    assert_eq!(p.circuit_size().gate_count, 0);

    // 5 gates, t_a = 2, t_b = 1, r = 1, c = 2 -> 5 + 3 + 2 = 10.
    let mut circuit_a = LocalCircuit::empty(5); // 1 + 2 + 2
    for _ in 0..3 {
        circuit_a.gates.push(Gate::X(0));
    }
    let mut circuit_b = LocalCircuit::empty(4); // 1 + 1 + 2
    circuit_b.gates.push(Gate::H(0));
    circuit_b.gates.push(Gate::Z(1));
    let p = LoccProtocol {
        n_a: 1,
        n_b: 1,
        t_a: 2,
        t_b: 1,
        c: 2,
        m_a: 1,
        m_b: 1,
        rounds: vec![Round {
            circuit_a,
            circuit_b,
        }],
        epr_inputs: None,
    };
    let cost = p.circuit_size();
    assert_eq!(cost.gate_count, 10);
    assert_eq!(cost.comm_bits, 2);
}

#[test]
fn one_way_detection() {
    assert!(teleportation_protocol(1).unwrap().is_one_way());
    assert!(teleportation_protocol(2).unwrap().is_one_way());

    let mut two_rounds = teleportation_protocol(1).unwrap();
    let round = two_rounds.rounds[0].clone();
    two_rounds.rounds.push(round);
    assert!(!two_rounds.is_one_way());

    // B flipping a communication bit is a write.
    let mut writes_back = teleportation_protocol(1).unwrap();
    writes_back.rounds[0].circuit_b.gates.push(Gate::X(1)); // C starts at index 1 on side B
    assert!(!writes_back.is_one_way());

    // A diagonal gate on C is only a read.
    let mut reads_only = teleportation_protocol(1).unwrap();
    reads_only.rounds[0].circuit_b.gates.push(Gate::Z(1));
    assert!(reads_only.is_one_way());
}

#[test]
fn unknown_oracle_handle_fails_at_execution_and_validation() {
    let mut circuit_a = LocalCircuit::empty(2);
    circuit_a.gates.push(Gate::OracleF {
        handle: "nope".into(),
        span: locc_engine::Span::new(0, 2),
    });
    let p = LoccProtocol {
        n_a: 2,
        n_b: 1,
        t_a: 0,
        t_b: 0,
        c: 0,
        m_a: 2,
        m_b: 1,
        rounds: vec![Round {
            circuit_a,
            circuit_b: LocalCircuit::empty(1),
        }],
        epr_inputs: None,
    };
    let reg = empty_registry();
    assert_eq!(p.validate_with_registry(&reg).len(), 1);
    let input = PureState::zero_state(2, 1).unwrap();
    match execute_sampled(&p, &reg, ProtocolInput::Pure(&input), 0, OutputMode::TraceDiscarded) {
        Err(EngineError::UnknownOracle(name)) => assert_eq!(name, "nope"),
        other => panic!("expected unknown oracle, got {other:?}"),
    }
}

#[test]
fn exact_and_sampled_channels_agree_on_fixtures_within_three_sigma() {
    let mut rng = ChaCha12Rng::seed_from_u64(31);
    let cfg = RandomProtocolConfig::default();
    let mut fixtures: Vec<(LoccProtocol, PureState)> = vec![
        (coin_flip_protocol(), random_pure(&mut rng, 1, 1)),
        (teleportation_protocol(1).unwrap(), {
            let payload = random_pure(&mut rng, 1, 0);
            payload.tensor(&PureState::epr_pairs(1).unwrap()).unwrap()
        }),
    ];
    for _ in 0..3 {
        let p = random_protocol(&mut rng, &cfg);
        let input = random_pure(&mut rng, p.n_a, p.n_b);
        fixtures.push((p, input));
    }
    let reg = empty_registry();
    for (idx, (p, input)) in fixtures.iter().enumerate() {
        let target = random_pure(&mut rng, p.m_a, p.m_b);
        let branches =
            execute_branches(p, &reg, ProtocolInput::Pure(input), OutputMode::TraceDiscarded)
                .unwrap();
        let exact: f64 = branches
            .iter()
            .map(|b| b.probability * b.state.fidelity_with_pure(&target).unwrap())
            .sum();
        let trials = 3000usize;
        let mut samples = Vec::with_capacity(trials);
        for seed in 0..trials {
            let run = execute_sampled(
                p,
                &reg,
                ProtocolInput::Pure(input),
                (idx as u64) << 32 | seed as u64,
                OutputMode::TraceDiscarded,
            )
            .unwrap();
            samples.push(run.state.fidelity_with_pure(&target).unwrap());
        }
        let mean = samples.iter().sum::<f64>() / trials as f64;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
            / (trials as f64 - 1.0);
        let sigma = (var / trials as f64).sqrt();
        assert!(
            (mean - exact).abs() <= 3.0 * sigma + 1e-9,
            "fixture {idx}: exact {exact}, sampled {mean} ± {sigma}"
        );
    }
}

#[test]
fn branch_probabilities_sum_to_one_and_mixture_matches_channel() {
    let mut rng = ChaCha12Rng::seed_from_u64(37);
    let cfg = RandomProtocolConfig::default();
    let reg = empty_registry();
    for _ in 0..10 {
        let p = random_protocol(&mut rng, &cfg);
        let input = random_pure(&mut rng, p.n_a, p.n_b);
        let branches =
            execute_branches(&p, &reg, ProtocolInput::Pure(&input), OutputMode::TraceDiscarded)
                .unwrap();
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        assert!((total - 1.0).abs() < 1e-9, "probabilities sum to {total}");
        let gamma =
            channel_output(&p, &reg, ProtocolInput::Pure(&input), OutputMode::TraceDiscarded)
                .unwrap();
        assert!((gamma.trace().re - 1.0).abs() < 1e-9);
        gamma.validate().unwrap();
    }
}

#[test]
fn unitary_only_protocols_preserve_schmidt_coefficients() {
    let mut rng = ChaCha12Rng::seed_from_u64(41);
    let cfg = RandomProtocolConfig {
        max_c: 0,
        ..RandomProtocolConfig::default()
    };
    let reg = empty_registry();
    for _ in 0..20 {
        let p = random_protocol(&mut rng, &cfg);
        let input = random_pure(&mut rng, p.n_a, p.n_b);
        let before: Vec<f64> = input
            .schmidt()
            .coefficients
            .into_iter()
            .filter(|&c| c > 1e-12)
            .collect();
        let branches =
            execute_branches(&p, &reg, ProtocolInput::Pure(&input), OutputMode::TraceDiscarded)
                .unwrap();
        assert_eq!(branches.len(), 1);
        let OutputState::Pure(out) = &branches[0].state else {
            panic!("unitary-only protocol must output a pure state");
        };
        let after: Vec<f64> = out
            .schmidt()
            .coefficients
            .into_iter()
            .filter(|&c| c > 1e-12)
            .collect();
        assert_eq!(before.len(), after.len());
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn project_discard_mode_fails_loudly_on_entangled_garbage() {
    // One round; A entangles its ancilla with the input and keeps only the
    // input qubit. Projecting the ancilla onto |0> then loses weight.
    let mut circuit_a = LocalCircuit::empty(2);
    circuit_a.gates.push(Gate::H(0));
    circuit_a.gates.push(Gate::Cnot {
        control: 0,
        target: 1,
    });
    let p = LoccProtocol {
        n_a: 1,
        n_b: 1,
        t_a: 1,
        t_b: 0,
        c: 0,
        m_a: 1,
        m_b: 1,
        rounds: vec![Round {
            circuit_a,
            circuit_b: LocalCircuit::empty(1),
        }],
        epr_inputs: None,
    };
    let input = PureState::zero_state(1, 1).unwrap();
    let reg = empty_registry();
    match execute_sampled(
        &p,
        &reg,
        ProtocolInput::Pure(&input),
        0,
        OutputMode::ProjectDiscardedZero,
    ) {
        Err(EngineError::State(qstate_core::StateError::DiscardNotZero { weight })) => {
            assert!(weight < 0.6, "weight {weight}");
        }
        other => panic!("expected discard failure, got {other:?}"),
    }
    // Trace mode handles the same protocol by returning a mixed state.
    let run = execute_sampled(
        &p,
        &reg,
        ProtocolInput::Pure(&input),
        0,
        OutputMode::TraceDiscarded,
    )
    .unwrap();
    assert!(!run.state.is_pure());
}

#[test]
fn mixed_inputs_run_through_their_spectral_decomposition() {
    let rho = qstate_core::DensityMatrix::maximally_mixed(1, 1).unwrap();
    let p = identity_protocol(1, 1);
    let reg = empty_registry();
    let branches =
        execute_branches(&p, &reg, ProtocolInput::Mixed(&rho), OutputMode::TraceDiscarded)
            .unwrap();
    assert_eq!(branches.len(), 4);
    let total: f64 = branches.iter().map(|b| b.probability).sum();
    assert!((total - 1.0).abs() < 1e-9);
    let gamma =
        channel_output(&p, &reg, ProtocolInput::Mixed(&rho), OutputMode::TraceDiscarded).unwrap();
    assert!(gamma.frobenius_distance(&rho) < 1e-9);
}
