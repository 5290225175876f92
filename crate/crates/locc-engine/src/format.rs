//! Line-based protocol text format.
//!
//! ```text
//! LOCC v1; nA=2; nB=1; tA=0; tB=0; c=2; mA=0; mB=1
//! ROUND 1
//! A:
//! CNOT 0 1
//! H 0
//! B:
//! CCX c1 0
//! CCZ c0 0
//! ```
//!
//! Gate order is semantic and never reordered; canonicalization normalizes
//! whitespace and case only. Oracle ranges `lo..hi` are inclusive, and the
//! bare keyword `ORACLE` is accepted as an alias for `ORACLE-F`.

use thiserror::Error;

use crate::{Gate, LocalCircuit, LoccProtocol, Round, Span};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown gate '{name}'")]
    UnknownGate { line: usize, name: String },

    #[error("line {line}: {message}")]
    WidthViolation { line: usize, message: String },

    #[error("missing or malformed header line")]
    BadHeader,
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

/// Canonical textual form of a protocol.
pub fn serialize_protocol(p: &LoccProtocol) -> String {
    let mut out = format!(
        "LOCC v1; nA={}; nB={}; tA={}; tB={}; c={}; mA={}; mB={}\n",
        p.n_a, p.n_b, p.t_a, p.t_b, p.c, p.m_a, p.m_b
    );
    for (i, round) in p.rounds.iter().enumerate() {
        out.push_str(&format!("ROUND {}\n", i + 1));
        out.push_str("A:\n");
        for g in &round.circuit_a.gates {
            out.push_str(&gate_line(g));
            out.push('\n');
        }
        out.push_str("B:\n");
        for g in &round.circuit_b.gates {
            out.push_str(&gate_line(g));
            out.push('\n');
        }
    }
    out
}

fn gate_line(g: &Gate) -> String {
    match g {
        Gate::H(t) => format!("H {t}"),
        Gate::X(t) => format!("X {t}"),
        Gate::Z(t) => format!("Z {t}"),
        Gate::S(t) => format!("S {t}"),
        Gate::T(t) => format!("T {t}"),
        Gate::Cnot { control, target } => format!("CNOT {control} {target}"),
        Gate::Toffoli {
            control0,
            control1,
            target,
        } => format!("TOFFOLI {control0} {control1} {target}"),
        Gate::CcX { bit, target } => format!("CCX c{bit} {target}"),
        Gate::CcZ { bit, target } => format!("CCZ c{bit} {target}"),
        Gate::OracleF { handle, span } => format!("ORACLE-F {handle} {span}"),
        Gate::OracleFInv { handle, span } => format!("ORACLE-FINV {handle} {span}"),
        Gate::OracleH {
            handle,
            input,
            output,
        } => format!("ORACLE-H {handle} {input} {output}"),
        Gate::OracleHInv {
            handle,
            input,
            output,
        } => format!("ORACLE-HINV {handle} {input} {output}"),
    }
}

/// Parse protocol text. Structural gate problems (bad indices, control
/// equal to target, unknown mnemonics) are reported with their line number.
/// Oracle handles are resolved later, at validation or execution time.
pub fn parse_protocol(text: &str) -> Result<LoccProtocol, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_no, header) = lines.next().ok_or(ParseError::BadHeader)?;
    let mut parts = header.split(';').map(str::trim);
    let magic = parts.next().unwrap_or("");
    let mut magic_tokens = magic.split_whitespace();
    if !magic_tokens.next().unwrap_or("").eq_ignore_ascii_case("locc")
        || !magic_tokens.next().unwrap_or("").eq_ignore_ascii_case("v1")
    {
        return Err(ParseError::BadHeader);
    }
    let mut fields = std::collections::HashMap::new();
    for kv in parts {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| syntax(header_no, format!("expected key=value, got '{kv}'")))?;
        let value: usize = v
            .trim()
            .parse()
            .map_err(|_| syntax(header_no, format!("bad integer '{}'", v.trim())))?;
        fields.insert(k.trim().to_ascii_lowercase(), value);
    }
    let field = |name: &str| {
        fields
            .get(name)
            .copied()
            .ok_or_else(|| syntax(header_no, format!("header missing '{name}'")))
    };
    let (n_a, n_b) = (field("na")?, field("nb")?);
    let (t_a, t_b) = (field("ta")?, field("tb")?);
    let c = field("c")?;
    let (m_a, m_b) = (field("ma")?, field("mb")?);
    let width_a = n_a + t_a + c;
    let width_b = n_b + t_b + c;

    #[derive(PartialEq)]
    enum Section {
        None,
        A,
        B,
    }
    let mut rounds: Vec<Round> = Vec::new();
    let mut section = Section::None;
    for (no, line) in lines {
        let upper = line.to_ascii_uppercase();
        if let Some(rest) = upper.strip_prefix("ROUND") {
            let k: usize = rest
                .trim()
                .parse()
                .map_err(|_| syntax(no, format!("bad round label '{}'", rest.trim())))?;
            if k != rounds.len() + 1 {
                return Err(syntax(
                    no,
                    format!("expected ROUND {}, found ROUND {k}", rounds.len() + 1),
                ));
            }
            rounds.push(Round {
                circuit_a: LocalCircuit::empty(width_a),
                circuit_b: LocalCircuit::empty(width_b),
            });
            section = Section::None;
            continue;
        }
        if upper == "A:" {
            if rounds.is_empty() {
                return Err(syntax(no, "'A:' before any ROUND"));
            }
            section = Section::A;
            continue;
        }
        if upper == "B:" {
            if rounds.is_empty() {
                return Err(syntax(no, "'B:' before any ROUND"));
            }
            section = Section::B;
            continue;
        }
        let round = rounds
            .last_mut()
            .ok_or_else(|| syntax(no, "gate line before any ROUND"))?;
        let (circuit, width) = match section {
            Section::A => (&mut round.circuit_a, width_a),
            Section::B => (&mut round.circuit_b, width_b),
            Section::None => return Err(syntax(no, "gate line outside 'A:'/'B:' section")),
        };
        let gate = parse_gate(no, line)?;
        if let Err(message) = gate.check(width, c) {
            return Err(ParseError::WidthViolation { line: no, message });
        }
        circuit.gates.push(gate);
    }

    let protocol = LoccProtocol {
        n_a,
        n_b,
        t_a,
        t_b,
        c,
        m_a,
        m_b,
        rounds,
        epr_inputs: None,
    };
    if protocol.rounds.is_empty() {
        return Err(syntax(header_no, "protocol declares no rounds"));
    }
    Ok(protocol)
}

fn parse_index(no: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| syntax(no, format!("bad qubit index '{tok}'")))
}

fn parse_cbit(no: usize, tok: &str) -> Result<usize, ParseError> {
    let rest = tok
        .strip_prefix('c')
        .or_else(|| tok.strip_prefix('C'))
        .ok_or_else(|| syntax(no, format!("expected classical bit 'c<k>', got '{tok}'")))?;
    rest.parse()
        .map_err(|_| syntax(no, format!("bad classical bit '{tok}'")))
}

fn parse_span(no: usize, tok: &str) -> Result<Span, ParseError> {
    let (lo, hi) = tok
        .split_once("..")
        .ok_or_else(|| syntax(no, format!("expected range 'lo..hi', got '{tok}'")))?;
    let lo = parse_index(no, lo)?;
    let hi = parse_index(no, hi)?;
    if hi < lo {
        return Err(syntax(no, format!("empty range '{tok}'")));
    }
    Ok(Span::inclusive(lo, hi))
}

fn parse_gate(no: usize, line: &str) -> Result<Gate, ParseError> {
    let mut tokens = line.split_whitespace();
    let mnemonic = tokens.next().expect("nonempty line").to_ascii_uppercase();
    let args: Vec<&str> = tokens.collect();
    let arity = |n: usize| {
        if args.len() != n {
            Err(syntax(
                no,
                format!("{mnemonic} expects {n} argument(s), got {}", args.len()),
            ))
        } else {
            Ok(())
        }
    };
    Ok(match mnemonic.as_str() {
        "H" | "X" | "Z" | "S" | "T" => {
            arity(1)?;
            let t = parse_index(no, args[0])?;
            match mnemonic.as_str() {
                "H" => Gate::H(t),
                "X" => Gate::X(t),
                "Z" => Gate::Z(t),
                "S" => Gate::S(t),
                _ => Gate::T(t),
            }
        }
        "CNOT" => {
            arity(2)?;
            Gate::Cnot {
                control: parse_index(no, args[0])?,
                target: parse_index(no, args[1])?,
            }
        }
        "TOFFOLI" => {
            arity(3)?;
            Gate::Toffoli {
                control0: parse_index(no, args[0])?,
                control1: parse_index(no, args[1])?,
                target: parse_index(no, args[2])?,
            }
        }
        "CCX" => {
            arity(2)?;
            Gate::CcX {
                bit: parse_cbit(no, args[0])?,
                target: parse_index(no, args[1])?,
            }
        }
        "CCZ" => {
            arity(2)?;
            Gate::CcZ {
                bit: parse_cbit(no, args[0])?,
                target: parse_index(no, args[1])?,
            }
        }
        "ORACLE" | "ORACLE-F" => {
            arity(2)?;
            Gate::OracleF {
                handle: args[0].to_string(),
                span: parse_span(no, args[1])?,
            }
        }
        "ORACLE-FINV" => {
            arity(2)?;
            Gate::OracleFInv {
                handle: args[0].to_string(),
                span: parse_span(no, args[1])?,
            }
        }
        "ORACLE-H" => {
            arity(3)?;
            Gate::OracleH {
                handle: args[0].to_string(),
                input: parse_span(no, args[1])?,
                output: parse_span(no, args[2])?,
            }
        }
        "ORACLE-HINV" => {
            arity(3)?;
            Gate::OracleHInv {
                handle: args[0].to_string(),
                input: parse_span(no, args[1])?,
                output: parse_span(no, args[2])?,
            }
        }
        _ => {
            return Err(ParseError::UnknownGate {
                line: no,
                name: mnemonic,
            })
        }
    })
}
