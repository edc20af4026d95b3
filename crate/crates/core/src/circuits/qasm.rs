//! OpenQASM 3 style text export and the matching importer.
//!
//! Named gates map to their `stdgates.inc` mnemonics (gates outside that set
//! are expanded: `r -> h s h`, `b -> s h`, ...), controls become `ctrl @` /
//! `ctrl(k) @` modifiers with the control qubits listed first. Matrix
//! payloads are only exportable when the op touches at most two wires:
//!
//! * one target: `U(θ, φ, λ)` plus the global phase (`gphase`, or a `p` on
//!   the control qubit when controlled);
//! * two targets, no controls: a `pragma qfrac.unitary` line carrying the
//!   sixteen entries.
//!
//! Anything wider makes the export fail with a list of the offending ops.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::gates::NamedGate;
use super::ir::{Circuit, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::linalg::{cis, format_complex, parse_complex, Complex, ComplexMatrix};

const PRAGMA_UNITARY: &str = "pragma qfrac.unitary";

/// `U(θ, φ, λ)` as defined by OpenQASM 3.
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> ComplexMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    ComplexMatrix::from_rows([[Complex::new(c, 0.0), -cis(lambda) * s], [cis(phi) * s, cis(phi + lambda) * c]])
}

/// Splits a 2x2 unitary into `e^{iγ} U(θ, φ, λ)`; returns `(θ, φ, λ, γ)`.
pub fn u3_angles(m: &ComplexMatrix) -> (f64, f64, f64, f64) {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let theta = 2.0 * c.norm().atan2(a.norm());
    const EPS: f64 = 1e-12;
    if c.norm() < EPS {
        let g = a.arg();
        (theta, 0.0, d.arg() - g, g)
    } else if a.norm() < EPS {
        let g = c.arg();
        (theta, 0.0, (-b).arg() - g, g)
    } else {
        let g = a.arg();
        (theta, c.arg() - g, (-b).arg() - g, g)
    }
}

fn angle(x: f64) -> String {
    format!("{x:?}")
}

fn qubits(ws: impl IntoIterator<Item = usize>) -> String {
    ws.into_iter().map(|w| format!("q[{w}]")).collect::<Vec<_>>().join(", ")
}

fn modifier(controls: usize) -> String {
    match controls {
        0 => String::new(),
        1 => "ctrl @ ".into(),
        k => format!("ctrl({k}) @ "),
    }
}

fn named_sequence(g: NamedGate) -> &'static [&'static str] {
    match g {
        NamedGate::R => &["h", "s", "h"],
        NamedGate::Rdg => &["h", "sdg", "h"],
        NamedGate::B => &["s", "h"],
        NamedGate::Bdg => &["h", "sdg"],
        NamedGate::X => &["x"],
        NamedGate::Y => &["y"],
        NamedGate::Z => &["z"],
        NamedGate::H => &["h"],
        NamedGate::S => &["s"],
        NamedGate::Sdg => &["sdg"],
        NamedGate::Swap => &["swap"],
    }
}

fn export_op(out: &mut String, op: &GateOp) {
    let wires = qubits(op.wires());
    let ctrl = modifier(op.controls.len());
    match &op.kind {
        GateKind::Named(g) => {
            for name in named_sequence(*g) {
                let _ = writeln!(out, "{ctrl}{name} {wires};");
            }
        }
        GateKind::Phase(phi) => {
            let _ = writeln!(out, "{ctrl}p({}) {wires};", angle(*phi));
        }
        GateKind::Matrix(m) if op.targets.len() == 1 => {
            let (t, p, l, g) = u3_angles(m);
            let _ = writeln!(out, "{ctrl}U({}, {}, {}) {wires};", angle(t), angle(p), angle(l));
            match op.controls.first() {
                None => {
                    let _ = writeln!(out, "gphase({});", angle(g));
                }
                Some(&c) => {
                    let _ = writeln!(out, "p({}) q[{c}];", angle(g));
                }
            }
        }
        GateKind::Matrix(m) => {
            let entries: Vec<String> = m.as_slice().iter().map(|z| format_complex(*z)).collect();
            let _ = writeln!(
                out,
                "{PRAGMA_UNITARY} {} {}",
                op.targets.iter().map(|w| format!("q[{w}]")).collect::<Vec<_>>().join(" "),
                entries.join(" ")
            );
        }
    }
}

/// Exports `c` as OpenQASM 3 text; circuit marks become comment lines.
pub fn export_qasm(c: &Circuit) -> Result<String> {
    let offending: Vec<String> = c
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, op)| {
            matches!(op.kind, GateKind::Matrix(_))
                && (op.width() > 2 || (op.targets.len() == 2 && !op.controls.is_empty()))
        })
        .map(|(i, op)| {
            format!(
                "op {i}: matrix gate on {} qubit(s) (targets {:?}, controls {:?})",
                op.width(),
                op.targets,
                op.controls
            )
        })
        .collect();
    if !offending.is_empty() {
        return Err(Error::Export(format!(
            "{} matrix gate(s) wider than 2 qubits:\n  {}",
            offending.len(),
            offending.join("\n  ")
        )));
    }

    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n// wire 0 is the most significant qubit\n");
    let _ = writeln!(out, "qubit[{}] q;", c.num_qubits());
    let mut marks = c.marks().iter().peekable();
    for (i, op) in c.ops().iter().enumerate() {
        while let Some((_, label)) = marks.next_if(|(at, _)| *at == i) {
            let _ = writeln!(out, "// {label}");
        }
        export_op(&mut out, op);
    }
    for (_, label) in marks {
        let _ = writeln!(out, "// {label}");
    }
    Ok(out)
}

fn parse_angle(tok: &str, line: usize) -> Result<f64> {
    let t = tok.trim();
    let err = || Error::Parse { line, message: format!("bad angle `{t}`") };
    match t {
        "pi" | "π" => Ok(PI),
        "-pi" | "-π" => Ok(-PI),
        _ => t.parse::<f64>().map_err(|_| err()),
    }
}

fn parse_qubit(tok: &str, line: usize) -> Result<usize> {
    let t = tok.trim();
    t.strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|i| i.trim().parse().ok())
        .ok_or_else(|| Error::Parse { line, message: format!("bad qubit `{t}`") })
}

fn parse_statement(stmt: &str, line: usize, num_qubits: usize) -> Result<GateOp> {
    let perr = |message: String| Error::Parse { line, message };
    let mut rest = stmt.trim();
    let mut num_controls = 0usize;
    while let Some(after) = rest.strip_prefix("ctrl") {
        let after = after.trim_start();
        let (k, after) = if let Some(inner) = after.strip_prefix('(') {
            let (k, tail) = inner.split_once(')').ok_or_else(|| perr("unclosed ctrl(".into()))?;
            (k.trim().parse::<usize>().map_err(|_| perr(format!("bad control count `{k}`")))?, tail)
        } else {
            (1, after)
        };
        rest = after.trim_start().strip_prefix('@').ok_or_else(|| perr("expected `@` after ctrl".into()))?.trim_start();
        num_controls += k;
    }

    let name_end = rest.find(|ch: char| ch == '(' || ch.is_whitespace()).unwrap_or(rest.len());
    let name = &rest[..name_end];
    rest = rest[name_end..].trim_start();
    let mut params = Vec::new();
    if let Some(inner) = rest.strip_prefix('(') {
        let (ps, tail) = inner.split_once(')').ok_or_else(|| perr("unclosed parameter list".into()))?;
        params = ps.split(',').map(|p| parse_angle(p, line)).collect::<Result<_>>()?;
        rest = tail.trim_start();
    }
    let args: Vec<usize> = if rest.is_empty() {
        Vec::new()
    } else {
        rest.split(',').map(|a| parse_qubit(a, line)).collect::<Result<_>>()?
    };

    let want_params = |k: usize| -> Result<()> {
        if params.len() == k {
            Ok(())
        } else {
            Err(perr(format!("`{name}` takes {k} parameter(s), got {}", params.len())))
        }
    };
    let (kind, implicit_controls) = match name {
        "x" | "y" | "z" | "h" | "s" | "sdg" | "swap" => {
            want_params(0)?;
            let g = match name {
                "x" => NamedGate::X,
                "y" => NamedGate::Y,
                "z" => NamedGate::Z,
                "h" => NamedGate::H,
                "s" => NamedGate::S,
                "sdg" => NamedGate::Sdg,
                _ => NamedGate::Swap,
            };
            (GateKind::Named(g), 0)
        }
        "cx" => {
            want_params(0)?;
            (GateKind::Named(NamedGate::X), 1)
        }
        "p" | "phase" => {
            want_params(1)?;
            (GateKind::Phase(params[0]), 0)
        }
        "cp" => {
            want_params(1)?;
            (GateKind::Phase(params[0]), 1)
        }
        "U" | "u" | "u3" => {
            want_params(3)?;
            (GateKind::Matrix(u3_matrix(params[0], params[1], params[2])), 0)
        }
        "gphase" => {
            want_params(1)?;
            let phase = ComplexMatrix::identity(2).scale(cis(params[0]));
            if num_controls == 0 {
                if num_qubits == 0 || !args.is_empty() {
                    return Err(perr("gphase takes no qubits".into()));
                }
                return Ok(GateOp::matrix(phase, vec![0]));
            }
            // ctrl @ gphase(γ) on k controls is a phase on the all-ones control state.
            let controls = args.clone();
            let (last, others) = controls.split_last().ok_or_else(|| perr("missing control qubits".into()))?;
            return Ok(GateOp::phase(params[0], *last).with_controls(others.iter().copied()));
        }
        other => return Err(perr(format!("unsupported gate `{other}`"))),
    };
    let total_controls = num_controls + implicit_controls;
    if args.len() <= total_controls {
        return Err(perr(format!("`{name}` needs target qubits")));
    }
    let (controls, targets) = args.split_at(total_controls);
    Ok(GateOp { kind, targets: targets.to_vec(), controls: controls.to_vec() })
}

fn parse_pragma_unitary(body: &str, line: usize) -> Result<GateOp> {
    let perr = |message: String| Error::Parse { line, message };
    let toks: Vec<&str> = body.split_whitespace().collect();
    let targets: Vec<usize> =
        toks.iter().take_while(|t| t.starts_with("q[")).map(|t| parse_qubit(t, line)).collect::<Result<_>>()?;
    let entries: Vec<Complex> = toks[targets.len()..]
        .iter()
        .map(|t| parse_complex(t).ok_or_else(|| perr(format!("bad entry `{t}`"))))
        .collect::<Result<_>>()?;
    let dim = 1usize << targets.len();
    let m = ComplexMatrix::new(dim, dim, entries)?;
    Ok(GateOp::matrix(m, targets))
}

/// Parses the dialect written by [`export_qasm`] (plus the `cx`/`cp`
/// shorthands). Comment lines are ignored, so marks do not survive.
pub fn import_qasm(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let code = raw.split("//").next().unwrap_or("").trim();
        if code.is_empty() || code.starts_with("OPENQASM") || code.starts_with("include") {
            continue;
        }
        if let Some(body) = code.strip_prefix(PRAGMA_UNITARY) {
            let c = circuit.as_mut().ok_or(Error::Parse { line, message: "gate before qubit declaration".into() })?;
            c.push(parse_pragma_unitary(body, line)?).map_err(|e| Error::Parse { line, message: e.to_string() })?;
            continue;
        }
        for stmt in code.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            if let Some(decl) = stmt.strip_prefix("qubit") {
                let n = decl
                    .trim()
                    .strip_prefix('[')
                    .and_then(|r| r.split_once(']'))
                    .and_then(|(n, _)| n.trim().parse::<usize>().ok())
                    .ok_or(Error::Parse { line, message: format!("bad declaration `{stmt}`") })?;
                if circuit.is_some() {
                    return Err(Error::Parse { line, message: "multiple qubit declarations".into() });
                }
                circuit = Some(Circuit::new(n));
                continue;
            }
            let c = circuit.as_mut().ok_or(Error::Parse { line, message: "gate before qubit declaration".into() })?;
            let op = parse_statement(stmt, line, c.num_qubits())?;
            c.push(op).map_err(|e| Error::Parse { line, message: e.to_string() })?;
        }
    }
    circuit.ok_or(Error::Parse { line: 0, message: "no qubit declaration".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{circuit_unitary, qft_circuit};
    use crate::linalg::max_norm_diff;

    #[test]
    fn u3_decomposition_reconstructs() {
        let samples = [
            NamedGate::H.matrix(),
            NamedGate::X.matrix(),
            NamedGate::Y.matrix(),
            NamedGate::R.matrix(),
            NamedGate::B.matrix(),
            ComplexMatrix::diagonal(&[cis(0.3), cis(-1.1)]),
            u3_matrix(0.7, -2.0, 1.3).scale(cis(0.4)),
        ];
        for m in samples {
            let (t, p, l, g) = u3_angles(&m);
            let back = u3_matrix(t, p, l).scale(cis(g));
            assert!(max_norm_diff(&back, &m).unwrap() < 1e-12, "{m:?}");
        }
    }

    #[test]
    fn round_trip_preserves_unitary() {
        let mut c = Circuit::new(3);
        c.h(0).unwrap().mark("after-h");
        c.push(GateOp::named(NamedGate::R, vec![1]).with_controls([0])).unwrap();
        c.push(GateOp::named(NamedGate::Bdg, vec![2])).unwrap();
        c.push(GateOp::matrix(NamedGate::Y.matrix(), vec![2]).with_controls([1])).unwrap();
        c.push(GateOp::matrix(u3_matrix(0.2, 0.3, 0.4), vec![0])).unwrap();
        c.push(GateOp::matrix(NamedGate::Swap.matrix(), vec![2, 0])).unwrap();
        c.mcx(&[0, 2], 1).unwrap();
        c.append_at(&qft_circuit(2, false).unwrap(), 1).unwrap();
        let text = export_qasm(&c).unwrap();
        assert!(text.contains("// after-h"));
        assert!(text.contains("ctrl(2) @ x q[0], q[2], q[1];"));
        let back = import_qasm(&text).unwrap();
        let dev = max_norm_diff(&circuit_unitary(&back).unwrap(), &circuit_unitary(&c).unwrap()).unwrap();
        assert!(dev < 1e-12, "deviation {dev}");
    }

    #[test]
    fn wide_matrix_gates_are_reported() {
        let mut c = Circuit::new(3);
        c.h(0).unwrap();
        c.push(GateOp::matrix(ComplexMatrix::identity(4), vec![1, 2]).with_controls([0])).unwrap();
        let err = export_qasm(&c).unwrap_err();
        let Error::Export(msg) = err else { panic!("wrong error") };
        assert!(msg.contains("op 1: matrix gate on 3 qubit(s)"), "{msg}");
    }

    #[test]
    fn importer_rejects_garbage() {
        assert!(import_qasm("h q[0];").is_err());
        assert!(import_qasm("qubit[1] q;\nfoo q[0];").is_err());
        assert!(import_qasm("qubit[1] q;\nh q[3];").is_err());
        assert!(import_qasm("qubit[2] q;\ncx q[0], q[1];\ncp(pi) q[0], q[1];").is_ok());
    }
}
