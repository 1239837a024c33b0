//! Line-oriented circuit text format.
//!
//! ```text
//! # qubits: d1 d2 d3 d4 a1 a2
//! G1 H c= t=a1
//! G3 CNOT c=a1 t=d1
//! G12 CCCNOT c=d2,d3,a1 t=a2
//! W1 RY c= t=w1 theta=1.2309594173407747
//! ```
//!
//! One gate per line: step label, mnemonic (one leading `C` per control),
//! comma-separated control labels, target label, an optional `theta` for
//! rotations and an optional `noise` for an accumulated over-rotation.
//! Blank lines and other `#` comments are ignored.

use std::fmt::Write as _;

use crate::sim::{Circuit, GateKind, GateSpec};
use crate::{Error, Result};

const HEADER: &str = "# qubits:";

/// Serializes `circuit`. Gates with a custom unitary have no textual form.
pub fn to_text(circuit: &Circuit) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER} {}", circuit.labels().join(" "));
    for g in circuit.gates() {
        let name = g
            .kind()
            .mnemonic(g.controls().len())
            .ok_or_else(|| Error::arg(format!("gate `{}` has no text form", g.label())))?;
        let controls: Vec<&str> = g
            .controls()
            .iter()
            .map(|&c| circuit.labels()[c].as_str())
            .collect();
        let _ = write!(
            out,
            "{} {name} c={} t={}",
            g.label(),
            controls.join(","),
            circuit.labels()[g.target()]
        );
        if let Some(theta) = g.kind().angle() {
            let _ = write!(out, " theta={theta}");
        }
        if let Some(noise) = g.over_rotation() {
            let _ = write!(out, " noise={noise}");
        }
        out.push('\n');
    }
    Ok(out)
}

fn parse_kind(name: &str, theta: Option<f64>, line: usize) -> Result<(usize, GateKind)> {
    let err = |message: String| Error::Parse { line, message };
    let n_controls = name.chars().take_while(|&c| c == 'C').count();
    let base = &name[n_controls..];
    let kind = match base {
        "NOT" if n_controls > 0 => GateKind::X,
        "X" => GateKind::X,
        "H" => GateKind::H,
        "RX" | "RY" => {
            let t = theta.ok_or_else(|| err(format!("`{name}` needs theta=<radians>")))?;
            if base == "RX" {
                GateKind::Rx(t)
            } else {
                GateKind::Ry(t)
            }
        }
        _ => return Err(err(format!("unknown gate `{name}`"))),
    };
    if theta.is_some() && kind.angle().is_none() {
        return Err(err(format!("`{name}` takes no theta")));
    }
    Ok((n_controls, kind))
}

fn parse_float(value: &str, key: &str, line: usize) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("bad {key} value `{value}`"),
        })
}

/// Parses the format produced by [`to_text`].
pub fn from_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Parse { line, message };
        let trimmed = raw.trim();
        if let Some(labels) = trimmed.strip_prefix(HEADER) {
            if circuit.is_some() {
                return Err(err("duplicate qubit header".into()));
            }
            let labels: Vec<&str> = labels.split_whitespace().collect();
            circuit = Some(Circuit::new(&labels).map_err(|e| err(e.to_string()))?);
            continue;
        }
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err(format!("gate before `{HEADER}` header")))?;
        let mut tokens = trimmed.split_whitespace();
        let (label, name) = match (tokens.next(), tokens.next()) {
            (Some(l), Some(n)) => (l, n),
            _ => return Err(err("expected `LABEL GATE c=... t=...`".into())),
        };
        let (mut controls, mut target, mut theta, mut noise) = (None, None, None, None);
        for tok in tokens {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got `{tok}`")))?;
            match key {
                "c" => controls = Some(value),
                "t" => target = Some(value),
                "theta" => theta = Some(parse_float(value, key, line)?),
                "noise" => noise = Some(parse_float(value, key, line)?),
                _ => return Err(err(format!("unknown field `{key}`"))),
            }
        }
        let target = target.ok_or_else(|| err("missing t=<label>".into()))?;
        let controls: Vec<&str> = controls
            .unwrap_or("")
            .split(',')
            .filter(|s| !s.is_empty())
            .collect();
        let (n_controls, kind) = parse_kind(name, theta, line)?;
        if n_controls != controls.len() {
            return Err(err(format!(
                "`{name}` expects {n_controls} control(s), got {}",
                controls.len()
            )));
        }
        let target = c.qubit(target).map_err(|e| err(e.to_string()))?;
        let controls = controls
            .iter()
            .map(|l| c.qubit(l))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| err(e.to_string()))?;
        let mut gate = if controls.is_empty() {
            GateSpec::single(label, kind, target)
        } else {
            GateSpec::controlled(label, kind, &controls, target).map_err(|e| err(e.to_string()))?
        };
        if let Some(noise) = noise {
            gate = gate.with_over_rotation(noise);
        }
        c.push(gate).map_err(|e| err(e.to_string()))?;
    }
    circuit.ok_or(Error::Parse {
        line: 0,
        message: format!("missing `{HEADER}` header"),
    })
}
