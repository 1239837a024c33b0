use crate::sim::{Circuit, GateKind};
use crate::{Error, Result};

use GateKind::{H, X};

/// Register of the restricted-access expansion: data qubits `d1..d4`, the
/// ancilla `a1` that joins the Dicke state, and the flag `a2`.
pub const EXPANSION_LABELS: [&str; 6] = ["d1", "d2", "d3", "d4", "a1", "a2"];

/// Qubit roles of the expansion register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    pub labels: Vec<String>,
    /// Qubits no gate may touch.
    pub untouched: Vec<String>,
    pub flag: String,
}

impl RegisterLayout {
    pub fn expansion() -> Self {
        RegisterLayout {
            labels: EXPANSION_LABELS.iter().map(|s| s.to_string()).collect(),
            untouched: vec!["d4".into()],
            flag: "a2".into(),
        }
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }
}

/// Deterministic `|000> -> |W_3>` on `w1 w2 w3`.
///
/// `Ry` puts `w1` in `sqrt(2/3)|0> + sqrt(1/3)|1>`, an open-controlled H
/// splits the `w1 = 0` branch over `w2`, and two CNOTs into a pre-flipped
/// `w3` clear it wherever `w1` or `w2` is excited. Three two-qubit
/// controlled gates in total.
pub fn build_w3_circuit() -> Circuit {
    let mut c = Circuit::new(&["w1", "w2", "w3"]).expect("static labels");
    let theta = 2.0 * (2.0f64 / 3.0).sqrt().acos();
    let steps: [(&str, GateKind, &[&str], &str); 7] = [
        ("W1", GateKind::Ry(theta), &[], "w1"),
        ("W2", X, &[], "w1"),
        ("W3", H, &["w1"], "w2"),
        ("W4", X, &[], "w1"),
        ("W5", X, &[], "w3"),
        ("W6", X, &["w1"], "w3"),
        ("W7", X, &["w2"], "w3"),
    ];
    for (step, kind, controls, target) in steps {
        c.add(step, kind, controls, target).expect("static circuit");
    }
    c
}

fn w3_to_d4_steps(c: &mut Circuit, w: [&str; 3], a: &str) -> Result<()> {
    c.add("E1", H, &[], a)?;
    c.add("E2", X, &[a], w[0])?;
    c.add("E3", X, &[a], w[1])?;
    c.add("E4", X, &[a], w[2])?;
    c.add("E5", X, &[], a)?;
    Ok(())
}

/// Deterministic `|W_3> ⊗ |0> -> |D_4^(2)>`: H on the ancilla, three CNOTs
/// fanning it out to the W qubits, then X on the ancilla.
pub fn build_w3_to_d4_circuit() -> Circuit {
    let mut c = Circuit::new(&["w1", "w2", "w3", "a1"]).expect("static labels");
    w3_to_d4_steps(&mut c, ["w1", "w2", "w3"], "a1").expect("static circuit");
    c
}

/// `|0000> -> |D_4^(2)>` on `d1..d4`: the W3 preparation on `d1 d2 d3`
/// followed by the expansion with `d4` as the fresh qubit.
pub fn build_d4_preparation_circuit() -> Circuit {
    let mut c = Circuit::new(&["d1", "d2", "d3", "d4"]).expect("static labels");
    for g in build_w3_circuit().gates() {
        c.push(g.clone()).expect("w3 qubits fit");
    }
    w3_to_d4_steps(&mut c, ["d1", "d2", "d3"], "d4").expect("static circuit");
    c
}

type Step = (
    &'static str,
    GateKind,
    &'static [&'static str],
    &'static str,
);

const G8: (&[&str], &str) = (&["d1", "a1"], "a2");

/// The 24-step gate list, with composite steps (G9, G11, G13, G22) expanded
/// into single-target factors sharing the step label.
fn expansion_steps(g12_controls: &'static [&'static str]) -> Vec<Step> {
    vec![
        ("G1", H, &[], "a1"),
        ("G2", X, &[], "a1"),
        ("G3", X, &["a1"], "d1"),
        ("G4", X, &["a1"], "d2"),
        ("G5", X, &["a1"], "d3"),
        ("G6", X, &["a1", "d3"], "d2"),
        ("G7", X, &["a1", "d3"], "d1"),
        ("G8", X, G8.0, G8.1),
        ("G9", X, &[], "d1"),
        ("G9", X, &["a1"], "a2"),
        ("G10", X, G8.0, G8.1),
        ("G11", X, &[], "d1"),
        ("G11", X, &[], "d2"),
        ("G11", X, &[], "d3"),
        ("G12", X, g12_controls, "a2"),
        ("G13", X, &[], "d2"),
        ("G13", X, &[], "d3"),
        ("G14", H, &["a2"], "d2"),
        ("G15", X, &[], "d2"),
        ("G16", X, &["d2", "a2"], "d3"),
        ("G17", X, &[], "d2"),
        ("G18", X, G8.0, G8.1),
        ("G19", X, &["d2", "a1"], "a2"),
        ("G20", X, &["d3", "a1"], "a2"),
        ("G21", X, &["d1", "d2", "d3"], "a2"),
        ("G22", X, &[], "d1"),
        ("G22", X, &[], "a1"),
        ("G23", X, &["d1", "a2"], "d3"),
        ("G24", X, &[], "d1"),
    ]
}

fn assemble(steps: Vec<Step>) -> Circuit {
    let mut c = Circuit::new(&EXPANSION_LABELS).expect("static labels");
    for (step, kind, controls, target) in steps {
        c.add(step, kind, controls, target).expect("static circuit");
    }
    c
}

/// Restricted-access `|D_4^(2)> ⊗ |00> -> |D_5^(3)>` circuit on
/// `d1 d2 d3 d4 a1 a2`. No gate touches `d4`.
///
/// Step G12 is `CCCNOT^{d2,d3,a1; a2}`. The commonly printed form with
/// controls `{d1, d3, a1}` is available as [`build_d4_to_d5_circuit_as_printed`];
/// it does not produce the target state.
pub fn build_d4_to_d5_circuit() -> Circuit {
    assemble(expansion_steps(&["d2", "d3", "a1"]))
}

/// The gate list with G12 = `CCCNOT^{d1,d3,a1; a2}` taken literally.
///
/// Succeeds with probability 3/4 and a success-branch fidelity of 0.9 to
/// `|D_5^(3)>`; kept for comparison.
pub fn build_d4_to_d5_circuit_as_printed() -> Circuit {
    assemble(expansion_steps(&["d1", "d3", "a1"]))
}

/// True iff no gate uses the labelled qubit as a control or target.
pub fn verify_untouched(circuit: &Circuit, label: &str) -> Result<bool> {
    let q = circuit.qubit(label)?;
    Ok(circuit.gates().iter().all(|g| g.qubits().all(|x| x != q)))
}
