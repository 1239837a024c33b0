use crate::sim::gate::{GateKind, GateSpec};
use crate::sim::state::StateVector;
use crate::{Error, Result};

/// An ordered gate list over a labelled register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    labels: Vec<String>,
    gates: Vec<GateSpec>,
}

impl Circuit {
    /// Empty circuit on the given qubit labels (qubit 0 first).
    pub fn new<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::arg("a circuit needs at least one qubit"));
        }
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(|c: char| c.is_whitespace() || c == ',' || c == '=') {
                return Err(Error::arg(format!("invalid qubit label `{l}`")));
            }
            if labels[..i].contains(l) {
                return Err(Error::arg(format!("duplicate qubit label `{l}`")));
            }
        }
        Ok(Circuit {
            labels,
            gates: Vec::new(),
        })
    }

    /// Empty circuit with labels `q0 .. q(n-1)`.
    pub fn with_qubits(n_qubits: usize) -> Result<Self> {
        let labels: Vec<String> = (0..n_qubits).map(|i| format!("q{i}")).collect();
        Self::new(&labels)
    }

    pub fn n_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gates(&self) -> &[GateSpec] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn qubit(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// Appends a gate after checking its qubit indices.
    pub fn push(&mut self, gate: GateSpec) -> Result<&mut Self> {
        for q in gate.qubits() {
            if q >= self.n_qubits() {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits(),
                });
            }
        }
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends `kind` on `target` controlled by `controls`, all given by label.
    pub fn add(
        &mut self,
        step: &str,
        kind: GateKind,
        controls: &[&str],
        target: &str,
    ) -> Result<&mut Self> {
        let controls = controls
            .iter()
            .map(|c| self.qubit(c))
            .collect::<Result<Vec<_>>>()?;
        let target = self.qubit(target)?;
        let gate = if controls.is_empty() {
            GateSpec::single(step, kind, target)
        } else {
            GateSpec::controlled(step, kind, &controls, target)?
        };
        self.push(gate)
    }

    /// Appends every gate of `other`, which must share this circuit's labels.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.labels != self.labels {
            return Err(Error::arg(
                "cannot concatenate circuits over different registers",
            ));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    pub(crate) fn map_gates(&self, f: impl Fn(&GateSpec) -> GateSpec) -> Circuit {
        Circuit {
            labels: self.labels.clone(),
            gates: self.gates.iter().map(f).collect(),
        }
    }

    /// Number of gates with at least one control.
    pub fn controlled_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_controlled()).count()
    }

    /// Number of gates with exactly one control (two-qubit controlled gates).
    pub fn two_qubit_controlled_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| g.controls().len() == 1)
            .count()
    }

    /// Distinct step labels in first-appearance order.
    pub fn step_labels(&self) -> Vec<&str> {
        let mut steps: Vec<&str> = Vec::new();
        for g in &self.gates {
            if steps.last() != Some(&g.label()) {
                steps.push(g.label());
            }
        }
        steps
    }

    /// Gates belonging to one labelled step.
    pub fn step(&self, label: &str) -> Vec<&GateSpec> {
        self.gates.iter().filter(|g| g.label() == label).collect()
    }

    /// Runs the circuit on `state` in place.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: state.n_qubits(),
                right: self.n_qubits(),
            });
        }
        self.gates.iter().try_for_each(|g| state.apply_gate(g))
    }

    /// Runs the circuit on a copy of `state`.
    pub fn run(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        self.apply(&mut out)?;
        Ok(out)
    }
}
