//! Coherent over-rotation of controlled gates.
//!
//! Every gate with at least one control has its target unitary `U` replaced
//! by `Rx(theta) U`; uncontrolled gates stay ideal. The fidelity between the
//! ideal and noisy protocol outputs is swept over `theta`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dicke::dicke;
use crate::protocols::{build_d4_to_d5_circuit, expansion_branches, prepare_pre_measurement};
use crate::sim::{fidelity, Circuit, GateSpec, StateVector, Unitary2};
use crate::{Error, Result};

/// `exp(-i theta X / 2)`.
pub fn rx_matrix(theta: f64) -> Unitary2 {
    Unitary2::rx(theta)
}

/// Adds `Rx(theta)` after the target operation of a controlled gate.
pub fn noisify_gate(gate: &GateSpec, theta: f64) -> GateSpec {
    if gate.is_controlled() {
        gate.with_over_rotation(theta)
    } else {
        gate.clone()
    }
}

pub fn noisify_circuit(circuit: &Circuit, theta: f64) -> Circuit {
    circuit.map_gates(|g| noisify_gate(g, theta))
}

/// Which states the fidelity compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FidelityMode {
    /// Full six-qubit states before the flag measurement.
    PreMeasurement,
    /// Renormalized `a2 = 0` branches on the five remaining qubits.
    #[default]
    PostSelectedSuccess,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    theta: f64,
    pub mode: FidelityMode,
}

impl NoiseConfig {
    pub fn new(theta: f64, mode: FidelityMode) -> Result<Self> {
        check_theta(theta)?;
        Ok(NoiseConfig { theta, mode })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta.abs() > std::f64::consts::PI {
        return Err(Error::arg(format!("theta = {theta} outside [-pi, pi]")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub fidelity: f64,
}

/// Precomputed ideal output of the expansion, reused across sweep points.
struct Reference {
    circuit: Circuit,
    input: StateVector,
    pre: StateVector,
    success: StateVector,
}

impl Reference {
    fn new() -> Result<Self> {
        let circuit = build_d4_to_d5_circuit();
        let input = dicke(4, 2)?;
        let branches = expansion_branches(&circuit, &input)?;
        Ok(Reference {
            circuit,
            input,
            pre: branches.pre_measurement,
            success: branches.success,
        })
    }

    fn fidelity(&self, theta: f64, mode: FidelityMode) -> Result<f64> {
        let noisy = noisify_circuit(&self.circuit, theta);
        match mode {
            FidelityMode::PreMeasurement => {
                fidelity(&self.pre, &prepare_pre_measurement(&noisy, &self.input)?)
            }
            FidelityMode::PostSelectedSuccess => fidelity(
                &self.success,
                &expansion_branches(&noisy, &self.input)?.success,
            ),
        }
    }
}

/// `F(theta) = |<psi_ideal|psi_noisy(theta)>|^2` for the expansion protocol.
pub fn fidelity_at(config: &NoiseConfig) -> Result<f64> {
    Reference::new()?.fidelity(config.theta, config.mode)
}

/// Evaluates `F` at every grid point; rows follow the grid order.
pub fn fidelity_sweep(theta_grid: &[f64], mode: FidelityMode) -> Result<Vec<SweepRow>> {
    if theta_grid.is_empty() {
        return Err(Error::arg("theta grid is empty"));
    }
    theta_grid.iter().try_for_each(|&t| check_theta(t))?;
    let reference = Reference::new()?;
    theta_grid
        .par_iter()
        .map(|&theta| {
            Ok(SweepRow {
                theta,
                fidelity: reference.fidelity(theta, mode)?,
            })
        })
        .collect()
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn theta_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::arg("a sweep needs at least 2 steps"));
    }
    if min.partial_cmp(&max).is_none_or(|o| o.is_gt()) {
        return Err(Error::arg(format!(
            "theta_min = {min} exceeds theta_max = {max}"
        )));
    }
    let span = max - min;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                max
            } else {
                min + span * i as f64 / (steps - 1) as f64
            }
        })
        .collect())
}

/// The default grid: 101 points on `[0, 0.1]`.
pub fn default_grid() -> Vec<f64> {
    theta_grid(0.0, 0.1, 101).expect("static grid")
}
