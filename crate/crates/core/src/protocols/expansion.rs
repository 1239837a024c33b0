use crate::dicke::{dicke, flip_all};
use crate::protocols::circuits::{build_d4_to_d5_circuit, build_w3_to_d4_circuit};
use crate::sim::{fidelity, split_product, Circuit, MeasurementRecord, StateVector};
use crate::{Error, Result};

const INPUT_NORM_TOLERANCE: f64 = 1e-10;
/// Amplitudes below this are treated as exact zeros when discarding the flag.
const DISCARD_TOLERANCE: f64 = 1e-12;

const FLAG: usize = 5;
const REMNANT: [usize; 3] = [0, 1, 2];

/// The two qubits (`d4`, `a1`) that factor out on the recyclable branch.
#[derive(Debug, Clone)]
pub struct SeparatedQubits {
    /// Joint state of `(d4, a1)`.
    pub state: StateVector,
    /// Purity of the reduced `(d4, a1)` density matrix.
    pub purity: f64,
}

/// Result of one run of the restricted-access expansion.
#[derive(Debug, Clone)]
pub enum ExpansionOutcome {
    /// Flag read 0: `(d1, d2, d3, d4, a1)` hold the expanded state.
    Success {
        state: StateVector,
        flag: MeasurementRecord,
    },
    /// Flag read 1: `(d1, d2, d3)` hold a W-like remnant.
    Recyclable {
        remnant: StateVector,
        separated: SeparatedQubits,
        flag: MeasurementRecord,
    },
}

impl ExpansionOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, ExpansionOutcome::Success { .. })
    }

    pub fn flag(&self) -> &MeasurementRecord {
        match self {
            ExpansionOutcome::Success { flag, .. } | ExpansionOutcome::Recyclable { flag, .. } => {
                flag
            }
        }
    }
}

/// Exact (unsampled) view of both measurement branches.
#[derive(Debug, Clone)]
pub struct ExpansionBranches {
    /// Six-qubit state just before the flag measurement.
    pub pre_measurement: StateVector,
    pub p_success: f64,
    /// Post-selected success state on `(d1, d2, d3, d4, a1)`.
    pub success: StateVector,
    /// Post-selected failure state on `(d1, d2, d3, d4, a1)`.
    pub failure: Option<StateVector>,
}

fn check_input(input: &StateVector, n: usize) -> Result<()> {
    if input.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            left: input.n_qubits(),
            right: n,
        });
    }
    let norm = input.norm_sqr();
    if (norm - 1.0).abs() > INPUT_NORM_TOLERANCE {
        return Err(Error::arg(format!(
            "input state has squared norm {norm}, expected 1"
        )));
    }
    Ok(())
}

/// Appends `|00>` ancillas to a four-qubit input and runs `circuit`.
pub fn prepare_pre_measurement(circuit: &Circuit, input: &StateVector) -> Result<StateVector> {
    check_input(input, 4)?;
    let mut state = input.tensor(&StateVector::zeros(2)?)?;
    circuit.apply(&mut state)?;
    Ok(state)
}

fn outcome_from(post: StateVector, flag: MeasurementRecord) -> Result<ExpansionOutcome> {
    let rest = post.remove_qubit(FLAG, flag.outcome, DISCARD_TOLERANCE)?;
    if flag.outcome == 0 {
        return Ok(ExpansionOutcome::Success { state: rest, flag });
    }
    let split = split_product(&rest, &REMNANT)?;
    Ok(ExpansionOutcome::Recyclable {
        remnant: split.a,
        separated: SeparatedQubits {
            state: split.b,
            purity: split.purity,
        },
        flag,
    })
}

/// Runs the expansion on `input` (over `d1..d4`) and measures the flag `a2`
/// with the uniform variate `rng_uniform`: outcome 0 iff `rng_uniform < P(a2 = 0)`.
pub fn run_expansion(input: &StateVector, rng_uniform: f64) -> Result<ExpansionOutcome> {
    run_expansion_with(&build_d4_to_d5_circuit(), input, rng_uniform)
}

/// [`run_expansion`] with an arbitrary six-qubit circuit (e.g. a noisy one).
pub fn run_expansion_with(
    circuit: &Circuit,
    input: &StateVector,
    rng_uniform: f64,
) -> Result<ExpansionOutcome> {
    let state = prepare_pre_measurement(circuit, input)?;
    let (flag, post) = state.measure_qubit(FLAG, rng_uniform)?;
    outcome_from(post, flag)
}

/// Both flag branches of `circuit` on `input`, without sampling.
pub fn expansion_branches(circuit: &Circuit, input: &StateVector) -> Result<ExpansionBranches> {
    let pre_measurement = prepare_pre_measurement(circuit, input)?;
    let (p_success, success) = pre_measurement.project(FLAG, 0)?;
    let success = success.remove_qubit(FLAG, 0, DISCARD_TOLERANCE)?;
    let failure = match pre_measurement.project(FLAG, 1) {
        Ok((_, s)) => Some(s.remove_qubit(FLAG, 1, DISCARD_TOLERANCE)?),
        Err(_) => None,
    };
    Ok(ExpansionBranches {
        pre_measurement,
        p_success,
        success,
        failure,
    })
}

/// Appends `|0>` to a three-qubit state and runs the W3 to D4 expansion on it.
pub fn run_recycling(remnant: &StateVector) -> Result<StateVector> {
    check_input(remnant, 3)?;
    let state = remnant.tensor(&StateVector::zeros(1)?)?;
    build_w3_to_d4_circuit().run(&state)
}

/// Recycled four-qubit state and its fidelity to `|D_4^(2)>`.
#[derive(Debug, Clone)]
pub struct RecycleReport {
    pub state: StateVector,
    pub fidelity: f64,
}

/// Maps a W̄-form remnant to W form (X on every qubit) and recycles it.
pub fn recycle_remnant(remnant: &StateVector) -> Result<RecycleReport> {
    check_input(remnant, 3)?;
    let state = run_recycling(&flip_all(remnant))?;
    let fidelity = fidelity(&state, &dicke(4, 2)?)?;
    Ok(RecycleReport { state, fidelity })
}
