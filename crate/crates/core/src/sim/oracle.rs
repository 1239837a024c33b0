//! Full-matrix reference implementation of circuits.
//!
//! Each gate is assembled as `I + (|1><1|^{⊗controls} ⊗ (U - I)_target)` from
//! Kronecker products, independently of the bitmask kernel in
//! [`StateVector::apply_gate`](crate::sim::StateVector::apply_gate).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::sim::circuit::Circuit;
use crate::sim::gate::GateSpec;
use crate::sim::state::StateVector;
use crate::{Error, Result};

/// Largest register the dense-matrix oracle accepts.
pub const MAX_ORACLE_QUBITS: usize = 12;

fn factor(gate: &GateSpec, qubit: usize) -> DMatrix<Complex64> {
    let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    if gate.controls().contains(&qubit) {
        DMatrix::from_row_slice(2, 2, &[o, o, o, l])
    } else if qubit == gate.target() {
        let u = gate.unitary().entries();
        DMatrix::from_row_slice(2, 2, &[u[0][0] - l, u[0][1], u[1][0], u[1][1] - l])
    } else {
        DMatrix::identity(2, 2)
    }
}

/// Dense `2^n x 2^n` matrix of one gate.
pub fn gate_matrix(gate: &GateSpec, n_qubits: usize) -> Result<DMatrix<Complex64>> {
    if n_qubits > MAX_ORACLE_QUBITS {
        return Err(Error::Capacity(format!(
            "matrix oracle supports at most {MAX_ORACLE_QUBITS} qubits, got {n_qubits}"
        )));
    }
    if let Some(q) = gate.qubits().find(|&q| q >= n_qubits) {
        return Err(Error::QubitOutOfRange { index: q, n_qubits });
    }
    let delta = (0..n_qubits)
        .map(|q| factor(gate, q))
        .reduce(|acc, f| acc.kronecker(&f))
        .expect("at least one qubit");
    Ok(DMatrix::identity(1 << n_qubits, 1 << n_qubits) + delta)
}

/// Product of all gate matrices, last gate leftmost.
pub fn circuit_unitary(circuit: &Circuit) -> Result<DMatrix<Complex64>> {
    let n = circuit.n_qubits();
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::Capacity(format!(
            "matrix oracle supports at most {MAX_ORACLE_QUBITS} qubits, got {n}"
        )));
    }
    circuit
        .gates()
        .iter()
        .try_fold(DMatrix::identity(1 << n, 1 << n), |acc, g| {
            Ok(gate_matrix(g, n)? * acc)
        })
}

/// Max-abs entry of `U†U - I`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let p = u.adjoint() * u;
    let id = DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
    (p - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `u · state` as a new statevector.
pub fn apply_matrix(u: &DMatrix<Complex64>, state: &StateVector) -> Result<StateVector> {
    if u.ncols() != state.dim() {
        return Err(Error::arg(format!(
            "matrix of width {} applied to state of dimension {}",
            u.ncols(),
            state.dim()
        )));
    }
    let v = DVector::from_column_slice(state.amplitudes());
    StateVector::normalized(state.n_qubits(), (u * v).iter().copied().collect())
}
