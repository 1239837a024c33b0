//! Dense statevector engine.

mod circuit;
mod density;
mod gate;
pub mod oracle;
mod state;

pub use circuit::Circuit;
pub use density::{purity, reduced_density_matrix, split_product, DensityMatrix, ProductSplit};
pub use gate::{GateKind, GateSpec, Unitary2};
pub use oracle::circuit_unitary;
pub use state::{
    fidelity, index_to_bits, MeasurementRecord, StateVector, IMPOSSIBLE_BRANCH, MAX_QUBITS,
};
