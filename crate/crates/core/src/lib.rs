//! Dense statevector simulation of Dicke-state preparation and the
//! restricted-access `|D_4^(2)> -> |D_5^(3)>` expansion protocol.
//!
//! The crate is split into:
//!
//! * [`sim`]: statevectors, controlled gates, circuits, measurement, reduced
//!   density matrices and a full-unitary oracle.
//! * [`dicke`]: exact Dicke/W states, bipartite decompositions and the
//!   maximum expansion success probability as an exact rational.
//! * [`protocols`]: the W3 preparation, W3 to D4 expansion and D4 to D5
//!   restricted-access circuits, plus the flag-measurement runner.
//! * [`noise`]: coherent over-rotation of controlled gates and fidelity sweeps.
//! * [`report`] and [`checks`]: plot-ready tables and the analytic check suite.

pub mod checks;
pub mod dicke;
mod error;
pub mod noise;
pub mod protocols;
pub mod report;
pub mod sim;

pub use error::{Error, Result};
pub use num_complex::Complex64;
