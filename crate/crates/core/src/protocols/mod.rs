//! Circuit builders and runners for W3 preparation, the W3 to D4 expansion,
//! and the restricted-access D4 to D5 expansion with its flag measurement.

mod circuits;
mod expansion;
mod stats;
pub mod text;

pub use circuits::{
    build_d4_preparation_circuit, build_d4_to_d5_circuit, build_d4_to_d5_circuit_as_printed,
    build_w3_circuit, build_w3_to_d4_circuit, verify_untouched, RegisterLayout, EXPANSION_LABELS,
};
pub use expansion::{
    expansion_branches, prepare_pre_measurement, recycle_remnant, run_expansion,
    run_expansion_with, run_recycling, ExpansionBranches, ExpansionOutcome, RecycleReport,
    SeparatedQubits,
};
pub use stats::{measure_all, run_protocol_stats, sample_shots, shot_rng, ProtocolStats};
