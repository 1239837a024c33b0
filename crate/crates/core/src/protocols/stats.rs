use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dicke::dicke;
use crate::protocols::circuits::build_d4_to_d5_circuit;
use crate::protocols::expansion::prepare_pre_measurement;
use crate::sim::StateVector;
use crate::{Error, Result};

/// Per-shot generator: ChaCha8 keyed by `seed`, stream `shot`.
///
/// Shot results depend only on `(seed, shot)`, never on thread scheduling.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Measures every qubit of `state`, `first` before the others, and returns
/// the collapsed basis index.
pub fn measure_all(state: &StateVector, first: usize, rng: &mut impl Rng) -> Result<usize> {
    let order = std::iter::once(first).chain((0..state.n_qubits()).filter(|&q| q != first));
    let mut current = state.clone();
    let mut index = 0usize;
    for q in order {
        let (rec, post) = current.measure_qubit(q, rng.random::<f64>())?;
        if rec.outcome == 1 {
            index |= state.mask(q);
        }
        current = post;
    }
    Ok(index)
}

/// Collapsed basis indices of `shots` independent full-register measurements.
pub fn sample_shots(
    state: &StateVector,
    first: usize,
    shots: u64,
    seed: u64,
) -> Result<Vec<usize>> {
    (0..shots)
        .into_par_iter()
        .map(|i| measure_all(state, first, &mut shot_rng(seed, i)))
        .collect()
}

/// Shot statistics of the expansion protocol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolStats {
    pub shots: u64,
    pub successes: u64,
    pub estimated_p_s: f64,
    /// Counts per six-bit outcome `d1 d2 d3 d4 a1 a2`, sorted by bitstring.
    pub counts: BTreeMap<String, u64>,
}

/// Runs the expansion on `|D_4^(2)> ⊗ |00>` `shots` times, measuring the flag
/// `a2` and then the remaining five qubits on each shot.
pub fn run_protocol_stats(shots: u64, seed: u64) -> Result<ProtocolStats> {
    if shots == 0 {
        return Err(Error::arg("shots must be at least 1"));
    }
    let state = prepare_pre_measurement(&build_d4_to_d5_circuit(), &dicke(4, 2)?)?;
    let flag = state.n_qubits() - 1;
    let outcomes = sample_shots(&state, flag, shots, seed)?;
    let mut counts = BTreeMap::new();
    let mut successes = 0;
    for idx in outcomes {
        if idx & state.mask(flag) == 0 {
            successes += 1;
        }
        *counts.entry(state.bitstring(idx)).or_insert(0u64) += 1;
    }
    Ok(ProtocolStats {
        shots,
        successes,
        estimated_p_s: successes as f64 / shots as f64,
        counts,
    })
}
