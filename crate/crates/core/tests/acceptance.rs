//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use dicke_core::checks::{decomposition_sweep, expansion_oracle_deviation};
use dicke_core::dicke::{
    decompose_source, decompose_target, dicke, verify_decomposition, w_state, wbar_state,
    wlike_state, BipartitionParams,
};
use dicke_core::noise::{default_grid, fidelity_sweep, FidelityMode};
use dicke_core::protocols::{
    build_d4_to_d5_circuit, build_w3_circuit, build_w3_to_d4_circuit, expansion_branches,
    run_expansion, run_protocol_stats, verify_untouched, ExpansionOutcome,
};
use dicke_core::sim::{
    circuit_unitary, fidelity, oracle, Circuit, GateSpec, StateVector, Unitary2,
};
use dicke_core::{Complex64, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = fn() -> Result<Outcome>;

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn exact_success_probability() -> Result<Outcome> {
    let b = expansion_branches(&build_d4_to_d5_circuit(), &dicke(4, 2)?)?;
    let err = (b.p_success - 5.0 / 6.0).abs();
    outcome(
        err <= 1e-12,
        format!("P(a2=0) = {:.15}, |P - 5/6| = {err:.1e}", b.p_success),
    )
}

fn target_fidelity() -> Result<Outcome> {
    let b = expansion_branches(&build_d4_to_d5_circuit(), &dicke(4, 2)?)?;
    let f = fidelity(&b.success, &dicke(5, 3)?)?;
    outcome(f >= 1.0 - 1e-10, format!("F(success, D5^3) = {f:.15}"))
}

fn recyclable_branch() -> Result<Outcome> {
    // u above 5/6 selects the flag = 1 branch
    let ExpansionOutcome::Recyclable {
        remnant, separated, ..
    } = run_expansion(&dicke(4, 2)?, 0.99)?
    else {
        return outcome(false, "flag = 1 branch not reached".into());
    };
    let f = fidelity(&remnant, &wlike_state())?;
    let ok = f >= 1.0 - 1e-10 && (separated.purity - 1.0).abs() <= 1e-10;
    outcome(
        ok,
        format!(
            "F(remnant, W-like) = {f:.15}, purity(d4,a1) = {:.15}",
            separated.purity
        ),
    )
}

fn overlap_claim() -> Result<Outcome> {
    let f = fidelity(&wbar_state(3)?, &wlike_state())?;
    let analytic = (1.0 + std::f64::consts::FRAC_1_SQRT_2).powi(2) / 3.0;
    let ok = (f - analytic).abs() <= 1e-12 && (f - 0.97).abs() <= 0.005;
    outcome(
        ok,
        format!("|<W3bar|W-like>|^2 = {f:.6}, analytic {analytic:.6}"),
    )
}

fn deterministic_expansion() -> Result<Outcome> {
    let eq = build_w3_to_d4_circuit();
    let prep = build_w3_circuit();
    let out = eq.run(&w_state(3)?.tensor(&StateVector::zeros(1)?)?)?;
    let f = fidelity(&out, &dicke(4, 2)?)?;
    let (own, total) = (
        eq.two_qubit_controlled_count(),
        eq.two_qubit_controlled_count() + prep.two_qubit_controlled_count(),
    );
    let f_prep = fidelity(&prep.run(&StateVector::zeros(3)?)?, &w_state(3)?)?;
    let ok = f >= 1.0 - 1e-10 && f_prep >= 1.0 - 1e-10 && own == 3 && total == 6;
    outcome(ok, format!("F = {f:.15}, W3 prep F = {f_prep:.15}, two-qubit controlled gates {own} + prep = {total}"))
}

fn decomposition_identities() -> Result<Outcome> {
    let src = decompose_source(&BipartitionParams::new(4, 2, 3)?)?;
    let tgt = decompose_target(&BipartitionParams::expansion(4, 2, 3, 1, 1)?)?;
    let src_w: Vec<_> = src.terms.iter().map(|t| t.weight.clone()).collect();
    let tgt_w: Vec<_> = tgt.terms.iter().map(|t| t.weight.clone()).collect();
    let exact = src_w == [ratio(1, 2), ratio(1, 2)] && tgt_w == [ratio(2, 5), ratio(3, 5)];
    let brute = verify_decomposition(&dicke(4, 2)?, &[0, 1, 2], &[3], &src)?
        && verify_decomposition(&dicke(5, 3)?, &[0, 1, 2, 3], &[4], &tgt)?;
    let (ok, total) = decomposition_sweep(6)?;
    let weights = |w: &[BigRational]| {
        w.iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    outcome(
        exact && brute && ok == total,
        format!(
            "source weights [{}], target weights [{}], sweep {ok}/{total}",
            weights(&src_w),
            weights(&tgt_w)
        ),
    )
}

fn monte_carlo() -> Result<Outcome> {
    const SHOTS: u64 = 100_000;
    let stats = run_protocol_stats(SHOTS, 20_240_601)?;
    let p = 1.0 / 12.0;
    let sigma = (SHOTS as f64 * p * (1.0 - p)).sqrt();
    let mean = SHOTS as f64 * p;
    let success: Vec<(&String, u64)> = stats
        .counts
        .iter()
        .filter(|(b, _)| b.ends_with('0'))
        .map(|(b, &c)| (b, c))
        .collect();
    let expected_strings = success.len() == 10
        && success
            .iter()
            .all(|(b, _)| b[..5].chars().filter(|&c| c == '1').count() == 3);
    let worst = success
        .iter()
        .map(|(_, c)| (*c as f64 - mean).abs() / sigma)
        .fold(0.0, f64::max);
    let p_err = (stats.estimated_p_s - 5.0 / 6.0).abs();
    outcome(
        p_err <= 0.005 && expected_strings && worst <= 5.0,
        format!(
            "p_s = {:.5} over {SHOTS} shots, {} success strings, worst deviation {worst:.2} sigma",
            stats.estimated_p_s,
            success.len()
        ),
    )
}

fn robustness_anchors() -> Result<Outcome> {
    let grid = default_grid();
    let rows = fidelity_sweep(&grid, FidelityMode::PostSelectedSuccess)?;
    let at = |t: f64| {
        rows.iter()
            .find(|r| (r.theta - t).abs() < 1e-12)
            .map(|r| r.fidelity)
            .unwrap_or(f64::NAN)
    };
    let (f0, f1, f10) = (at(0.0), at(0.01), at(0.1));
    let ok = rows.len() == 101 && (f0 - 1.0).abs() <= 1e-12 && f1 >= 0.99 && f10 <= f1;
    outcome(
        ok,
        format!("post-selected mode, F(0) = {f0:.15}, F(0.01) = {f1:.6}, F(0.1) = {f10:.6}"),
    )
}

fn random_circuit(rng: &mut ChaCha8Rng) -> Result<Circuit> {
    let n = rng.random_range(1..=6);
    let mut c = Circuit::with_qubits(n)?;
    for i in 0..rng.random_range(1..=10) {
        let mut qubits: Vec<usize> = (0..n).collect();
        for j in (1..n).rev() {
            qubits.swap(j, rng.random_range(0..=j));
        }
        let n_controls = rng.random_range(0..n.min(4));
        let angle =
            |rng: &mut ChaCha8Rng| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let u = Unitary2::rx(angle(rng))
            .mul(&Unitary2::ry(angle(rng)))
            .mul(&Unitary2::rx(angle(rng)));
        let phase = Complex64::from_polar(1.0, angle(rng));
        let e = u.entries();
        let u = Unitary2::new([
            [e[0][0] * phase, e[0][1] * phase],
            [e[1][0] * phase, e[1][1] * phase],
        ])?;
        c.push(GateSpec::custom(
            format!("R{i}"),
            &qubits[1..=n_controls],
            qubits[0],
            u,
        )?)?;
    }
    Ok(c)
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Result<StateVector> {
    let amps = (0..1usize << n)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::normalized(n, amps)
}

fn oracle_equivalence() -> Result<Outcome> {
    let protocol = expansion_oracle_deviation()?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let c = random_circuit(&mut rng)?;
        let u = circuit_unitary(&c)?;
        for _ in 0..4 {
            let s = random_state(&mut rng, c.n_qubits())?;
            worst = worst.max(oracle::apply_matrix(&u, &s)?.max_abs_diff(&c.run(&s)?)?);
        }
    }
    outcome(
        protocol <= 1e-12 && worst <= 1e-12,
        format!("protocol circuit max-abs {protocol:.1e}, 50 random circuits max-abs {worst:.1e}"),
    )
}

fn structural_claim() -> Result<Outcome> {
    let c = build_d4_to_d5_circuit();
    let untouched = verify_untouched(&c, "d4")?;
    let steps = c.step_labels();
    let expected: Vec<String> = (1..=24).map(|i| format!("G{i}")).collect();
    let shape = |label: &str| -> Vec<(Vec<usize>, usize, Unitary2)> {
        c.step(label)
            .iter()
            .map(|g| (g.controls().to_vec(), g.target(), *g.unitary()))
            .collect()
    };
    let same =
        shape("G8") == shape("G10") && shape("G8") == shape("G18") && !shape("G8").is_empty();
    outcome(
        untouched && steps == expected && same,
        format!(
            "d4 untouched = {untouched}, {} labeled steps, G8 = G10 = G18: {same}",
            steps.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("exact success probability", exact_success_probability),
        ("target-state fidelity", target_fidelity),
        ("recyclable branch", recyclable_branch),
        ("overlap claim", overlap_claim),
        ("deterministic expansion", deterministic_expansion),
        ("decomposition identities", decomposition_identities),
        ("Monte-Carlo histogram", monte_carlo),
        ("robustness anchors", robustness_anchors),
        ("oracle equivalence", oracle_equivalence),
        ("structural claim", structural_claim),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        let status = if passed { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {:>2} {name}: {detail} ({:.2?})",
            i + 1,
            start.elapsed()
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
