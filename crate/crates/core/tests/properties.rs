use dicke_core::dicke::{
    decompose_source, decompose_target, dicke, flip_all, max_success_probability, BipartitionParams,
};
use dicke_core::protocols::text::{from_text, to_text};
use dicke_core::sim::{
    circuit_unitary, fidelity, oracle, Circuit, GateKind, GateSpec, StateVector, Unitary2,
};
use dicke_core::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| {
            v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3
        })
        .prop_map(move |v| {
            StateVector::normalized(
                n,
                v.into_iter()
                    .map(|(re, im)| Complex64::new(re, im))
                    .collect(),
            )
            .unwrap()
        })
}

/// Random SU(2)-ish unitary from three Euler angles and a phase.
fn arb_unitary() -> impl Strategy<Value = Unitary2> {
    (-3.2f64..3.2, -3.2f64..3.2, -3.2f64..3.2, -3.2f64..3.2).prop_map(|(a, b, c, phase)| {
        let g = Unitary2::rx(a).mul(&Unitary2::ry(b)).mul(&Unitary2::rx(c));
        let p = Complex64::from_polar(1.0, phase);
        let e = g.entries();
        Unitary2::new([[e[0][0] * p, e[0][1] * p], [e[1][0] * p, e[1][1] * p]]).unwrap()
    })
}

fn arb_gate(n: usize) -> impl Strategy<Value = GateSpec> {
    (
        Just(()).prop_perturb(move |_, mut rng| {
            let mut qubits: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                qubits.swap(i, rng.random_range(0..=i));
            }
            let n_controls = rng.random_range(0..n.min(4));
            (qubits[0], qubits[1..=n_controls].to_vec())
        }),
        arb_unitary(),
    )
        .prop_map(|((target, controls), u)| GateSpec::custom("g", &controls, target, u).unwrap())
}

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec(arb_gate(n), 0..=10).prop_map(move |gates| {
            let mut c = Circuit::with_qubits(n).unwrap();
            for g in gates {
                c.push(g).unwrap();
            }
            c
        })
    })
}

proptest! {
    #[test]
    fn gates_preserve_norm(state in arb_state(4), gate in arb_gate(4)) {
        let mut s = state.clone();
        s.apply_gate(&gate).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gates_leave_uncontrolled_amplitudes_bit_identical(state in arb_state(5), gate in arb_gate(5)) {
        let mut s = state.clone();
        s.apply_gate(&gate).unwrap();
        let cmask = gate.controls().iter().fold(0, |m, &c| m | state.mask(c));
        for i in 0..state.dim() {
            if i & cmask != cmask {
                prop_assert_eq!(s.amplitude(i), state.amplitude(i));
            }
        }
    }

    #[test]
    fn oracle_matches_gate_by_gate(circuit in arb_circuit(), seed in any::<u64>()) {
        let n = circuit.n_qubits();
        let u = circuit_unitary(&circuit).unwrap();
        prop_assert!(oracle::unitarity_defect(&u) < 1e-10);
        let basis = StateVector::basis_index(n, (seed as usize) % (1 << n)).unwrap();
        let via_matrix = oracle::apply_matrix(&u, &basis).unwrap();
        prop_assert!(via_matrix.max_abs_diff(&circuit.run(&basis).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn fidelity_is_bounded_symmetric_and_phase_invariant(a in arb_state(3), b in arb_state(3), phase in -3.2f64..3.2) {
        let f = fidelity(&a, &b).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - fidelity(&b, &a).unwrap()).abs() < 1e-12);
        let p = Complex64::from_polar(1.0, phase);
        let rotated = StateVector::from_amplitudes(3, b.amplitudes().iter().map(|z| z * p).collect()).unwrap();
        prop_assert!((f - fidelity(&a, &rotated).unwrap()).abs() < 1e-12);
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn text_format_round_trips(circuit in arb_circuit()) {
        // re-express random gates with named kinds so they are serializable
        let mut named = Circuit::with_qubits(circuit.n_qubits()).unwrap();
        for (i, g) in circuit.gates().iter().enumerate() {
            let kind = match i % 4 { 0 => GateKind::X, 1 => GateKind::H, 2 => GateKind::Rx(0.1 * i as f64), _ => GateKind::Ry(-0.37) };
            let gate = if g.controls().is_empty() {
                GateSpec::single(format!("S{i}"), kind, g.target())
            } else {
                GateSpec::controlled(format!("S{i}"), kind, g.controls(), g.target()).unwrap()
            };
            named.push(gate).unwrap();
        }
        prop_assert_eq!(from_text(&to_text(&named).unwrap()).unwrap(), named);
    }

    #[test]
    fn dicke_states_are_permutation_symmetric(n in 1usize..=6, k_frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let k = ((n as f64) * k_frac).round() as usize;
        let d = dicke(n, k).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(d.permute_qubits(&order).unwrap(), d.clone());
        prop_assert_eq!(flip_all(&d), dicke(n, n - k).unwrap());
    }

    #[test]
    fn decompositions_are_normalized(
        total in 1usize..=12,
        m1_frac in 0.0f64..=1.0,
        k_frac in 0.0f64..=1.0,
        added in 0usize..=3,
        m1a_frac in 0.0f64..=1.0,
    ) {
        let m1 = ((total as f64) * m1_frac).round() as usize;
        let k = ((total as f64) * k_frac).round() as usize;
        let m1a = ((added as f64) * m1a_frac).round() as usize;
        let params = BipartitionParams::expansion(total, m1, k, added, m1a).unwrap();
        if params.check_accessibility().is_ok() {
            let src = decompose_source(&params).unwrap();
            let tgt = decompose_target(&params).unwrap();
            prop_assert!(src.total_weight().is_one());
            prop_assert!(tgt.total_weight().is_one());
            let c2: f64 = tgt.coefficients().iter().map(|c| c * c).sum();
            prop_assert!((c2 - 1.0).abs() < 1e-12);
            let bound = max_success_probability(&params).unwrap();
            prop_assert!(!(bound.p_max < num_rational::BigRational::zero()));
        } else {
            prop_assert!(decompose_source(&params).is_err());
        }
    }
}
