use num_complex::Complex64;

use crate::sim::StateVector;
use crate::{Error, Result};

/// `|D_n^(k)>`: `n` qubits with `k` excitations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DickeSpec {
    n: usize,
    k: usize,
}

impl DickeSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("a Dicke state needs at least one qubit"));
        }
        if k > n {
            return Err(Error::arg(format!(
                "{k} excitations do not fit in {n} qubits"
            )));
        }
        Ok(DickeSpec { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Equal superposition of every `n`-bit string with Hamming weight `k`.
pub fn dicke_state(spec: DickeSpec) -> Result<StateVector> {
    let dim = 1usize << spec.n;
    let weight = spec.k as u32;
    let support: Vec<usize> = (0..dim).filter(|i| i.count_ones() == weight).collect();
    let amp = Complex64::new(1.0 / (support.len() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for i in support {
        amps[i] = amp;
    }
    StateVector::from_amplitudes(spec.n, amps)
}

/// Shorthand for `dicke_state(DickeSpec::new(n, k)?)`.
pub fn dicke(n: usize, k: usize) -> Result<StateVector> {
    dicke_state(DickeSpec::new(n, k)?)
}

/// `|W_n> = |D_n^(1)>`.
pub fn w_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::arg("W states need at least two qubits"));
    }
    dicke(n, 1)
}

/// `|W̄_n> = |D_n^(n-1)>`, the bit-flip of `|W_n>`.
pub fn wbar_state(n: usize) -> Result<StateVector> {
    if n < 2 {
        return Err(Error::arg("W states need at least two qubits"));
    }
    dicke(n, n - 1)
}

/// The three-qubit W-like state `|110>/2 + |101>/2 + |011>/√2` left behind by
/// a failed expansion.
pub fn wlike_state() -> StateVector {
    let mut amps = [0.0; 8];
    amps[0b110] = 0.5;
    amps[0b101] = 0.5;
    amps[0b011] = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_real(3, &amps).expect("normalized by construction")
}

/// Applies X to every qubit (basis index `i -> !i`).
pub fn flip_all(state: &StateVector) -> StateVector {
    let dim = state.dim();
    let amps: Vec<Complex64> = (0..dim).map(|i| state.amplitude(dim - 1 - i)).collect();
    StateVector::from_amplitudes(state.n_qubits(), amps).expect("permutation preserves norm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::fidelity;

    #[test]
    fn d42_has_six_equal_terms() {
        let d = dicke(4, 2).unwrap();
        let amp = 1.0 / 6f64.sqrt();
        for bits in ["1100", "1010", "1001", "0110", "0101", "0011"] {
            assert!((d.amplitude_of(bits).unwrap().re - amp).abs() < 1e-15);
        }
        assert_eq!(d.support(0.0).len(), 6);
    }

    #[test]
    fn zero_excitations_is_all_zeros() {
        assert_eq!(dicke(3, 0).unwrap(), StateVector::zeros(3).unwrap());
    }

    #[test]
    fn w_states() {
        let w3 = w_state(3).unwrap();
        let amp = 1.0 / 3f64.sqrt();
        for bits in ["001", "010", "100"] {
            assert!((w3.amplitude_of(bits).unwrap().re - amp).abs() < 1e-15);
        }
        let w2 = w_state(2).unwrap();
        assert_eq!(w2.support(0.0), vec![0b01, 0b10]);
        let wb = wbar_state(3).unwrap();
        assert_eq!(wb.support(0.0), vec![0b011, 0b101, 0b110]);
        assert_eq!(flip_all(&w3), wb);
        assert!(w_state(1).is_err());
        assert!(wbar_state(0).is_err());
    }

    #[test]
    fn invalid_spec() {
        assert!(DickeSpec::new(3, 4).is_err());
        assert!(DickeSpec::new(0, 0).is_err());
    }

    #[test]
    fn wlike_amplitudes_and_overlap() {
        let s = wlike_state();
        assert!(
            (s.amplitude_of("011").unwrap().re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15
        );
        assert!((s.amplitude_of("110").unwrap().re - 0.5).abs() < 1e-15);
        assert_eq!(s.amplitude_of("000").unwrap(), Complex64::new(0.0, 0.0));
        // <W̄3|W̄3^L> = (1/2 + 1/2 + 1/√2)/√3
        let exact = (1.0 + std::f64::consts::FRAC_1_SQRT_2).powi(2) / 3.0;
        let f = fidelity(&s, &wbar_state(3).unwrap()).unwrap();
        assert!((f - exact).abs() < 1e-14);
        assert!((f - 0.9714).abs() < 1e-4);
    }
}
