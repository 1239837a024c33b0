use num_complex::Complex64;
use serde::Serialize;

use crate::sim::gate::GateSpec;
use crate::{Error, Result};

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 24;

/// Tolerance for unit-norm checks on caller-supplied amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Branch probabilities below this are treated as impossible outcomes.
pub const IMPOSSIBLE_BRANCH: f64 = 1e-15;

/// Dense amplitude vector over `n_qubits` qubits.
///
/// Basis indices are big-endian: the bitstring `b0 b1 ... b(n-1)` maps to
/// `sum b_i 2^(n-1-i)`, so qubit 0 is the leftmost character of a ket.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Outcome of a single computational-basis measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementRecord {
    pub qubit: usize,
    pub outcome: u8,
    /// Born probability of `outcome`, evaluated before collapse.
    pub probability: f64,
}

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::arg("a register needs at least one qubit"));
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{n_qubits} qubits requested, at most {MAX_QUBITS} supported"
        )));
    }
    Ok(())
}

impl StateVector {
    /// Computational basis state `|bits>`, e.g. `basis(2, "10")` has amplitude 1 at index 2.
    pub fn basis(n_qubits: usize, bits: &str) -> Result<Self> {
        check_register(n_qubits)?;
        if bits.chars().count() != n_qubits {
            return Err(Error::arg(format!(
                "bitstring `{bits}` has length {}, expected {n_qubits}",
                bits.chars().count()
            )));
        }
        let index = parse_bits(bits)?;
        Self::basis_index(n_qubits, index)
    }

    pub fn basis_index(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::arg(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// All-zeros register.
    pub fn zeros(n_qubits: usize) -> Result<Self> {
        Self::basis_index(n_qubits, 0)
    }

    /// Wraps amplitudes that must already have unit norm.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_raw(n_qubits, amplitudes)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::arg(format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(state)
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::from_raw(n_qubits, amplitudes)?;
        let norm = state.norm_sqr();
        if norm <= IMPOSSIBLE_BRANCH {
            return Err(Error::arg("cannot normalize a zero vector"));
        }
        let scale = 1.0 / norm.sqrt();
        state.amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(state)
    }

    /// Real amplitudes, convenient for fixtures.
    pub fn from_real(n_qubits: usize, amplitudes: &[f64]) -> Result<Self> {
        Self::from_amplitudes(
            n_qubits,
            amplitudes
                .iter()
                .map(|&re| Complex64::new(re, 0.0))
                .collect(),
        )
    }

    fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register(n_qubits)?;
        if amplitudes.len() != 1usize << n_qubits {
            return Err(Error::arg(format!(
                "{} amplitudes supplied for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::arg("amplitudes must be finite"));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Amplitude of the basis ket written as a bitstring.
    pub fn amplitude_of(&self, bits: &str) -> Result<Complex64> {
        if bits.len() != self.n_qubits {
            return Err(Error::arg(format!(
                "bitstring `{bits}` does not match {} qubits",
                self.n_qubits
            )));
        }
        Ok(self.amplitudes[parse_bits(bits)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit mask of `qubit` under the big-endian convention.
    pub fn mask(&self, qubit: usize) -> usize {
        1usize << (self.n_qubits - 1 - qubit)
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    /// Bitstring of a basis index, qubit 0 first.
    pub fn bitstring(&self, index: usize) -> String {
        index_to_bits(index, self.n_qubits)
    }

    /// `self ⊗ other`, with `self` on the leading (leftmost) qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n_qubits + other.n_qubits;
        check_register(n)?;
        let mut amplitudes = Vec::with_capacity(1 << n);
        for a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(Self {
            n_qubits: n,
            amplitudes,
        })
    }

    /// Applies `gate` in place. Amplitudes whose control bits are not all 1 are left untouched.
    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        for &q in gate
            .controls()
            .iter()
            .chain(std::iter::once(&gate.target()))
        {
            self.check_qubit(q)?;
        }
        let control_mask = gate
            .controls()
            .iter()
            .fold(0usize, |m, &c| m | self.mask(c));
        let target_mask = self.mask(gate.target());
        let u = gate.unitary().entries();
        for i in 0..self.amplitudes.len() {
            if i & target_mask != 0 || i & control_mask != control_mask {
                continue;
            }
            let j = i | target_mask;
            let (a0, a1) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = u[0][0] * a0 + u[0][1] * a1;
            self.amplitudes[j] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(())
    }

    /// Born probability that `qubit` reads 1.
    pub fn probability_of_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        let mask = self.mask(qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Post-selects `qubit = outcome` and renormalizes.
    ///
    /// Returns the pre-collapse probability of the outcome alongside the state.
    pub fn project(&self, qubit: usize, outcome: u8) -> Result<(f64, StateVector)> {
        if outcome > 1 {
            return Err(Error::arg(format!(
                "measurement outcome must be 0 or 1, got {outcome}"
            )));
        }
        let p_one = self.probability_of_one(qubit)?;
        let total = self.norm_sqr();
        if total <= IMPOSSIBLE_BRANCH {
            return Err(Error::arg("cannot measure a zero-norm state"));
        }
        let p = if outcome == 1 {
            p_one / total
        } else {
            1.0 - p_one / total
        };
        if p < IMPOSSIBLE_BRANCH {
            return Err(Error::arg(format!(
                "outcome {outcome} on qubit {qubit} has probability {p:e}"
            )));
        }
        let mask = self.mask(qubit);
        let scale = 1.0 / (p * total).sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if ((i & mask != 0) as u8) == outcome {
                    a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((
            p,
            StateVector {
                n_qubits: self.n_qubits,
                amplitudes,
            },
        ))
    }

    /// Measures `qubit` in the computational basis.
    ///
    /// The outcome is 0 iff `uniform < P(qubit = 0)`; the returned state is the
    /// renormalized projection.
    pub fn measure_qubit(
        &self,
        qubit: usize,
        uniform: f64,
    ) -> Result<(MeasurementRecord, StateVector)> {
        if !(0.0..1.0).contains(&uniform) {
            return Err(Error::arg(format!(
                "uniform variate {uniform} outside [0, 1)"
            )));
        }
        let total = self.norm_sqr();
        if total <= IMPOSSIBLE_BRANCH {
            return Err(Error::arg("cannot measure a zero-norm state"));
        }
        let p_zero = 1.0 - self.probability_of_one(qubit)? / total;
        let mut outcome = u8::from(uniform >= p_zero);
        // never select a branch that has no support
        if outcome == 0 && p_zero < IMPOSSIBLE_BRANCH {
            outcome = 1;
        } else if outcome == 1 && 1.0 - p_zero < IMPOSSIBLE_BRANCH {
            outcome = 0;
        }
        let (probability, state) = self.project(qubit, outcome)?;
        Ok((
            MeasurementRecord {
                qubit,
                outcome,
                probability,
            },
            state,
        ))
    }

    /// Removes a qubit that is in the definite state `|value>`.
    ///
    /// Fails if any amplitude with the other value exceeds `tolerance`.
    pub fn remove_qubit(&self, qubit: usize, value: u8, tolerance: f64) -> Result<StateVector> {
        self.check_qubit(qubit)?;
        if self.n_qubits == 1 {
            return Err(Error::arg("cannot remove the only qubit of a register"));
        }
        let mask = self.mask(qubit);
        let want = if value == 0 { 0 } else { mask };
        let mut amplitudes = Vec::with_capacity(self.dim() / 2);
        for (i, a) in self.amplitudes.iter().enumerate() {
            if i & mask == want {
                amplitudes.push(*a);
            } else if a.norm() > tolerance {
                return Err(Error::arg(format!(
                    "qubit {qubit} is not in |{value}>: amplitude {a} at {}",
                    self.bitstring(i)
                )));
            }
        }
        Ok(StateVector {
            n_qubits: self.n_qubits - 1,
            amplitudes,
        })
    }

    /// Reorders qubits so that new qubit `k` is old qubit `order[k]`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<StateVector> {
        check_permutation(order, self.n_qubits)?;
        let n = self.n_qubits;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (old, a) in self.amplitudes.iter().enumerate() {
            let mut new = 0usize;
            for (k, &q) in order.iter().enumerate() {
                if old & (1 << (n - 1 - q)) != 0 {
                    new |= 1 << (n - 1 - k);
                }
            }
            amplitudes[new] = *a;
        }
        Ok(StateVector {
            n_qubits: n,
            amplitudes,
        })
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest absolute amplitude difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Indices with `|amplitude| > tolerance`.
    pub fn support(&self, tolerance: f64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.amplitudes[i].norm() > tolerance)
            .collect()
    }
}

/// Pure-state fidelity `|<a|b>|^2`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::arg(format!(
            "permutation of length {} for {n} qubits",
            order.len()
        )));
    }
    for &q in order {
        if q >= n || std::mem::replace(&mut seen[q], true) {
            return Err(Error::arg(format!(
                "{order:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

fn parse_bits(bits: &str) -> Result<usize> {
    bits.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => Err(Error::arg(format!("`{other}` is not a bit"))),
    })
}

pub fn index_to_bits(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .map(|q| {
            if index & (1 << (n_qubits - 1 - q)) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}
