use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::dicke::states::dicke;
use crate::sim::StateVector;
use crate::{Error, Result};

const AMPLITUDE_TOLERANCE: f64 = 1e-12;

/// `C(n, k)` as a big integer, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

fn ratio(num: BigInt, den: BigInt) -> Result<BigRational> {
    if den.is_zero() {
        return Err(Error::arg("binomial ratio has a zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Parameters of a Dicke state split into an accessible part of `accessible`
/// qubits and an untouched remainder, optionally expanded by `added` fresh
/// qubits of which `added_excitations` end up excited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartitionParams {
    /// N: qubits in the source state.
    pub total: usize,
    /// M1: excitations in the source state.
    pub excitations: usize,
    /// k: qubits available for operations.
    pub accessible: usize,
    /// n: qubits appended by the expansion.
    pub added: usize,
    /// m1: excitations contributed by the appended qubits.
    pub added_excitations: usize,
}

impl BipartitionParams {
    /// Plain bipartition with no expansion.
    pub fn new(total: usize, excitations: usize, accessible: usize) -> Result<Self> {
        Self::expansion(total, excitations, accessible, 0, 0)
    }

    pub fn expansion(
        total: usize,
        excitations: usize,
        accessible: usize,
        added: usize,
        added_excitations: usize,
    ) -> Result<Self> {
        if total == 0 {
            return Err(Error::arg("N must be positive"));
        }
        if excitations > total {
            return Err(Error::arg(format!(
                "M1 = {excitations} exceeds N = {total}"
            )));
        }
        if accessible > total {
            return Err(Error::arg(format!("k = {accessible} exceeds N = {total}")));
        }
        if added_excitations > added {
            return Err(Error::arg(format!(
                "m1 = {added_excitations} exceeds n = {added}"
            )));
        }
        Ok(BipartitionParams {
            total,
            excitations,
            accessible,
            added,
            added_excitations,
        })
    }

    /// M0: unexcited qubits in the source state.
    pub fn zeros(&self) -> usize {
        self.total - self.excitations
    }

    /// m0: appended qubits that stay unexcited.
    pub fn added_zeros(&self) -> usize {
        self.added - self.added_excitations
    }

    /// Minimum number of accessible qubits: `k >= M1` when zeros are added
    /// and `k >= M0` when excitations are added.
    pub fn check_accessibility(&self) -> Result<()> {
        let k = self.accessible;
        if self.added_zeros() > 0 && k < self.excitations {
            return Err(Error::Accessibility(format!(
                "adding {} unexcited qubit(s) requires k >= M1 = {}, got k = {k}",
                self.added_zeros(),
                self.excitations
            )));
        }
        if self.added_excitations > 0 && k < self.zeros() {
            return Err(Error::Accessibility(format!(
                "adding {} excitation(s) requires k >= M0 = {}, got k = {k}",
                self.added_excitations,
                self.zeros()
            )));
        }
        Ok(())
    }
}

/// One term `c_j |D^{M-j}>_A |D^j>_B` of a bipartite expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm {
    pub j: usize,
    /// `c_j^2` as an exact fraction.
    pub weight: BigRational,
    pub coefficient: f64,
}

/// `|D_{a+b}^{M}> = sum_j c_j |D_a^{M-j}>_A |D_b^j>_B` over `j` in `[alpha, beta]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeDecomposition {
    pub a_qubits: usize,
    pub b_qubits: usize,
    pub excitations: usize,
    pub alpha: usize,
    pub beta: usize,
    pub terms: Vec<DecompositionTerm>,
}

impl DickeDecomposition {
    fn build(a: usize, b: usize, excitations: usize, alpha: i64, beta: i64) -> Result<Self> {
        if alpha > beta {
            return Err(Error::arg(format!(
                "empty summation range [{alpha}, {beta}]"
            )));
        }
        let den = binomial((a + b) as i64, excitations as i64);
        let terms = (alpha..=beta)
            .map(|j| {
                let num = binomial(a as i64, excitations as i64 - j) * binomial(b as i64, j);
                let weight = ratio(num, den.clone())?;
                let coefficient = weight.to_f64().unwrap_or(f64::NAN).sqrt();
                Ok(DecompositionTerm {
                    j: j as usize,
                    weight,
                    coefficient,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DickeDecomposition {
            a_qubits: a,
            b_qubits: b,
            excitations,
            alpha: alpha as usize,
            beta: beta as usize,
            terms,
        })
    }

    /// Sum of the exact weights; 1 for every valid decomposition.
    pub fn total_weight(&self) -> BigRational {
        self.terms.iter().map(|t| t.weight.clone()).sum()
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coefficient).collect()
    }

    /// The expanded state in `A`-then-`B` qubit order.
    pub fn expand(&self) -> Result<StateVector> {
        let n = self.a_qubits + self.b_qubits;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for t in &self.terms {
            let term = tensor_dicke(self.a_qubits, self.excitations - t.j, self.b_qubits, t.j)?;
            for (acc, a) in amps.iter_mut().zip(term.amplitudes()) {
                *acc += a * t.coefficient;
            }
        }
        StateVector::from_amplitudes(n, amps)
    }
}

fn tensor_dicke(a: usize, ka: usize, b: usize, kb: usize) -> Result<StateVector> {
    match (a, b) {
        (0, _) => dicke(b, kb),
        (_, 0) => dicke(a, ka),
        _ => dicke(a, ka)?.tensor(&dicke(b, kb)?),
    }
}

/// Decomposes `|D_N^{M1}>` over `k` accessible qubits and `N - k` untouched ones.
pub fn decompose_source(params: &BipartitionParams) -> Result<DickeDecomposition> {
    params.check_accessibility()?;
    let (n, m1, k) = (
        params.total as i64,
        params.excitations as i64,
        params.accessible as i64,
    );
    let alpha = (m1 - k).max(0);
    let beta = (n - k).min(m1);
    DickeDecomposition::build(
        params.accessible,
        params.total - params.accessible,
        params.excitations,
        alpha,
        beta,
    )
}

/// Decomposes the expansion target `|D_{N+n}^{M1+m1}>` over the `k + n`
/// qubits on the accessible side and the same `N - k` untouched ones.
pub fn decompose_target(params: &BipartitionParams) -> Result<DickeDecomposition> {
    params.check_accessibility()?;
    let (n_src, k, added) = (
        params.total as i64,
        params.accessible as i64,
        params.added as i64,
    );
    let exc = (params.excitations + params.added_excitations) as i64;
    let alpha = (exc - k - added).max(0);
    let beta = (n_src - k).min(exc);
    DickeDecomposition::build(
        params.accessible + params.added,
        params.total - params.accessible,
        params.excitations + params.added_excitations,
        alpha,
        beta,
    )
}

/// Exact upper bound on the success probability of a restricted-access expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessBound {
    /// `(j, q_j)` over the target decomposition's range.
    pub q: Vec<(usize, BigRational)>,
    pub q_min: BigRational,
    pub p_max: BigRational,
}

/// `q_j = C(k, M1-j) / C(k+n, M1+m1-j)` over the target's `j` range, and
/// `p_max = q_min * C(N+n, M1+m1) / C(N, M1)`.
pub fn max_success_probability(params: &BipartitionParams) -> Result<SuccessBound> {
    let target = decompose_target(params)?;
    let k = params.accessible as i64;
    let m1 = params.excitations as i64;
    let exc = m1 + params.added_excitations as i64;
    let ka = k + params.added as i64;
    let q = (target.alpha..=target.beta)
        .map(|j| {
            let j_ = j as i64;
            Ok((j, ratio(binomial(k, m1 - j_), binomial(ka, exc - j_))?))
        })
        .collect::<Result<Vec<_>>>()?;
    let q_min = q
        .iter()
        .map(|(_, r)| r.clone())
        .min()
        .ok_or_else(|| Error::arg("target decomposition is empty"))?;
    let scale = ratio(
        binomial((params.total + params.added) as i64, exc),
        binomial(params.total as i64, m1),
    )?;
    let p_max = &q_min * scale;
    Ok(SuccessBound { q, q_min, p_max })
}

/// Checks `state == sum_j c_j |D^{M-j}>_A ⊗ |D^j>_B` amplitude by amplitude
/// (within 1e-12), where `a` and `b` list the state's qubits on each side.
/// `A` qubits keep their relative order and `B` follows.
pub fn verify_decomposition(
    state: &StateVector,
    a: &[usize],
    b: &[usize],
    decomposition: &DickeDecomposition,
) -> Result<bool> {
    let n = state.n_qubits();
    if a.len() + b.len() != n {
        return Err(Error::arg(format!(
            "split covers {} qubits, state has {n}",
            a.len() + b.len()
        )));
    }
    if a.len() != decomposition.a_qubits || b.len() != decomposition.b_qubits {
        return Err(Error::arg(format!(
            "split sizes ({}, {}) do not match decomposition sizes ({}, {})",
            a.len(),
            b.len(),
            decomposition.a_qubits,
            decomposition.b_qubits
        )));
    }
    let order: Vec<usize> = a.iter().chain(b).copied().collect();
    let reordered = state.permute_qubits(&order)?;
    let expected = decomposition.expand()?;
    Ok(reordered.max_abs_diff(&expected)? <= AMPLITUDE_TOLERANCE)
}
