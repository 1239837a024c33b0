use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::sim::state::StateVector;
use crate::{Error, Result};

/// Density matrix over a subset of a register's qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    qubits: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Qubits of the parent register, in the row-index bit order.
    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr(rho^2)`; for Hermitian `rho` this is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Eigenvector of the largest eigenvalue, phase-fixed so its largest
    /// component is real and positive.
    pub fn dominant_state(&self) -> Result<(f64, StateVector)> {
        let eig = self.matrix.clone().symmetric_eigen();
        let (best, &lambda) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .ok_or_else(|| Error::arg("empty density matrix"))?;
        let v = eig.eigenvectors.column(best);
        let pivot = v
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or_default();
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let amps = v.iter().map(|z| z * phase).collect();
        Ok((lambda, StateVector::normalized(self.qubits.len(), amps)?))
    }
}

/// `Tr(rho^2)` of a density matrix.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

fn check_subset(qubits: &[usize], n: usize) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::arg("qubit subset must be non-empty"));
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n {
            return Err(Error::QubitOutOfRange {
                index: q,
                n_qubits: n,
            });
        }
        if qubits[..i].contains(&q) {
            return Err(Error::arg(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

/// Local index of `full` restricted to `qubits`, first listed qubit most significant.
fn sub_index(full: usize, qubits: &[usize], n: usize) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((full >> (n - 1 - q)) & 1))
}

/// Amplitudes reshaped into a `2^|keep| x 2^|rest|` matrix.
fn bipartite_matrix(state: &StateVector, keep: &[usize], rest: &[usize]) -> DMatrix<Complex64> {
    let n = state.n_qubits();
    let mut m = DMatrix::from_element(1 << keep.len(), 1 << rest.len(), Complex64::new(0.0, 0.0));
    for (i, a) in state.amplitudes().iter().enumerate() {
        m[(sub_index(i, keep, n), sub_index(i, rest, n))] = *a;
    }
    m
}

fn complement(keep: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|q| !keep.contains(q)).collect()
}

/// Partial trace of `|psi><psi|` over every qubit not in `keep`.
///
/// Rows and columns are indexed by the kept qubits in the order given.
pub fn reduced_density_matrix(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = state.n_qubits();
    check_subset(keep, n)?;
    let m = bipartite_matrix(state, keep, &complement(keep, n));
    Ok(DensityMatrix {
        qubits: keep.to_vec(),
        matrix: &m * m.adjoint(),
    })
}

/// A state written as `|a> ⊗ |b>` across a bipartition.
#[derive(Debug, Clone)]
pub struct ProductSplit {
    pub a: StateVector,
    pub b: StateVector,
    /// Purity of the reduced state on `b`; 1 iff the split is exact.
    pub purity: f64,
}

/// Splits `state` into a factor on `a_qubits` and one on the remaining qubits.
///
/// The `b` factor is the dominant eigenvector of its reduced density matrix and
/// `a` is the normalized contraction `(I ⊗ <b|) |psi>`. Only meaningful when
/// the returned purity is 1.
pub fn split_product(state: &StateVector, a_qubits: &[usize]) -> Result<ProductSplit> {
    let n = state.n_qubits();
    check_subset(a_qubits, n)?;
    let b_qubits = complement(a_qubits, n);
    if b_qubits.is_empty() {
        return Err(Error::arg(
            "bipartition leaves no qubits on the second side",
        ));
    }
    let rho_b = reduced_density_matrix(state, &b_qubits)?;
    let purity = rho_b.purity();
    let (_, b) = rho_b.dominant_state()?;
    let m = bipartite_matrix(state, a_qubits, &b_qubits);
    let a_amps = (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| m[(r, c)] * b.amplitude(c).conj())
                .sum()
        })
        .collect();
    let a = StateVector::normalized(a_qubits.len(), a_amps)?;
    Ok(ProductSplit { a, b, purity })
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn full_register_gives_projector() {
        let psi = StateVector::from_real(2, &[0.6, 0.0, 0.0, 0.8]).unwrap();
        let rho = reduced_density_matrix(&psi, &[0, 1]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!((rho.matrix()[(0, 3)].re - 0.48).abs() < 1e-12);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let bell = StateVector::from_real(2, &[H, 0.0, 0.0, H]).unwrap();
        let rho = reduced_density_matrix(&bell, &[0]).unwrap();
        assert!((rho.purity() - 0.5).abs() < 1e-12);
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-12);
        let ev = rho.eigenvalues();
        assert!((ev[0] - 0.5).abs() < 1e-12 && (ev[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn purity_of_basic_states() {
        let zero = reduced_density_matrix(&StateVector::zeros(1).unwrap(), &[0]).unwrap();
        assert!((purity(&zero) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn keep_order_sets_row_bit_order() {
        let psi = StateVector::basis(3, "100").unwrap();
        let rho = reduced_density_matrix(&psi, &[2, 0]).unwrap();
        // kept bits (q2, q0) = (0, 1) -> row 1
        assert!((rho.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_subsets() {
        let psi = StateVector::zeros(2).unwrap();
        assert!(reduced_density_matrix(&psi, &[]).is_err());
        assert!(reduced_density_matrix(&psi, &[0, 0]).is_err());
        assert!(matches!(
            reduced_density_matrix(&psi, &[2]),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn split_recovers_product_factors() {
        let a = StateVector::from_real(2, &[0.0, 0.6, 0.8, 0.0]).unwrap();
        let b = StateVector::basis(1, "1").unwrap();
        // interleave: register (a0, b, a1)
        let psi = a.tensor(&b).unwrap().permute_qubits(&[0, 2, 1]).unwrap();
        let split = split_product(&psi, &[0, 2]).unwrap();
        assert!((split.purity - 1.0).abs() < 1e-12);
        assert!(split.a.max_abs_diff(&a).unwrap() < 1e-12);
        assert!(split.b.max_abs_diff(&b).unwrap() < 1e-12);
    }
}
