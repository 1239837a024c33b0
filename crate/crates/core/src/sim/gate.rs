use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

const UNITARY_TOLERANCE: f64 = 1e-12;

/// A 2x2 complex matrix acting on a gate's target qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2([[Complex64; 2]; 2]);

impl Unitary2 {
    /// Wraps `m`, rejecting matrices with `|U†U - I| > 1e-12` in any entry.
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let u = Unitary2(m);
        let dev = u.unitarity_defect();
        if !dev.is_finite() || dev > UNITARY_TOLERANCE {
            return Err(Error::arg(format!(
                "matrix is not unitary (defect {dev:e})"
            )));
        }
        Ok(u)
    }

    pub fn identity() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Unitary2([[l, o], [o, l]])
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        Unitary2([[o, l], [l, o]])
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Unitary2([[h, h], [h, -h]])
    }

    /// `exp(-i theta X / 2)`.
    pub fn rx(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        let (cos, misin) = (Complex64::new(c, 0.0), Complex64::new(0.0, -s));
        Unitary2([[cos, misin], [misin, cos]])
    }

    /// `exp(-i theta Y / 2)`.
    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Unitary2([
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    pub fn entries(&self) -> &[[Complex64; 2]; 2] {
        &self.0
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Unitary2) -> Unitary2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Unitary2(out)
    }

    pub fn adjoint(&self) -> Unitary2 {
        let m = &self.0;
        Unitary2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    /// Max-abs entry of `U†U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let id = Unitary2::identity();
        max_entry_diff(&p, &id)
    }

    pub fn max_abs_diff(&self, other: &Unitary2) -> f64 {
        max_entry_diff(self, other)
    }
}

fn max_entry_diff(a: &Unitary2, b: &Unitary2) -> f64 {
    let mut d = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            d = d.max((a.0[i][j] - b.0[i][j]).norm());
        }
    }
    d
}

/// The ideal operation a gate performs on its target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    Rx(f64),
    Ry(f64),
    /// Arbitrary unitary with no text-format name.
    Custom,
}

impl GateKind {
    fn base_unitary(&self) -> Option<Unitary2> {
        match *self {
            GateKind::H => Some(Unitary2::hadamard()),
            GateKind::X => Some(Unitary2::pauli_x()),
            GateKind::Rx(t) => Some(Unitary2::rx(t)),
            GateKind::Ry(t) => Some(Unitary2::ry(t)),
            GateKind::Custom => None,
        }
    }

    /// Gate mnemonic with one `C` per control: `X`, `CNOT`, `CCNOT`, `CH`, `RY`, ...
    pub fn mnemonic(&self, n_controls: usize) -> Option<String> {
        let base = match self {
            GateKind::X if n_controls > 0 => "NOT",
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Rx(_) => "RX",
            GateKind::Ry(_) => "RY",
            GateKind::Custom => return None,
        };
        Some(format!("{}{base}", "C".repeat(n_controls)))
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rx(t) | GateKind::Ry(t) => Some(t),
            _ => None,
        }
    }
}

/// A (multi-)controlled single-target gate `G^{c1,...,cn; t}`.
///
/// The target unitary acts on the subspace where every control reads 1 and
/// the identity acts elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    label: String,
    controls: Vec<usize>,
    target: usize,
    kind: GateKind,
    over_rotation: Option<f64>,
    unitary: Unitary2,
}

impl GateSpec {
    pub fn single(label: impl Into<String>, kind: GateKind, target: usize) -> Self {
        let unitary = kind.base_unitary().unwrap_or_else(Unitary2::identity);
        GateSpec {
            label: label.into(),
            controls: Vec::new(),
            target,
            kind,
            over_rotation: None,
            unitary,
        }
    }

    pub fn controlled(
        label: impl Into<String>,
        kind: GateKind,
        controls: &[usize],
        target: usize,
    ) -> Result<Self> {
        let unitary = kind
            .base_unitary()
            .ok_or_else(|| Error::arg("custom gates need an explicit unitary"))?;
        Self::build(label.into(), kind, controls, target, unitary)
    }

    /// Gate with an arbitrary (checked) target unitary.
    pub fn custom(
        label: impl Into<String>,
        controls: &[usize],
        target: usize,
        unitary: Unitary2,
    ) -> Result<Self> {
        Self::build(label.into(), GateKind::Custom, controls, target, unitary)
    }

    fn build(
        label: String,
        kind: GateKind,
        controls: &[usize],
        target: usize,
        unitary: Unitary2,
    ) -> Result<Self> {
        for (i, c) in controls.iter().enumerate() {
            if *c == target {
                return Err(Error::arg(format!("qubit {c} is both control and target")));
            }
            if controls[..i].contains(c) {
                return Err(Error::arg(format!("control qubit {c} listed twice")));
            }
        }
        Ok(GateSpec {
            label,
            controls: controls.to_vec(),
            target,
            kind,
            over_rotation: None,
            unitary,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn unitary(&self) -> &Unitary2 {
        &self.unitary
    }

    pub fn is_controlled(&self) -> bool {
        !self.controls.is_empty()
    }

    /// Accumulated coherent over-rotation, if any has been applied.
    pub fn over_rotation(&self) -> Option<f64> {
        self.over_rotation
    }

    /// Qubits the gate reads or writes.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls
            .iter()
            .copied()
            .chain(std::iter::once(self.target))
    }

    /// Left-multiplies the target unitary by `Rx(theta)`.
    pub(crate) fn with_over_rotation(&self, theta: f64) -> GateSpec {
        let mut g = self.clone();
        g.unitary = Unitary2::rx(theta).mul(&self.unitary);
        g.over_rotation = Some(self.over_rotation.unwrap_or(0.0) + theta);
        g
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self
            .kind
            .mnemonic(self.controls.len())
            .unwrap_or_else(|| "U".into());
        write!(
            f,
            "{} {}{:?}->{}",
            self.label, name, self.controls, self.target
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_gates_are_unitary() {
        for u in [
            Unitary2::hadamard(),
            Unitary2::pauli_x(),
            Unitary2::rx(0.3),
            Unitary2::ry(-1.2),
        ] {
            assert!(u.unitarity_defect() < 1e-15);
        }
    }

    #[test]
    fn rx_reference_values() {
        assert_eq!(Unitary2::rx(0.0), Unitary2::identity());
        let half_turn = Unitary2::rx(std::f64::consts::PI);
        let expected = Unitary2::new([
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        assert!(half_turn.max_abs_diff(&expected) < 1e-15);
        let m = Unitary2::rx(0.1);
        assert!((m.entries()[0][0].re - 0.998_750_260_394_966).abs() < 1e-14);
        assert!((m.entries()[0][1].im + 0.049_979_169_270_678_33).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_gates() {
        let z = Complex64::new(0.0, 0.0);
        let two = Complex64::new(2.0, 0.0);
        assert!(Unitary2::new([[two, z], [z, two]]).is_err());
        assert!(GateSpec::controlled("g", GateKind::X, &[1], 1).is_err());
        assert!(GateSpec::controlled("g", GateKind::X, &[0, 0], 1).is_err());
        assert!(GateSpec::controlled("g", GateKind::Custom, &[0], 1).is_err());
    }

    #[test]
    fn mnemonics() {
        assert_eq!(GateKind::X.mnemonic(0).unwrap(), "X");
        assert_eq!(GateKind::X.mnemonic(3).unwrap(), "CCCNOT");
        assert_eq!(GateKind::H.mnemonic(1).unwrap(), "CH");
        assert_eq!(GateKind::Ry(0.1).mnemonic(0).unwrap(), "RY");
        assert!(GateKind::Custom.mnemonic(0).is_none());
    }
}
