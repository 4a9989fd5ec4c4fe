//! Single-qubit Pauli labels and n-qubit Pauli strings.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//! computational-basis index.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::operator::Operator;
use super::QuantumError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const IM: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PauliLabel {
    X = 1,
    Y = 2,
    Z = 3,
    I = 4,
}

impl PauliLabel {
    /// The three non-identity labels in canonical order.
    pub const XYZ: [PauliLabel; 3] = [PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        match self {
            PauliLabel::X => [[ZERO, ONE], [ONE, ZERO]],
            PauliLabel::Y => [[ZERO, -IM], [IM, ZERO]],
            PauliLabel::Z => [[ONE, ZERO], [ZERO, -ONE]],
            PauliLabel::I => [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    pub fn symbol(self) -> char {
        match self {
            PauliLabel::X => 'X',
            PauliLabel::Y => 'Y',
            PauliLabel::Z => 'Z',
            PauliLabel::I => 'I',
        }
    }
}

/// An n-qubit Pauli product stored as bit masks.
///
/// Acting on a basis state, `P|b> = phase(b) |b ^ x_mask>` with
/// `phase(b) = i^{#Y} (-1)^{popcount(b & z_mask)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: usize,
    z_mask: usize,
    y_count: u32,
}

impl PauliString {
    pub fn from_labels(labels: &[PauliLabel]) -> Self {
        let n = labels.len();
        let mut x_mask = 0;
        let mut z_mask = 0;
        let mut y_count = 0;
        for (q, label) in labels.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match label {
                PauliLabel::X => x_mask |= bit,
                PauliLabel::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                    y_count += 1;
                }
                PauliLabel::Z => z_mask |= bit,
                PauliLabel::I => {}
            }
        }
        PauliString {
            n_qubits: n,
            x_mask,
            z_mask,
            y_count,
        }
    }

    pub fn single(n_qubits: usize, qubit: usize, label: PauliLabel) -> Self {
        let mut labels = vec![PauliLabel::I; n_qubits];
        labels[qubit] = label;
        Self::from_labels(&labels)
    }

    pub fn pair(
        n_qubits: usize,
        (i, j): (usize, usize),
        first: PauliLabel,
        second: PauliLabel,
    ) -> Self {
        let mut labels = vec![PauliLabel::I; n_qubits];
        labels[i] = first;
        labels[j] = second;
        Self::from_labels(&labels)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    #[inline]
    pub fn x_mask(&self) -> usize {
        self.x_mask
    }

    /// Phase picked up by basis state `b`.
    #[inline]
    pub fn phase(&self, b: usize) -> Complex64 {
        let sign = if (b & self.z_mask).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        match self.y_count % 4 {
            0 => Complex64::new(sign, 0.0),
            1 => Complex64::new(0.0, sign),
            2 => Complex64::new(-sign, 0.0),
            _ => Complex64::new(0.0, -sign),
        }
    }

    /// `<psi|P|psi>`; complex in general, real for normalized states.
    pub fn expectation(&self, psi: &[Complex64]) -> Complex64 {
        psi.iter()
            .enumerate()
            .map(|(b, amp)| psi[b ^ self.x_mask].conj() * self.phase(b) * amp)
            .sum()
    }

    /// Adds `coeff * P` into a dense operator of matching dimension.
    pub fn accumulate_into(&self, op: &mut Operator, coeff: f64) {
        let dim = op.dim();
        debug_assert_eq!(dim, 1 << self.n_qubits);
        for b in 0..dim {
            let row = b ^ self.x_mask;
            op[(row, b)] += self.phase(b) * coeff;
        }
    }

    /// `Tr(A P)` for a dense operator `A`.
    pub fn trace_with(&self, op: &Operator) -> Complex64 {
        (0..op.dim())
            .map(|b| op[(b, b ^ self.x_mask)] * self.phase(b))
            .sum()
    }
}

/// Dense tensor product of per-qubit Pauli matrices.
///
/// The all-identity string is not a basis element and is rejected.
pub fn build_basis_element(labels: &[PauliLabel]) -> Result<Operator, QuantumError> {
    if labels.is_empty() {
        return Err(QuantumError::InvalidLabels("empty label list".into()));
    }
    if labels.iter().all(|l| *l == PauliLabel::I) {
        return Err(QuantumError::InvalidLabels(
            "all-identity string is excluded from the basis".into(),
        ));
    }
    let mut out = Operator::identity(1);
    for label in labels {
        let m = label.matrix();
        let small = Operator::from_rows(&[vec![m[0][0], m[0][1]], vec![m[1][0], m[1][1]]]);
        out = out.kron(&small);
    }
    Ok(out)
}
