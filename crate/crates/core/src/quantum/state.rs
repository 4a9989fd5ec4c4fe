use num_complex::Complex64;

use super::eigen::HermitianEigen;
use super::operator::Operator;
use super::topology::MAX_QUBITS;
use super::QuantumError;

/// Default absolute spectral-gap threshold for accepting a ground state.
pub const DEFAULT_GAP_TOL: f64 = 1e-6;

const PHASE_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;

/// Normalized state vector with the global phase fixed so the first
/// amplitude above 1e-12 in modulus is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    energy: f64,
    gap: f64,
}

impl PureState {
    /// Normalizes and phase-fixes `amplitudes`. Energy and gap are left at 0.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, QuantumError> {
        if !amplitudes.len().is_power_of_two() || amplitudes.len() < 2 {
            return Err(QuantumError::DimensionMismatch {
                expected: amplitudes.len().next_power_of_two().max(2),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(QuantumError::NotNormalized(norm));
        }
        let mut amplitudes: Vec<Complex64> = amplitudes.into_iter().map(|z| z / norm).collect();
        fix_global_phase(&mut amplitudes);
        Ok(PureState {
            amplitudes,
            energy: 0.0,
            gap: 0.0,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn overlap(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix {
            op: Operator::outer(&self.amplitudes),
        }
    }
}

fn fix_global_phase(amplitudes: &mut [Complex64]) {
    if let Some(lead) = amplitudes.iter().find(|z| z.norm() > PHASE_TOL).copied() {
        let rot = lead.conj() / lead.norm();
        for z in amplitudes.iter_mut() {
            *z *= rot;
        }
        // remove rounding residue on the reference amplitude
        if let Some(z) = amplitudes.iter_mut().find(|z| z.norm() > PHASE_TOL) {
            z.im = 0.0;
        }
    }
}

/// Ground state of a Hermitian operator via dense diagonalization.
///
/// Rejects spectra whose two lowest eigenvalues are closer than `gap_tol`.
pub fn ground_state(h: &Operator, gap_tol: f64) -> Result<PureState, QuantumError> {
    let dim = h.dim();
    if dim < 2 || !dim.is_power_of_two() || dim > 1 << MAX_QUBITS {
        return Err(QuantumError::DimensionMismatch {
            expected: dim.next_power_of_two().clamp(2, 1 << MAX_QUBITS),
            found: dim,
        });
    }
    if !h.is_finite() {
        return Err(QuantumError::NonFinite("hamiltonian".into()));
    }
    let herm = h.hermiticity_error();
    if herm > 1e-10 {
        return Err(QuantumError::NotHermitian(herm));
    }
    let eig = HermitianEigen::new(h);
    let values = eig.eigenvalues().to_vec();
    let gap = values[1] - values[0];
    if gap < gap_tol {
        return Err(QuantumError::DegenerateGroundState { gap });
    }
    let mut state = PureState::from_amplitudes(eig.lowest_vector())?;
    state.energy = values[0];
    state.gap = gap;
    Ok(state)
}

/// Hermitian unit-trace matrix. Positivity is not enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub const TOL: f64 = 1e-10;

    pub fn new(op: Operator) -> Result<Self, QuantumError> {
        let herm = op.hermiticity_error();
        if herm > Self::TOL {
            return Err(QuantumError::NotHermitian(herm));
        }
        let tr = op.trace();
        if (tr.re - 1.0).abs() > Self::TOL || tr.im.abs() > Self::TOL {
            return Err(QuantumError::BadTrace(tr.re));
        }
        Ok(DensityMatrix { op })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            op: Operator::identity(dim).scaled(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }
}

impl AsRef<Operator> for DensityMatrix {
    fn as_ref(&self) -> &Operator {
        &self.op
    }
}

/// Two-qubit reduced density matrix on `(i, j)`, `i != j`, with qubit `i` as
/// the leading factor.
pub fn partial_trace(
    rho: &DensityMatrix,
    (i, j): (usize, usize),
) -> Result<DensityMatrix, QuantumError> {
    let dim = rho.dim();
    if !dim.is_power_of_two() || dim < 4 {
        return Err(QuantumError::DimensionMismatch {
            expected: dim.next_power_of_two().max(4),
            found: dim,
        });
    }
    let n = dim.trailing_zeros() as usize;
    if i == j || i >= n || j >= n {
        return Err(QuantumError::QubitOutOfRange { i, j, n });
    }
    let bit_i = 1usize << (n - 1 - i);
    let bit_j = 1usize << (n - 1 - j);
    let rest: Vec<usize> = (0..dim).filter(|b| b & (bit_i | bit_j) == 0).collect();
    let embed = |ab: usize, r: usize| -> usize {
        r | if ab & 2 != 0 { bit_i } else { 0 } | if ab & 1 != 0 { bit_j } else { 0 }
    };
    let op = rho.as_operator();
    let mut out = Operator::zeros(4);
    for row in 0..4 {
        for col in 0..4 {
            out[(row, col)] = rest
                .iter()
                .map(|&r| op[(embed(row, r), embed(col, r))])
                .sum();
        }
    }
    Ok(DensityMatrix { op: out })
}

pub(crate) fn check_normalized(psi: &[Complex64]) -> Result<(), QuantumError> {
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(QuantumError::NotNormalized(norm));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::pauli::{build_basis_element, PauliLabel::*};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_ground_state() {
        let h = Operator::from_real_diagonal(&[-1.5, 0.5, 1.5, -0.5]);
        let psi = ground_state(&h, DEFAULT_GAP_TOL).unwrap();
        assert_eq!(
            psi.amplitudes(),
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
        assert_eq!(psi.energy(), -1.5);
        assert!((psi.gap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_ground_state_rejected() {
        let h = build_basis_element(&[Z, I]).unwrap();
        match ground_state(&h, 1e-6) {
            Err(QuantumError::DegenerateGroundState { gap }) => assert!(gap.abs() < 1e-12),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut h = Operator::zeros(2);
        h[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            ground_state(&h, 1e-6),
            Err(QuantumError::NotHermitian(_))
        ));
    }

    #[test]
    fn phase_convention() {
        let psi =
            PureState::from_amplitudes(vec![c(0.0, 0.0), c(0.0, -2.0), c(1.0, 1.0), c(0.0, 0.0)])
                .unwrap();
        let lead = psi.amplitudes()[1];
        assert!(lead.im == 0.0 && lead.re > 0.0);
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_identity_case() {
        let psi =
            PureState::from_amplitudes(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
                .unwrap();
        let rho = psi.density_matrix();
        let red = partial_trace(&rho, (0, 1)).unwrap();
        assert_eq!(red, rho);
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        // (|00> + |11>)/sqrt(2) on qubits (0,1), qubit 2 in |0>
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0b000] = c(s, 0.0);
        amps[0b110] = c(s, 0.0);
        let rho = PureState::from_amplitudes(amps).unwrap().density_matrix();
        for pair in [(0, 2), (1, 2)] {
            let red = partial_trace(&rho, pair).unwrap();
            // I/2 on the Bell qubit tensored with |0><0|
            let expected = Operator::from_real_diagonal(&[0.5, 0.0, 0.5, 0.0]);
            assert!(red.as_operator().max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_index_errors() {
        let rho = DensityMatrix::maximally_mixed(8);
        assert!(partial_trace(&rho, (1, 1)).is_err());
        assert!(partial_trace(&rho, (2, 1)).is_ok());
        assert!(partial_trace(&rho, (0, 3)).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(Operator::identity(2)).is_err());
        let mut op = Operator::identity(2).scaled(0.5);
        op[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(op),
            Err(QuantumError::NotHermitian(_))
        ));
    }
}
