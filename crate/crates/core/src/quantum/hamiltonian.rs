use super::operator::Operator;
use super::topology::{CoeffVector, Topology};
use super::QuantumError;

/// `H = sum_k h_k B_k` over the canonical basis of the vector's topology.
pub fn build_hamiltonian(h: &CoeffVector) -> Operator {
    let topology = h.topology();
    let mut op = Operator::zeros(topology.hilbert_dim());
    for (term, &coeff) in topology.terms().iter().zip(h.values()) {
        if coeff == 0.0 {
            continue;
        }
        for copy in &term.copies {
            copy.accumulate_into(&mut op, coeff);
        }
    }
    op
}

/// Inverse of [`build_hamiltonian`] by Pauli orthogonality:
/// `h_k = Re Tr(H S_k) / (2^n |S_k|)` where `S_k` is the sum of the slot's copies.
///
/// Components of `H` outside the topology's span are dropped.
pub fn project_to_coeffs(h: &Operator, topology: &Topology) -> Result<CoeffVector, QuantumError> {
    if h.dim() != topology.hilbert_dim() {
        return Err(QuantumError::DimensionMismatch {
            expected: topology.hilbert_dim(),
            found: h.dim(),
        });
    }
    let scale = topology.hilbert_dim() as f64;
    let values = topology
        .terms()
        .iter()
        .map(|term| {
            let tr: f64 = term.copies.iter().map(|p| p.trace_with(h).re).sum();
            tr / (scale * term.copies.len() as f64)
        })
        .collect();
    CoeffVector::new(topology.clone(), values)
}
