use super::state::{check_normalized, PureState};
use super::topology::{MeasurementVector, Topology};
use super::QuantumError;

const IMAG_TOL: f64 = 1e-10;

/// Deduplicated 1- and 2-body Pauli expectations of `psi` in canonical
/// order. Ring slots report the average over translated copies.
pub fn measure_local(
    psi: &PureState,
    topology: &Topology,
) -> Result<MeasurementVector, QuantumError> {
    if psi.dim() != topology.hilbert_dim() {
        return Err(QuantumError::DimensionMismatch {
            expected: topology.hilbert_dim(),
            found: psi.dim(),
        });
    }
    let amps = psi.amplitudes();
    check_normalized(amps)?;
    let mut values = Vec::with_capacity(topology.coeff_dim());
    for term in topology.terms() {
        let mut acc = 0.0;
        for copy in &term.copies {
            let e = copy.expectation(amps);
            if e.im.abs() > IMAG_TOL {
                return Err(QuantumError::ComplexExpectation(e.im));
            }
            acc += e.re;
        }
        values.push(acc / term.copies.len() as f64);
    }
    MeasurementVector::new(topology.clone(), values)
}
