use super::eigen::{trace_norm, HermitianEigen};
use super::operator::Operator;
use super::state::DensityMatrix;
use super::QuantumError;

/// Eigenvalues in `[-PSD_TOL, 0)` are treated as zero; anything lower is rejected.
pub const PSD_TOL: f64 = 1e-10;

/// Normalized Hilbert-Schmidt overlap `Tr(AB) / sqrt(Tr(A^2) Tr(B^2))`.
///
/// Works for any nonzero Hermitian pair; positivity is not needed.
pub fn fidelity_f1(a: &Operator, b: &Operator) -> Result<f64, QuantumError> {
    if a.dim() != b.dim() {
        return Err(QuantumError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let aa = a.trace_product(a).re;
    let bb = b.trace_product(b).re;
    if aa <= 0.0 || bb <= 0.0 {
        return Err(QuantumError::ZeroNorm);
    }
    Ok(a.trace_product(b).re / (aa.sqrt() * bb.sqrt()))
}

/// Uhlmann fidelity `Tr sqrt(sqrt(A) B sqrt(A))`, in `[0, 1]`.
///
/// Evaluated as the trace norm of `sqrt(A) sqrt(B)` (same value). Taking
/// singular values directly keeps round-off eigenvalues of order 1e-16 from
/// surfacing as 1e-8 errors through a second square root.
pub fn fidelity_f2(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QuantumError> {
    if a.dim() != b.dim() {
        return Err(QuantumError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let sqrt_a = psd_sqrt(a.as_operator())?;
    let sqrt_b = psd_sqrt(b.as_operator())?;
    Ok(trace_norm(&sqrt_a.matmul(&sqrt_b)).clamp(0.0, 1.0))
}

fn psd_sqrt(op: &Operator) -> Result<Operator, QuantumError> {
    let eig = HermitianEigen::new(op);
    match eig.eigenvalues().first() {
        Some(&low) if low < -PSD_TOL => Err(QuantumError::NotPsd(low)),
        _ => Ok(eig.apply(|x| x.max(0.0).sqrt())),
    }
}
