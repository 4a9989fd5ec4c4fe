//! Dense Hermitian eigendecomposition and singular values, backed by faer.

use faer::{Mat, Side};
use num_complex::Complex64;

use super::operator::Operator;

fn to_mat(op: &Operator) -> Mat<Complex64> {
    Mat::from_fn(op.dim(), op.dim(), |r, c| op[(r, c)])
}

/// Spectrum of a Hermitian operator, sorted ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    values: Vec<f64>,
    /// orthonormal eigenvectors, one per column, matching `values`
    vectors: Mat<Complex64>,
}

impl HermitianEigen {
    /// Reads the lower triangle only; the caller guarantees Hermiticity.
    pub fn new(op: &Operator) -> Self {
        let eig = to_mat(op)
            .self_adjoint_eigen(Side::Lower)
            .expect("self-adjoint eigensolver does not fail on finite input");
        let s = eig.S();
        let values: Vec<f64> = (0..op.dim()).map(|k| s[k].re).collect();
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        HermitianEigen {
            values,
            vectors: eig.U().to_owned(),
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues with multiplicity, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    /// Normalized eigenvector of the smallest eigenvalue, arbitrary phase.
    pub fn lowest_vector(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.vectors[(r, 0)]).collect()
    }

    /// `f(H)` for a real function of the spectrum.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Operator {
        let n = self.dim();
        let u = &self.vectors;
        let scaled = Mat::from_fn(n, n, |r, k| u[(r, k)] * f(self.values[k]));
        let out = &scaled * u.adjoint();
        Operator::from_vec(n, (0..n * n).map(|i| out[(i / n, i % n)]).collect())
    }
}

/// Sum of singular values.
pub fn trace_norm(op: &Operator) -> f64 {
    let sv = to_mat(op)
        .singular_values()
        .expect("SVD does not fail on finite input");
    sv.iter().sum()
}
