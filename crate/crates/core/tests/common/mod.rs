#![allow(dead_code)]

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use qst_core::nn::*;
use qst_core::quantum::{Operator, PauliLabel, PureState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-ish random pure state (normalized complex Gaussian vector).
pub fn random_state(rng: &mut ChaCha8Rng, n_qubits: usize) -> PureState {
    let amps = (0..1usize << n_qubits)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::from_amplitudes(amps).unwrap()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> Operator {
    let a = Operator::from_vec(
        dim,
        (0..dim * dim)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect(),
    );
    let adj = a.adjoint();
    let data = (0..dim * dim)
        .map(|k| (a.as_slice()[k] + adj.as_slice()[k]) * 0.5)
        .collect();
    Operator::from_vec(dim, data)
}

/// 2x2 matrices written out by hand, independent of the crate's tables.
pub fn pauli_2x2(l: PauliLabel) -> DMatrix<Complex64> {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match l {
        PauliLabel::I => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        PauliLabel::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        PauliLabel::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        PauliLabel::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

pub fn dense_string(labels: &[PauliLabel]) -> DMatrix<Complex64> {
    labels
        .iter()
        .fold(DMatrix::from_element(1, 1, c(1.0, 0.0)), |acc, &l| {
            acc.kronecker(&pauli_2x2(l))
        })
}

pub fn to_dmatrix(op: &Operator) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(op.dim(), op.dim(), op.as_slice())
}

/// Reduced state on qubits (i, j) by explicit index summation over
/// |psi><psi|, qubit 0 most significant, i as the leading factor.
pub fn brute_partial_trace(psi: &[Complex64], n: usize, i: usize, j: usize) -> DMatrix<Complex64> {
    let bit = |b: usize, q: usize| (b >> (n - 1 - q)) & 1;
    let mut out = DMatrix::from_element(4, 4, c(0.0, 0.0));
    for a in 0..psi.len() {
        for b in 0..psi.len() {
            let same_rest = (0..n)
                .filter(|&q| q != i && q != j)
                .all(|q| bit(a, q) == bit(b, q));
            if same_rest {
                let r = 2 * bit(a, i) + bit(a, j);
                let s = 2 * bit(b, i) + bit(b, j);
                out[(r, s)] += psi[a] * psi[b].conj();
            }
        }
    }
    out
}

pub fn random_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| r.sample(StandardNormal))
}

pub fn batch_loss(params: &ModelParams, x: &Array2<f64>, y: &Array2<f64>) -> f64 {
    let pred = predict_batch(params, x.view()).unwrap();
    loss_cosine_batch(pred.view(), y.view()).unwrap().0
}

/// Norm-wise relative error between backprop and central differences.
pub fn gradient_check_error(sizes: Vec<usize>, seed: u64) -> f64 {
    let mut r = rng(seed);
    let spec = LayerSpec::new(sizes).unwrap();
    let mut params = init_params(&spec, seed);
    // non-zero biases so every parameter is exercised
    for b in params.layers.iter_mut().flat_map(|l| l.bias.iter_mut()) {
        *b = 0.1 * r.sample::<f64, _>(StandardNormal);
    }
    let x = random_matrix(&mut r, 5, spec.input_dim());
    let y = random_matrix(&mut r, 5, spec.output_dim());
    let (pred, cache) = forward_batch(&params, x.view()).unwrap();
    let (_, g) = loss_cosine_batch(pred.view(), y.view()).unwrap();
    let analytic: Vec<f64> = backward(&params, &cache, g.view())
        .unwrap()
        .iter()
        .copied()
        .collect();

    let h = 1e-6;
    let mut numeric = Vec::with_capacity(analytic.len());
    for k in 0..analytic.len() {
        let orig = *params.iter().nth(k).unwrap();
        *params.iter_mut().nth(k).unwrap() = orig + h;
        let up = batch_loss(&params, &x, &y);
        *params.iter_mut().nth(k).unwrap() = orig - h;
        let down = batch_loss(&params, &x, &y);
        *params.iter_mut().nth(k).unwrap() = orig;
        numeric.push((up - down) / (2.0 * h));
    }
    let diff: f64 = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| (a - n).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| (a + n).powi(2))
        .sum::<f64>()
        .sqrt();
    diff / scale
}

/// Plain scalar Adam on a flat vector; reference for the layered version.
pub fn reference_adam(theta: &mut [f64], grads: &[Vec<f64>], lr: f64) {
    let (b1, b2, eps) = (0.9f64, 0.999f64, 1e-8);
    let mut m = vec![0.0; theta.len()];
    let mut v = vec![0.0; theta.len()];
    for (t, g) in grads.iter().enumerate() {
        let t = (t + 1) as i32;
        for k in 0..theta.len() {
            m[k] = b1 * m[k] + (1.0 - b1) * g[k];
            v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
            let mh = m[k] / (1.0 - b1.powi(t));
            let vh = v[k] / (1.0 - b2.powi(t));
            theta[k] -= lr * mh / (vh.sqrt() + eps);
        }
    }
}
