use ndarray::{Array2, ArrayView2, Axis, Zip};

use super::NnError;

/// Negative cosine similarity and its gradient with respect to `y_pred`.
///
/// `loss = -cos(theta)`, `grad = -(t / (|p||t|) - cos * p / |p|^2)`.
pub fn loss_cosine(y_pred: &[f64], y_true: &[f64]) -> Result<(f64, Vec<f64>), NnError> {
    if y_pred.len() != y_true.len() {
        return Err(NnError::DimensionMismatch {
            expected: y_true.len(),
            found: y_pred.len(),
        });
    }
    let pp: f64 = y_pred.iter().map(|v| v * v).sum();
    let tt: f64 = y_true.iter().map(|v| v * v).sum();
    if pp == 0.0 || tt == 0.0 {
        return Err(NnError::ZeroNorm);
    }
    let pt: f64 = y_pred.iter().zip(y_true).map(|(a, b)| a * b).sum();
    let (np, nt) = (pp.sqrt(), tt.sqrt());
    let cos = pt / (np * nt);
    let grad = y_pred
        .iter()
        .zip(y_true)
        .map(|(p, t)| -(t / (np * nt) - cos * p / pp))
        .collect();
    Ok((-cos, grad))
}

/// Cosine of the angle between two vectors.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64, NnError> {
    loss_cosine(a, b).map(|(l, _)| -l)
}

/// Mean loss over rows and the gradient of that mean.
pub fn loss_cosine_batch(
    y_pred: ArrayView2<f64>,
    y_true: ArrayView2<f64>,
) -> Result<(f64, Array2<f64>), NnError> {
    if y_pred.dim() != y_true.dim() {
        return Err(NnError::ShapeMismatch(format!(
            "prediction {:?} vs target {:?}",
            y_pred.dim(),
            y_true.dim()
        )));
    }
    let rows = y_pred.nrows() as f64;
    let mut grad = Array2::zeros(y_pred.dim());
    let mut total = 0.0;
    for ((p, t), mut g) in y_pred
        .axis_iter(Axis(0))
        .zip(y_true.axis_iter(Axis(0)))
        .zip(grad.axis_iter_mut(Axis(0)))
    {
        let pp = p.dot(&p);
        let tt = t.dot(&t);
        if pp == 0.0 || tt == 0.0 {
            return Err(NnError::ZeroNorm);
        }
        let (np, nt) = (pp.sqrt(), tt.sqrt());
        let cos = p.dot(&t) / (np * nt);
        total -= cos;
        Zip::from(&mut g)
            .and(&p)
            .and(&t)
            .for_each(|g, &p, &t| *g = -(t / (np * nt) - cos * p / pp) / rows);
    }
    Ok((total / rows, grad))
}
