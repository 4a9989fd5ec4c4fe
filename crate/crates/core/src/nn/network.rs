//! Forward and backward passes over row-batched inputs (`batch x features`).

use ndarray::{Array1, Array2, ArrayView2, Axis};

use super::params::ModelParams;
use super::NnError;

/// Per-layer values retained by [`forward_batch`] for [`backward`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// Input to each layer.
    inputs: Vec<Array2<f64>>,
    /// Pre-activation of each layer.
    pre: Vec<Array2<f64>>,
}

impl ForwardCache {
    pub fn pre_activations(&self) -> &[Array2<f64>] {
        &self.pre
    }

    pub fn batch_size(&self) -> usize {
        self.inputs[0].nrows()
    }
}

/// Hidden layers use ReLU; the output layer is affine.
pub fn forward_batch(
    params: &ModelParams,
    x: ArrayView2<f64>,
) -> Result<(Array2<f64>, ForwardCache), NnError> {
    if x.ncols() != params.input_dim() {
        return Err(NnError::DimensionMismatch {
            expected: params.input_dim(),
            found: x.ncols(),
        });
    }
    let last = params.layers.len() - 1;
    let mut inputs = Vec::with_capacity(params.layers.len());
    let mut pre = Vec::with_capacity(params.layers.len());
    let mut a = x.to_owned();
    for (l, layer) in params.layers.iter().enumerate() {
        let z = a.dot(&layer.weights.t()) + &layer.bias;
        let next = if l == last { z.clone() } else { z.mapv(relu) };
        inputs.push(a);
        pre.push(z);
        a = next;
    }
    Ok((a, ForwardCache { inputs, pre }))
}

/// Outputs only; skips building the cache.
pub fn predict_batch(params: &ModelParams, x: ArrayView2<f64>) -> Result<Array2<f64>, NnError> {
    if x.ncols() != params.input_dim() {
        return Err(NnError::DimensionMismatch {
            expected: params.input_dim(),
            found: x.ncols(),
        });
    }
    let last = params.layers.len() - 1;
    let mut a = x.to_owned();
    for (l, layer) in params.layers.iter().enumerate() {
        let mut z = a.dot(&layer.weights.t()) + &layer.bias;
        if l != last {
            z.mapv_inplace(relu);
        }
        a = z;
    }
    Ok(a)
}

pub fn forward(params: &ModelParams, x: &[f64]) -> Result<(Vec<f64>, ForwardCache), NnError> {
    let view = ArrayView2::from_shape((1, x.len()), x).expect("row view");
    let (y, cache) = forward_batch(params, view)?;
    Ok((y.into_raw_vec_and_offset().0, cache))
}

#[inline]
fn relu(z: f64) -> f64 {
    if z > 0.0 {
        z
    } else {
        0.0
    }
}

/// Gradients of `sum_rows <grad_output_row, y_row>` with respect to every
/// parameter. ReLU'(0) = 0.
pub fn backward(
    params: &ModelParams,
    cache: &ForwardCache,
    grad_output: ArrayView2<f64>,
) -> Result<ModelParams, NnError> {
    let n_layers = params.layers.len();
    if cache.inputs.len() != n_layers {
        return Err(NnError::ShapeMismatch(
            "cache depth differs from network depth".into(),
        ));
    }
    if grad_output.dim() != cache.pre[n_layers - 1].dim() {
        return Err(NnError::ShapeMismatch(format!(
            "grad_output {:?} vs output {:?}",
            grad_output.dim(),
            cache.pre[n_layers - 1].dim()
        )));
    }
    let mut grads = params.zeros_like();
    let mut delta = grad_output.to_owned();
    for l in (0..n_layers).rev() {
        grads.layers[l].weights = delta.t().dot(&cache.inputs[l]);
        grads.layers[l].bias = delta.sum_axis(Axis(0));
        if l > 0 {
            let mut prev = delta.dot(&params.layers[l].weights);
            prev.zip_mut_with(&cache.pre[l - 1], |d, &z| {
                if z <= 0.0 {
                    *d = 0.0;
                }
            });
            delta = prev;
        }
    }
    Ok(grads)
}

pub fn row_matrix(rows: &[&[f64]]) -> Result<Array2<f64>, NnError> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut out = Array2::zeros((rows.len(), width));
    for (mut dst, src) in out.axis_iter_mut(Axis(0)).zip(rows) {
        if src.len() != width {
            return Err(NnError::DimensionMismatch {
                expected: width,
                found: src.len(),
            });
        }
        dst.assign(&Array1::from(src.to_vec()));
    }
    Ok(out)
}
