use ndarray::{Array1, Array2, Zip};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::NnError;

/// Layer widths from input to output, e.g. `[66, 300, 300, 66]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LayerSpec {
    sizes: Vec<usize>,
}

impl LayerSpec {
    pub fn new(sizes: Vec<usize>) -> Result<Self, NnError> {
        if sizes.len() < 2 {
            return Err(NnError::InvalidSpec(
                "need at least input and output sizes".into(),
            ));
        }
        if sizes.contains(&0) {
            return Err(NnError::InvalidSpec("layer sizes must be positive".into()));
        }
        Ok(LayerSpec { sizes })
    }

    /// `io` in, `hidden...`, `io` out.
    pub fn with_hidden(io: usize, hidden: &[usize]) -> Result<Self, NnError> {
        let mut sizes = vec![io];
        sizes.extend_from_slice(hidden);
        sizes.push(io);
        Self::new(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn param_count(&self) -> usize {
        self.sizes.windows(2).map(|w| w[1] * w[0] + w[1]).sum()
    }
}

impl std::fmt::Display for LayerSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.sizes.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join("-"))
    }
}

/// Affine layer `y = W x + b` with `W` stored out x in.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub weights: Array2<f64>,
    pub bias: Array1<f64>,
}

impl Dense {
    pub fn zeros(fan_in: usize, fan_out: usize) -> Self {
        Dense {
            weights: Array2::zeros((fan_out, fan_in)),
            bias: Array1::zeros(fan_out),
        }
    }

    pub fn fan_in(&self) -> usize {
        self.weights.ncols()
    }

    pub fn fan_out(&self) -> usize {
        self.weights.nrows()
    }
}

/// Network weights. Gradients and Adam moments reuse this shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub layers: Vec<Dense>,
}

impl ModelParams {
    pub fn zeros(spec: &LayerSpec) -> Self {
        ModelParams {
            layers: spec
                .sizes
                .windows(2)
                .map(|w| Dense::zeros(w[0], w[1]))
                .collect(),
        }
    }

    pub fn zeros_like(&self) -> Self {
        ModelParams {
            layers: self
                .layers
                .iter()
                .map(|l| Dense::zeros(l.fan_in(), l.fan_out()))
                .collect(),
        }
    }

    pub fn layer_spec(&self) -> LayerSpec {
        let mut sizes = vec![self.layers[0].fan_in()];
        sizes.extend(self.layers.iter().map(|l| l.fan_out()));
        LayerSpec { sizes }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].fan_in()
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().fan_out()
    }

    pub fn param_count(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    /// All parameters, layer by layer: weights row-major, then bias.
    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(l.bias.iter()))
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.bias.iter_mut()))
    }

    pub fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }

    pub fn same_shape(&self, other: &ModelParams) -> bool {
        self.layers.len() == other.layers.len()
            && self
                .layers
                .iter()
                .zip(&other.layers)
                .all(|(a, b)| a.weights.dim() == b.weights.dim() && a.bias.len() == b.bias.len())
    }

    /// Bitwise equality of every entry.
    pub fn bitwise_eq(&self, other: &ModelParams) -> bool {
        self.same_shape(other)
            && self
                .iter()
                .zip(other.iter())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }

    pub(crate) fn zip_apply(&mut self, other: &ModelParams, mut f: impl FnMut(&mut f64, f64)) {
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            Zip::from(&mut a.weights)
                .and(&b.weights)
                .for_each(|x, &y| f(x, y));
            Zip::from(&mut a.bias)
                .and(&b.bias)
                .for_each(|x, &y| f(x, y));
        }
    }
}

/// He-uniform weights `U(-sqrt(6/fan_in), sqrt(6/fan_in))` (variance
/// `2/fan_in`), zero biases.
pub fn init_params(spec: &LayerSpec, seed: u64) -> ModelParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = ModelParams::zeros(spec);
    for layer in &mut params.layers {
        let limit = (6.0 / layer.fan_in() as f64).sqrt();
        layer.weights.mapv_inplace(|_| rng.gen_range(-limit..limit));
    }
    params
}
