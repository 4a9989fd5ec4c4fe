use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use super::NnError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First and second moment estimates, shaped like the parameters.
#[derive(Debug, Clone)]
pub struct AdamState {
    pub config: AdamConfig,
    pub step: u64,
    pub m: ModelParams,
    pub v: ModelParams,
}

impl AdamState {
    pub fn new(params: &ModelParams, config: AdamConfig) -> Self {
        AdamState {
            config,
            step: 0,
            m: params.zeros_like(),
            v: params.zeros_like(),
        }
    }
}

/// One bias-corrected Adam update, in place. Rejects non-finite gradients
/// before touching any state.
pub fn adam_step(
    params: &mut ModelParams,
    grads: &ModelParams,
    state: &mut AdamState,
) -> Result<(), NnError> {
    if !params.same_shape(grads) || !params.same_shape(&state.m) {
        return Err(NnError::ShapeMismatch(
            "gradient shape differs from parameters".into(),
        ));
    }
    if let Some(k) = grads.iter().position(|g| !g.is_finite()) {
        return Err(NnError::NonFiniteGradient(k));
    }
    let AdamConfig {
        lr,
        beta1,
        beta2,
        eps,
    } = state.config;
    state.step += 1;
    let t = state.step as i32;
    let c1 = 1.0 - beta1.powi(t);
    let c2 = 1.0 - beta2.powi(t);
    state
        .m
        .zip_apply(grads, |m, g| *m = beta1 * *m + (1.0 - beta1) * g);
    state
        .v
        .zip_apply(grads, |v, g| *v = beta2 * *v + (1.0 - beta2) * g * g);
    let m = &state.m;
    let v = &state.v;
    for ((layer, ml), vl) in params.layers.iter_mut().zip(&m.layers).zip(&v.layers) {
        let update = |theta: &mut f64, m: f64, v: f64| {
            let m_hat = m / c1;
            let v_hat = v / c2;
            *theta -= lr * m_hat / (v_hat.sqrt() + eps);
        };
        ndarray::Zip::from(&mut layer.weights)
            .and(&ml.weights)
            .and(&vl.weights)
            .for_each(|t, &m, &v| update(t, m, v));
        ndarray::Zip::from(&mut layer.bias)
            .and(&ml.bias)
            .and(&vl.bias)
            .for_each(|t, &m, &v| update(t, m, v));
    }
    Ok(())
}
