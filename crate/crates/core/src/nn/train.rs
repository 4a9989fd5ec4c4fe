use ndarray::{ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adam::{adam_step, AdamConfig, AdamState};
use super::loss::loss_cosine_batch;
use super::network::{backward, forward_batch, predict_batch};
use super::params::{init_params, LayerSpec, ModelParams};
use super::NnError;
use crate::dataset::seed::mix;

const INIT_STREAM: u64 = 0x494e_4954;
const VALIDATION_STREAM: u64 = 0x5641_4c49_44;
const EPOCH_STREAM: u64 = 0x4550_4f43_48;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub layer_spec: LayerSpec,
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub seed: u64,
    pub shuffle_each_epoch: bool,
    pub validation_fraction: f64,
}

impl TrainConfig {
    /// Adam with lr 1e-3, batch 512, 20% held out for validation.
    pub fn new(layer_spec: LayerSpec, epochs: usize, seed: u64) -> Self {
        TrainConfig {
            layer_spec,
            epochs,
            batch_size: 512,
            lr: 1e-3,
            seed,
            shuffle_each_epoch: true,
            validation_fraction: 0.2,
        }
    }

    pub fn validate(&self) -> Result<(), NnError> {
        if self.epochs == 0 {
            return Err(NnError::InvalidSpec("epochs must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(NnError::InvalidSpec("batch_size must be at least 1".into()));
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(NnError::InvalidSpec(
                "learning rate must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.validation_fraction) {
            return Err(NnError::InvalidSpec(
                "validation_fraction must lie in [0, 1)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: ModelParams,
    pub history: Vec<EpochStats>,
    /// Parameters captured at the end of each requested epoch.
    pub snapshots: Vec<(usize, ModelParams)>,
}

/// Trains on row-aligned `inputs` / `targets`.
pub fn train(
    inputs: ArrayView2<f64>,
    targets: ArrayView2<f64>,
    config: &TrainConfig,
) -> Result<TrainOutcome, NnError> {
    train_with_snapshots(inputs, targets, config, &[])
}

/// As [`train`], additionally cloning the parameters after each epoch listed
/// in `snapshot_epochs`. A snapshot at epoch `e` equals the final parameters
/// of the same run configured with `epochs = e`.
pub fn train_with_snapshots(
    inputs: ArrayView2<f64>,
    targets: ArrayView2<f64>,
    config: &TrainConfig,
    snapshot_epochs: &[usize],
) -> Result<TrainOutcome, NnError> {
    config.validate()?;
    let spec = &config.layer_spec;
    let n = inputs.nrows();
    if n == 0 {
        return Err(NnError::EmptyDataset);
    }
    if targets.nrows() != n {
        return Err(NnError::ShapeMismatch(format!(
            "{n} inputs but {} targets",
            targets.nrows()
        )));
    }
    if inputs.ncols() != spec.input_dim() {
        return Err(NnError::DimensionMismatch {
            expected: spec.input_dim(),
            found: inputs.ncols(),
        });
    }
    if targets.ncols() != spec.output_dim() {
        return Err(NnError::DimensionMismatch {
            expected: spec.output_dim(),
            found: targets.ncols(),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(mix(
        config.seed,
        VALIDATION_STREAM,
    )));
    let n_train = (((1.0 - config.validation_fraction) * n as f64).floor() as usize).max(1);
    let (train_idx, val_idx) = order.split_at(n_train);
    let x_val = inputs.select(Axis(0), val_idx);
    let y_val = targets.select(Axis(0), val_idx);

    let mut params = init_params(spec, mix(config.seed, INIT_STREAM));
    let mut adam = AdamState::new(
        &params,
        AdamConfig {
            lr: config.lr,
            ..AdamConfig::default()
        },
    );
    let mut history = Vec::with_capacity(config.epochs);
    let mut snapshots = Vec::new();
    let mut epoch_order = train_idx.to_vec();

    for epoch in 1..=config.epochs {
        if config.shuffle_each_epoch {
            epoch_order.copy_from_slice(train_idx);
            let seed = mix(mix(config.seed, EPOCH_STREAM), epoch as u64);
            epoch_order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        let mut loss_sum = 0.0;
        for (b, batch) in epoch_order.chunks(config.batch_size).enumerate() {
            let xb = inputs.select(Axis(0), batch);
            let yb = targets.select(Axis(0), batch);
            let (pred, cache) = forward_batch(&params, xb.view())?;
            let (loss, grad) =
                loss_cosine_batch(pred.view(), yb.view()).map_err(|e| NnError::Aborted {
                    epoch,
                    batch: b,
                    reason: e.to_string(),
                })?;
            if !loss.is_finite() {
                return Err(NnError::Aborted {
                    epoch,
                    batch: b,
                    reason: format!("loss is {loss}"),
                });
            }
            loss_sum += loss * batch.len() as f64;
            let grads = backward(&params, &cache, grad.view())?;
            adam_step(&mut params, &grads, &mut adam).map_err(|e| NnError::Aborted {
                epoch,
                batch: b,
                reason: e.to_string(),
            })?;
        }
        let val_loss = if val_idx.is_empty() {
            None
        } else {
            let pred = predict_batch(&params, x_val.view())?;
            Some(loss_cosine_batch(pred.view(), y_val.view())?.0)
        };
        history.push(EpochStats {
            epoch,
            train_loss: loss_sum / n_train as f64,
            val_loss,
        });
        if snapshot_epochs.contains(&epoch) {
            snapshots.push((epoch, params.clone()));
        }
    }
    Ok(TrainOutcome {
        params,
        history,
        snapshots,
    })
}
