//! Fully-connected ReLU regressor trained with cosine loss and Adam.
//!
//! Everything is float64 and deterministic given its seeds.

mod adam;
mod checkpoint;
mod loss;
mod network;
mod params;
mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use checkpoint::{
    load_checkpoint, save_checkpoint, Checkpoint, CheckpointHeader, CHECKPOINT_VERSION, MAGIC,
};
pub use loss::{cosine_similarity, loss_cosine, loss_cosine_batch};
pub use network::{backward, forward, forward_batch, predict_batch, row_matrix, ForwardCache};
pub use params::{init_params, Dense, LayerSpec, ModelParams};
pub use train::{train, train_with_snapshots, EpochStats, TrainConfig, TrainOutcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("invalid network configuration: {0}")]
    InvalidSpec(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("zero-norm vector in cosine loss")]
    ZeroNorm,
    #[error("non-finite gradient at flat parameter index {0}")]
    NonFiniteGradient(usize),
    #[error("training aborted at epoch {epoch}, batch {batch}: {reason}")]
    Aborted {
        epoch: usize,
        batch: usize,
        reason: String,
    },
    #[error("empty training set")]
    EmptyDataset,
    #[error("not a checkpoint file (bad magic)")]
    BadMagic,
    #[error("truncated checkpoint: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("unsupported checkpoint version {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
