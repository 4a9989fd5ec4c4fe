//! End-to-end experiment: predict coefficients, rebuild the ground state,
//! score it against the truth.

mod eval;
mod noise;
mod sweep;

pub use eval::{
    coefficient_matrix, evaluate_model, evaluate_predictions, measurement_matrix, predict,
    reconstruct_state, CoeffPredictor, EvalOptions, EvalReport, FidelityStats, Reconstruction,
    RecordEval,
};
pub use noise::{noise_robustness_eval, write_noise_csv, NoisePoint};
pub use sweep::{
    default_layer_spec, run_sweep, train_on_records, train_on_records_with_snapshots,
    write_sweep_csv, write_sweep_table_csv, SweepCell, SweepGrid,
};

use thiserror::Error;

use crate::dataset::DatasetError;
use crate::nn::NnError;
use crate::quantum::QuantumError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("test set is empty")]
    EmptyTestSet,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),
    #[error("need {needed} base records, only {available} available")]
    Insufficient { needed: usize, available: usize },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
