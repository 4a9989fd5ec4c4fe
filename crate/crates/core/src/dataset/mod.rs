//! Random k-local Hamiltonians, their ground-state measurements, and the
//! on-disk dataset format.

mod file;
mod sampling;
pub mod seed;

pub use file::{
    generate_dataset, read_dataset, split_dataset, write_dataset, DatasetFile, DatasetHeader,
    FORMAT_VERSION,
};
pub use sampling::{
    add_measurement_noise, generate_record, recompute_measurements, sample_coeffs, DatasetRecord,
    SamplingParams, SamplingSpec,
};

use thiserror::Error;

use crate::quantum::QuantumError;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid sampling spec: {0}")]
    InvalidSpec(String),
    #[error("generation failed at index {index:?} (seed {seed}): every resample was degenerate")]
    GenerationFailed { index: Option<usize>, seed: u64 },
    #[error("unsupported dataset format version {0}")]
    UnsupportedVersion(u64),
    #[error("truncated dataset: header declares {expected} records, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("record count mismatch: header declares {header}, file holds at least {found}")]
    CountMismatch { header: usize, found: usize },
    #[error("line {line}: vector length {found} does not match topology dimension {expected}")]
    TopologyMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("malformed dataset: {0}")]
    Malformed(String),
    #[error("need {needed} records, only {available} available")]
    Insufficient { needed: usize, available: usize },
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
