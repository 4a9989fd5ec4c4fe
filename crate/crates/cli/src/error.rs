use std::fmt;

use qst_core::dataset::DatasetError;
use qst_core::nn::NnError;
use qst_core::pipeline::PipelineError;
use qst_core::quantum::QuantumError;

/// Exit status 2: the request itself is invalid. Exit status 1: the work
/// failed (I/O, degenerate generation, diverged training).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Runtime(err) => write!(f, "{err:#}"),
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl From<anyhow::Error> for CliError {
    fn from(err: anyhow::Error) -> Self {
        CliError::Runtime(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Runtime(err.into())
    }
}

impl From<QuantumError> for CliError {
    fn from(err: QuantumError) -> Self {
        CliError::Usage(err.to_string())
    }
}

impl From<DatasetError> for CliError {
    fn from(err: DatasetError) -> Self {
        match err {
            DatasetError::Io(e) => CliError::Runtime(e.into()),
            DatasetError::GenerationFailed { .. } => CliError::Runtime(err.into()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<NnError> for CliError {
    fn from(err: NnError) -> Self {
        match err {
            NnError::Io(e) => CliError::Runtime(e.into()),
            NnError::Aborted { .. } | NnError::NonFiniteGradient(_) | NnError::ZeroNorm => {
                CliError::Runtime(err.into())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(err: PipelineError) -> Self {
        match err {
            PipelineError::Quantum(e) => e.into(),
            PipelineError::Nn(e) => e.into(),
            PipelineError::Dataset(e) => e.into(),
            PipelineError::Io(e) => CliError::Runtime(e.into()),
            PipelineError::Csv(e) => CliError::Runtime(e.into()),
            other => CliError::Usage(other.to_string()),
        }
    }
}
