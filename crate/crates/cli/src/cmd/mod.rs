pub mod eval;
pub mod gen;
pub mod noise;
pub mod predict;
pub mod sweep;
pub mod train;

use std::path::{Path, PathBuf};

use clap::Args;
use qst_core::dataset::{read_dataset, DatasetError, DatasetFile};
use qst_core::nn::{load_checkpoint, Checkpoint, NnError};
use qst_core::quantum::Topology;

use crate::error::{usage, CliError, CliResult};

#[derive(Debug, Args)]
pub struct Common {
    /// JSON config file; flags given on the command line override its values
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads for generation and evaluation (results do not depend on it)
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,
}

pub fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

pub fn set_some<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

pub fn read_data(path: &Path) -> CliResult<DatasetFile> {
    read_dataset(path).map_err(|e| match e {
        DatasetError::Io(io) => {
            CliError::Runtime(anyhow::anyhow!("reading dataset {}: {io}", path.display()))
        }
        other => usage(format!("dataset {}: {other}", path.display())),
    })
}

/// Loads a checkpoint and the topology recorded in its metadata.
pub fn load_model(path: &Path) -> CliResult<(Checkpoint, Topology)> {
    let ckpt = load_checkpoint(path).map_err(|e| match e {
        NnError::Io(io) => CliError::Runtime(anyhow::anyhow!(
            "reading checkpoint {}: {io}",
            path.display()
        )),
        other => usage(format!("checkpoint {}: {other}", path.display())),
    })?;
    let topology = ckpt
        .header
        .metadata
        .get("topology")
        .cloned()
        .ok_or_else(|| usage(format!("checkpoint {} records no topology", path.display())))
        .and_then(|v| {
            serde_json::from_value::<Topology>(v)
                .map_err(|e| usage(format!("checkpoint {} topology: {e}", path.display())))
        })?;
    if ckpt.params.input_dim() != topology.coeff_dim()
        || ckpt.params.output_dim() != topology.coeff_dim()
    {
        return Err(usage(format!(
            "checkpoint {} layers {} do not fit topology dimension {}",
            path.display(),
            ckpt.layer_spec(),
            topology.coeff_dim()
        )));
    }
    Ok((ckpt, topology))
}

pub fn same_topology(model: &Topology, data: &Topology) -> CliResult<()> {
    if model != data {
        return Err(usage(format!(
            "model topology {} n={} does not match dataset topology {} n={}",
            model.kind().as_str(),
            model.n_qubits(),
            data.kind().as_str(),
            data.n_qubits()
        )));
    }
    Ok(())
}
