use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use qst_core::dataset::{generate_dataset, write_dataset, SamplingParams, SamplingSpec};
use qst_core::quantum::{Topology, TopologyKind};
use serde::{Deserialize, Serialize};

use super::{set, set_some, Common};
use crate::config::{self, default_workers, required};
use crate::error::{usage, CliResult};

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub common: Common,
    /// full, chain or ti_ring
    #[arg(long)]
    pub topology: Option<TopologyKind>,
    #[arg(long)]
    pub n_qubits: Option<usize>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub gap_tol: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenConfig {
    pub topology: TopologyKind,
    pub n_qubits: usize,
    pub count: usize,
    pub seed: u64,
    pub sampling: SamplingParams,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub workers: Option<usize>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            topology: TopologyKind::FullGraph,
            n_qubits: 4,
            count: 1000,
            seed: 0,
            sampling: SamplingParams::default(),
            out: None,
            workers: None,
        }
    }
}

pub fn run(args: GenArgs) -> CliResult<()> {
    let mut cfg: GenConfig = config::load(args.common.config.as_deref())?;
    set(&mut cfg.topology, args.topology);
    set(&mut cfg.n_qubits, args.n_qubits);
    set(&mut cfg.count, args.count);
    set(&mut cfg.seed, args.common.seed);
    set(&mut cfg.sampling.gap_tol, args.gap_tol);
    set_some(&mut cfg.out, args.common.out);
    set_some(&mut cfg.workers, args.common.workers);

    if cfg.count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let out = required(&cfg.out, "--out")?;
    let topology = Topology::new(cfg.topology, cfg.n_qubits)?;
    let spec = SamplingSpec::new(topology, cfg.sampling)?;

    let start = Instant::now();
    let workers = cfg.workers.unwrap_or_else(default_workers);
    let mut file = generate_dataset(&spec, cfg.count, cfg.seed, workers)?;
    file.header.config = Some(config::to_value(&cfg));
    write_dataset(&file, &out)?;

    let mean_gap = file.records.iter().map(|r| r.gap).sum::<f64>() / file.len() as f64;
    println!(
        "wrote {} records ({} n={}, {} measurements each) to {}; mean gap {:.4}; {:.2?}",
        file.len(),
        cfg.topology.as_str(),
        cfg.n_qubits,
        spec.topology.coeff_dim(),
        out.display(),
        mean_gap,
        start.elapsed()
    );
    Ok(())
}
