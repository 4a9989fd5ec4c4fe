use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::Args;
use qst_core::pipeline::{noise_robustness_eval, write_noise_csv, EvalOptions};
use qst_core::quantum::DEFAULT_GAP_TOL;
use serde::{Deserialize, Serialize};

use super::{load_model, read_data, same_topology, set, set_some, Common};
use crate::config::{self, companion, default_workers, required, write_json};
use crate::error::{usage, CliError, CliResult};

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,
    /// Gaussian noise levels added to every measurement
    #[arg(long, value_delimiter = ',')]
    pub sigmas: Option<Vec<f64>>,
    #[arg(long)]
    pub gap_tol: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub model: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub sigmas: Vec<f64>,
    pub seed: u64,
    pub gap_tol: f64,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub workers: Option<usize>,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            model: None,
            data: None,
            sigmas: vec![0.0, 0.01, 0.02, 0.05, 0.1],
            seed: 0,
            gap_tol: DEFAULT_GAP_TOL,
            out: None,
            workers: None,
        }
    }
}

pub fn run(args: NoiseArgs) -> CliResult<()> {
    let mut cfg: NoiseConfig = config::load(args.common.config.as_deref())?;
    set_some(&mut cfg.model, args.model);
    set_some(&mut cfg.data, args.data);
    set(&mut cfg.sigmas, args.sigmas);
    set(&mut cfg.seed, args.common.seed);
    set(&mut cfg.gap_tol, args.gap_tol);
    set_some(&mut cfg.out, args.common.out);
    set_some(&mut cfg.workers, args.common.workers);

    if cfg.sigmas.is_empty() {
        return Err(usage("--sigmas needs at least one value"));
    }
    let (ckpt, topology) = load_model(&required(&cfg.model, "--model")?)?;
    let data_path = required(&cfg.data, "--data")?;
    let data = read_data(&data_path)?;
    if data.is_empty() {
        return Err(usage(format!("test set {} is empty", data_path.display())));
    }
    same_topology(&topology, data.topology())?;
    let opts = EvalOptions {
        gap_tol: cfg.gap_tol,
        workers: cfg.workers.unwrap_or_else(default_workers),
    };
    let points = noise_robustness_eval(&ckpt.params, &data.records, &cfg.sigmas, cfg.seed, &opts)?;

    if let Some(out) = &cfg.out {
        let file = File::create(out)
            .map_err(|e| CliError::Runtime(anyhow::anyhow!("writing {}: {e}", out.display())))?;
        write_noise_csv(&points, BufWriter::new(file))?;
        let json = serde_json::json!({
            "config": config::to_value(&cfg),
            "points": points
                .iter()
                .map(|p| serde_json::json!({ "sigma": p.sigma, "aggregate": p.report.aggregate_json() }))
                .collect::<Vec<_>>(),
        });
        write_json(&companion(out, "json"), &json)?;
    }
    for p in &points {
        println!("sigma {:<6} {}", p.sigma, p.report.summary_line());
    }
    Ok(())
}
