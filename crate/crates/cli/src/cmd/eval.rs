use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::Args;
use qst_core::pipeline::{
    coefficient_matrix, evaluate_model, evaluate_predictions, EvalOptions, EvalReport,
};
use qst_core::quantum::DEFAULT_GAP_TOL;
use serde::{Deserialize, Serialize};

use super::{load_model, read_data, same_topology, set, set_some, Common};
use crate::config::{self, companion, default_workers, required, write_json};
use crate::error::{usage, CliError, CliResult};

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// Test dataset (JSONL)
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,
    /// Score the stored coefficients instead of a model (sanity check, f1 = 1)
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub gap_tol: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    pub model: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub oracle: bool,
    pub gap_tol: f64,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub workers: Option<usize>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            model: None,
            data: None,
            oracle: false,
            gap_tol: DEFAULT_GAP_TOL,
            out: None,
            workers: None,
        }
    }
}

pub fn run(args: EvalArgs) -> CliResult<()> {
    let mut cfg: EvalConfig = config::load(args.common.config.as_deref())?;
    set_some(&mut cfg.model, args.model);
    set_some(&mut cfg.data, args.data);
    cfg.oracle |= args.oracle;
    set(&mut cfg.gap_tol, args.gap_tol);
    set_some(&mut cfg.out, args.common.out);
    set_some(&mut cfg.workers, args.common.workers);

    let data_path = required(&cfg.data, "--data")?;
    let data = read_data(&data_path)?;
    if data.is_empty() {
        return Err(usage(format!("test set {} is empty", data_path.display())));
    }
    let opts = EvalOptions {
        gap_tol: cfg.gap_tol,
        workers: cfg.workers.unwrap_or_else(default_workers),
    };
    let report = if cfg.oracle {
        let truth = coefficient_matrix(&data.records)?;
        evaluate_predictions(&data.records, truth.view(), &opts)?
    } else {
        let model_path = required(&cfg.model, "--model (or --oracle)")?;
        let (ckpt, topology) = load_model(&model_path)?;
        same_topology(&topology, data.topology())?;
        evaluate_model(&ckpt.params, &data.records, &opts)?
    };

    if let Some(out) = &cfg.out {
        write_report(&report, out, &cfg)?;
    }
    println!("{}", report.summary_line());
    println!("mean cos angle {:.4}", report.mean_cos_angle);
    Ok(())
}

fn write_report(report: &EvalReport, out: &PathBuf, cfg: &EvalConfig) -> CliResult<()> {
    let file = File::create(out)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("writing {}: {e}", out.display())))?;
    report.write_csv(BufWriter::new(file))?;
    let json = serde_json::json!({
        "config": config::to_value(cfg),
        "aggregate": report.aggregate_json(),
    });
    write_json(&companion(out, "json"), &json)
}
