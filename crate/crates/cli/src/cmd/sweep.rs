use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::Args;
use qst_core::nn::LayerSpec;
use qst_core::pipeline::{
    default_layer_spec, run_sweep, write_sweep_csv, write_sweep_table_csv, EvalOptions, SweepCell,
    SweepGrid,
};
use qst_core::quantum::DEFAULT_GAP_TOL;
use serde::{Deserialize, Serialize};

use super::{read_data, same_topology, set, set_some, Common};
use crate::config::{self, companion, default_workers, parse_layers, required, write_json, Layers};
use crate::error::{usage, CliError, CliResult};

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Training pool; each size trains on its leading records
    #[arg(long, value_name = "PATH")]
    pub base: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub test: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub epochs: Option<Vec<usize>>,
    #[arg(long = "batches", value_delimiter = ',')]
    pub batch_sizes: Option<Vec<usize>>,
    #[arg(long, value_parser = parse_layers)]
    pub layers: Option<Layers>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub validation_fraction: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub base: Option<PathBuf>,
    pub test: Option<PathBuf>,
    pub sizes: Vec<usize>,
    pub epochs: Vec<usize>,
    pub batch_sizes: Vec<usize>,
    pub layers: Option<Vec<usize>>,
    pub lr: f64,
    pub validation_fraction: f64,
    pub seed: u64,
    pub gap_tol: f64,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub workers: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            base: None,
            test: None,
            sizes: vec![500, 1000, 5000, 10000],
            epochs: vec![100, 300, 1000],
            batch_sizes: vec![512],
            layers: None,
            lr: 1e-3,
            validation_fraction: 0.2,
            seed: 0,
            gap_tol: DEFAULT_GAP_TOL,
            out: None,
            workers: None,
        }
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("writing {}: {e}", path.display())))
}

pub fn run(args: SweepArgs) -> CliResult<()> {
    let mut cfg: SweepConfig = config::load(args.common.config.as_deref())?;
    set_some(&mut cfg.base, args.base);
    set_some(&mut cfg.test, args.test);
    set(&mut cfg.sizes, args.sizes);
    set(&mut cfg.epochs, args.epochs);
    set(&mut cfg.batch_sizes, args.batch_sizes);
    set_some(&mut cfg.layers, args.layers.map(|l| l.0));
    set(&mut cfg.lr, args.lr);
    set(&mut cfg.validation_fraction, args.validation_fraction);
    set(&mut cfg.seed, args.common.seed);
    set_some(&mut cfg.out, args.common.out);
    set_some(&mut cfg.workers, args.common.workers);

    let out = required(&cfg.out, "--out")?;
    let base = read_data(&required(&cfg.base, "--base")?)?;
    let test = read_data(&required(&cfg.test, "--test")?)?;
    same_topology(base.topology(), test.topology())?;
    let layer_spec = match &cfg.layers {
        Some(sizes) => LayerSpec::new(sizes.clone())?,
        None => default_layer_spec(base.topology()),
    };
    let dim = base.topology().coeff_dim();
    if layer_spec.input_dim() != dim || layer_spec.output_dim() != dim {
        return Err(usage(format!(
            "layers {layer_spec} do not match dataset dimension {dim}"
        )));
    }
    cfg.layers = Some(layer_spec.sizes().to_vec());

    let grid = SweepGrid {
        sizes: cfg.sizes.clone(),
        epochs: cfg.epochs.clone(),
        batch_sizes: cfg.batch_sizes.clone(),
        layer_spec,
        lr: cfg.lr,
        seed: cfg.seed,
        validation_fraction: cfg.validation_fraction,
    };
    let (grid, warnings) = grid.normalized()?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    grid.train_config(grid.epochs[0], grid.batch_sizes[0])
        .validate()?;
    let opts = EvalOptions {
        gap_tol: cfg.gap_tol,
        workers: cfg.workers.unwrap_or_else(default_workers),
    };

    let cells = run_sweep(&grid, &base.records, &test.records, &opts, |cell, _| {
        eprintln!(
            "size {:>6} epochs {:>5} batch {:>5}: {}",
            cell.size,
            cell.epochs,
            cell.batch_size,
            cell.report.summary_line()
        );
    })?;

    write_sweep_table_csv(&cells, create(&out)?)?;
    let long = companion(&out, "cells.csv");
    write_sweep_csv(&cells, create(&long)?)?;
    let json = serde_json::json!({
        "config": config::to_value(&cfg),
        "cells": cells.iter().map(cell_json).collect::<Vec<_>>(),
    });
    write_json(&companion(&out, "json"), &json)?;

    for c in &cells {
        println!(
            "{}\t{}\t{}\tf1 {:.4}\tf2 {:.4}",
            c.size,
            c.epochs,
            c.batch_size,
            c.report.mean_f1(),
            c.report.mean_f2()
        );
    }
    println!("wrote {}, {}", out.display(), long.display());
    Ok(())
}

fn cell_json(c: &SweepCell) -> serde_json::Value {
    serde_json::json!({
        "size": c.size,
        "epochs": c.epochs,
        "batch_size": c.batch_size,
        "final_train_loss": c.history.last().map(|h| h.train_loss),
        "final_val_loss": c.history.last().and_then(|h| h.val_loss),
        "aggregate": c.report.aggregate_json(),
    })
}
