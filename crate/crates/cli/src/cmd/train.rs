use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use qst_core::nn::{save_checkpoint, Checkpoint, LayerSpec, TrainConfig};
use qst_core::pipeline::{default_layer_spec, train_on_records};
use serde::{Deserialize, Serialize};

use super::{read_data, set, set_some, Common};
use crate::config::{self, parse_layers, required, Layers};
use crate::error::{usage, CliError, CliResult};

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: Common,
    /// Training dataset (JSONL)
    #[arg(long, value_name = "PATH")]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long = "batch")]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    /// Layer sizes such as 66-300-300-66; defaults depend on the topology
    #[arg(long, value_parser = parse_layers)]
    pub layers: Option<Layers>,
    #[arg(long)]
    pub validation_fraction: Option<f64>,
    /// Per-epoch loss CSV; defaults to <out>.history.csv
    #[arg(long, value_name = "PATH")]
    pub history: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainRunConfig {
    pub data: Option<PathBuf>,
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub layers: Option<Vec<usize>>,
    pub validation_fraction: f64,
    pub shuffle_each_epoch: bool,
    pub seed: u64,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing)]
    pub history: Option<PathBuf>,
}

impl Default for TrainRunConfig {
    fn default() -> Self {
        TrainRunConfig {
            data: None,
            epochs: 100,
            batch_size: 512,
            lr: 1e-3,
            layers: None,
            validation_fraction: 0.2,
            shuffle_each_epoch: true,
            seed: 0,
            out: None,
            history: None,
        }
    }
}

pub fn run(args: TrainArgs) -> CliResult<()> {
    let mut cfg: TrainRunConfig = config::load(args.common.config.as_deref())?;
    set_some(&mut cfg.data, args.data);
    set(&mut cfg.epochs, args.epochs);
    set(&mut cfg.batch_size, args.batch_size);
    set(&mut cfg.lr, args.lr);
    set_some(&mut cfg.layers, args.layers.map(|l| l.0));
    set(&mut cfg.validation_fraction, args.validation_fraction);
    set(&mut cfg.seed, args.common.seed);
    set_some(&mut cfg.out, args.common.out);
    set_some(&mut cfg.history, args.history);

    let data_path = required(&cfg.data, "--data")?;
    let out = required(&cfg.out, "--out")?;
    let data = read_data(&data_path)?;
    if data.is_empty() {
        return Err(usage("training set is empty"));
    }
    let topology = data.topology().clone();
    let layer_spec = match &cfg.layers {
        Some(sizes) => LayerSpec::new(sizes.clone())?,
        None => default_layer_spec(&topology),
    };
    let dim = topology.coeff_dim();
    if layer_spec.input_dim() != dim || layer_spec.output_dim() != dim {
        return Err(usage(format!(
            "layers {layer_spec} do not match dataset dimension {dim} ({} n={})",
            topology.kind().as_str(),
            topology.n_qubits()
        )));
    }
    cfg.layers = Some(layer_spec.sizes().to_vec());
    let train_cfg = TrainConfig {
        layer_spec,
        epochs: cfg.epochs,
        batch_size: cfg.batch_size,
        lr: cfg.lr,
        seed: cfg.seed,
        shuffle_each_epoch: cfg.shuffle_each_epoch,
        validation_fraction: cfg.validation_fraction,
    };
    train_cfg.validate()?;

    let start = Instant::now();
    let outcome = train_on_records(&data.records, &train_cfg)?;
    let metadata = serde_json::json!({
        "topology": topology.descriptor(),
        "config": config::to_value(&cfg),
        "dataset": { "master_seed": data.header.master_seed, "count": data.len() },
    });
    save_checkpoint(&Checkpoint::new(outcome.params, cfg.seed, metadata), &out)?;

    let history_path = cfg
        .history
        .clone()
        .unwrap_or_else(|| out.with_extension("history.csv"));
    let mut text = String::from("epoch,train_loss,val_loss\n");
    for h in &outcome.history {
        let val = h.val_loss.map(|v| v.to_string()).unwrap_or_default();
        text.push_str(&format!("{},{},{val}\n", h.epoch, h.train_loss));
    }
    fs::write(&history_path, text).map_err(|e| {
        CliError::Runtime(anyhow::anyhow!("writing {}: {e}", history_path.display()))
    })?;

    let last = outcome.history.last().expect("at least one epoch");
    println!(
        "trained {} on {} records for {} epochs: train loss {:.4}, val loss {}; {:.2?}",
        train_cfg.layer_spec,
        data.len(),
        cfg.epochs,
        last.train_loss,
        last.val_loss
            .map_or("n/a".to_string(), |v| format!("{v:.4}")),
        start.elapsed()
    );
    println!(
        "checkpoint {}, history {}",
        out.display(),
        history_path.display()
    );
    Ok(())
}
