use std::io::Write;

use serde::{Deserialize, Serialize};

use super::eval::{
    coefficient_matrix, evaluate_model, measurement_matrix, EvalOptions, EvalReport,
};
use super::PipelineError;
use crate::dataset::DatasetRecord;
use crate::nn::{
    train_with_snapshots, EpochStats, LayerSpec, ModelParams, TrainConfig, TrainOutcome,
};
use crate::quantum::{Topology, TopologyKind};

/// `d-150-300-300-150-d` on open chains, `d-300-300-d` otherwise, where
/// `d` is the topology's coefficient count.
pub fn default_layer_spec(topology: &Topology) -> LayerSpec {
    let d = topology.coeff_dim();
    let hidden: &[usize] = match topology.kind() {
        TopologyKind::OpenChain => &[150, 300, 300, 150],
        _ => &[300, 300],
    };
    LayerSpec::with_hidden(d, hidden).expect("non-empty layer sizes")
}

/// Trains a network on `records` (measurements in, coefficients out).
pub fn train_on_records(
    records: &[DatasetRecord],
    config: &TrainConfig,
) -> Result<TrainOutcome, PipelineError> {
    train_on_records_with_snapshots(records, config, &[])
}

pub fn train_on_records_with_snapshots(
    records: &[DatasetRecord],
    config: &TrainConfig,
    snapshot_epochs: &[usize],
) -> Result<TrainOutcome, PipelineError> {
    if records.is_empty() {
        return Err(PipelineError::Nn(crate::nn::NnError::EmptyDataset));
    }
    let x = measurement_matrix(records)?;
    let y = coefficient_matrix(records)?;
    Ok(train_with_snapshots(
        x.view(),
        y.view(),
        config,
        snapshot_epochs,
    )?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub sizes: Vec<usize>,
    pub epochs: Vec<usize>,
    pub batch_sizes: Vec<usize>,
    pub layer_spec: LayerSpec,
    pub lr: f64,
    pub seed: u64,
    pub validation_fraction: f64,
}

impl SweepGrid {
    /// Sorts and dedups each axis; returns a warning per dropped duplicate.
    pub fn normalized(mut self) -> Result<(SweepGrid, Vec<String>), PipelineError> {
        let mut warnings = Vec::new();
        for (name, axis) in [
            ("sizes", &mut self.sizes),
            ("epochs", &mut self.epochs),
            ("batch_sizes", &mut self.batch_sizes),
        ] {
            if axis.is_empty() {
                return Err(PipelineError::InvalidGrid(format!("{name} axis is empty")));
            }
            if axis.contains(&0) {
                return Err(PipelineError::InvalidGrid(format!(
                    "{name} axis contains 0"
                )));
            }
            let before = axis.len();
            axis.sort_unstable();
            axis.dedup();
            if axis.len() < before {
                warnings.push(format!(
                    "dropped {} duplicate value(s) from {name}",
                    before - axis.len()
                ));
            }
        }
        Ok((self, warnings))
    }

    pub fn train_config(&self, epochs: usize, batch_size: usize) -> TrainConfig {
        TrainConfig {
            epochs,
            batch_size,
            lr: self.lr,
            validation_fraction: self.validation_fraction,
            ..TrainConfig::new(self.layer_spec.clone(), epochs, self.seed)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub size: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub report: EvalReport,
    pub history: Vec<EpochStats>,
}

/// Trains on the first `size` base records for every grid cell and scores
/// each model on `test`. Cells sharing (size, batch) share one run; shorter
/// epoch counts are read off its snapshots. `progress` sees each finished
/// cell with its trained parameters.
pub fn run_sweep(
    grid: &SweepGrid,
    base: &[DatasetRecord],
    test: &[DatasetRecord],
    opts: &EvalOptions,
    mut progress: impl FnMut(&SweepCell, &ModelParams),
) -> Result<Vec<SweepCell>, PipelineError> {
    let (grid, _) = grid.clone().normalized()?;
    if test.is_empty() {
        return Err(PipelineError::EmptyTestSet);
    }
    let largest = *grid.sizes.last().expect("non-empty");
    if largest > base.len() {
        return Err(PipelineError::Insufficient {
            needed: largest,
            available: base.len(),
        });
    }
    let max_epochs = *grid.epochs.last().expect("non-empty");
    let mut cells = Vec::new();
    for &size in &grid.sizes {
        for &batch_size in &grid.batch_sizes {
            let config = grid.train_config(max_epochs, batch_size);
            let outcome = train_on_records_with_snapshots(&base[..size], &config, &grid.epochs)?;
            for (epochs, params) in &outcome.snapshots {
                let cell = SweepCell {
                    size,
                    epochs: *epochs,
                    batch_size,
                    report: evaluate_model(params, test, opts)?,
                    history: outcome.history[..*epochs].to_vec(),
                };
                progress(&cell, params);
                cells.push(cell);
            }
        }
    }
    Ok(cells)
}

/// One row per cell: `size,epochs,batch_size,f1_mean,...,f2_std,failures`.
pub fn write_sweep_csv<W: Write>(cells: &[SweepCell], w: W) -> Result<(), PipelineError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "size",
        "epochs",
        "batch_size",
        "f1_mean",
        "f1_max",
        "f1_min",
        "f1_std",
        "f2_mean",
        "f2_max",
        "f2_min",
        "f2_std",
        "failures",
        "final_train_loss",
    ])?;
    for c in cells {
        let mut row = vec![
            c.size.to_string(),
            c.epochs.to_string(),
            c.batch_size.to_string(),
        ];
        for s in [c.report.f1, c.report.f2] {
            match s {
                Some(s) => row.extend([s.mean, s.max, s.min, s.std].map(|v| v.to_string())),
                None => row.extend(std::iter::repeat(String::new()).take(4)),
            }
        }
        row.push(c.report.failures.to_string());
        row.push(
            c.history
                .last()
                .map(|h| h.train_loss.to_string())
                .unwrap_or_default(),
        );
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Table layout: one row per (size, batch_size), one `f1`/`f2` column pair
/// per epoch count holding mean fidelities.
pub fn write_sweep_table_csv<W: Write>(cells: &[SweepCell], w: W) -> Result<(), PipelineError> {
    let mut epochs: Vec<usize> = cells.iter().map(|c| c.epochs).collect();
    epochs.sort_unstable();
    epochs.dedup();
    let mut rows: Vec<(usize, usize)> = cells.iter().map(|c| (c.size, c.batch_size)).collect();
    rows.sort_unstable();
    rows.dedup();

    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["size".to_string(), "batch_size".to_string()];
    for e in &epochs {
        header.push(format!("epoch{e}_f1"));
        header.push(format!("epoch{e}_f2"));
    }
    out.write_record(&header)?;
    for (size, batch) in rows {
        let mut row = vec![size.to_string(), batch.to_string()];
        for &e in &epochs {
            match cells
                .iter()
                .find(|c| c.size == size && c.batch_size == batch && c.epochs == e)
            {
                Some(c) => {
                    row.push(c.report.mean_f1().to_string());
                    row.push(c.report.mean_f2().to_string());
                }
                None => row.extend([String::new(), String::new()]),
            }
        }
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}
