use std::io::Write;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::dataset::DatasetRecord;
use crate::nn::{cosine_similarity, predict_batch, row_matrix, ModelParams};
use crate::parallel::map_indexed;
use crate::quantum::{
    build_hamiltonian, fidelity_f1, fidelity_f2, ground_state, CoeffVector, MeasurementVector,
    PureState, QuantumError, DEFAULT_GAP_TOL,
};

/// Anything that maps measurement rows to coefficient rows.
pub trait CoeffPredictor: Sync {
    fn predict_rows(&self, inputs: ArrayView2<f64>) -> Result<Array2<f64>, PipelineError>;
}

impl CoeffPredictor for ModelParams {
    fn predict_rows(&self, inputs: ArrayView2<f64>) -> Result<Array2<f64>, PipelineError> {
        Ok(predict_batch(self, inputs)?)
    }
}

/// Single forward pass; the result's direction is meaningful, its scale is not.
pub fn predict(params: &ModelParams, m: &MeasurementVector) -> Result<CoeffVector, PipelineError> {
    let topology = m.topology();
    if params.output_dim() != topology.coeff_dim() {
        return Err(PipelineError::DimensionMismatch {
            expected: topology.coeff_dim(),
            found: params.output_dim(),
        });
    }
    let out = params.predict_rows(row_matrix(&[m.values()])?.view())?;
    Ok(CoeffVector::new(topology.clone(), out.row(0).to_vec())?)
}

#[derive(Debug, Clone)]
pub enum Reconstruction {
    State(PureState),
    /// The predicted Hamiltonian has no unique ground state.
    Degenerate {
        gap: f64,
    },
}

impl Reconstruction {
    pub fn gap(&self) -> f64 {
        match self {
            Reconstruction::State(psi) => psi.gap(),
            Reconstruction::Degenerate { gap } => *gap,
        }
    }

    pub fn state(&self) -> Option<&PureState> {
        match self {
            Reconstruction::State(psi) => Some(psi),
            Reconstruction::Degenerate { .. } => None,
        }
    }
}

/// Ground state of the Hamiltonian built from `h_pred`.
pub fn reconstruct_state(
    h_pred: &CoeffVector,
    gap_tol: f64,
) -> Result<Reconstruction, PipelineError> {
    match ground_state(&build_hamiltonian(h_pred), gap_tol) {
        Ok(psi) => Ok(Reconstruction::State(psi)),
        Err(QuantumError::DegenerateGroundState { gap }) => Ok(Reconstruction::Degenerate { gap }),
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvalOptions {
    pub gap_tol: f64,
    pub workers: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            gap_tol: DEFAULT_GAP_TOL,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordEval {
    pub record_index: usize,
    pub f1: Option<f64>,
    pub f2: Option<f64>,
    pub cos_angle: f64,
    /// Spectral gap of the unit-norm predicted Hamiltonian.
    pub gap: f64,
    pub failed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityStats {
    pub max: f64,
    pub min: f64,
    /// Population standard deviation.
    pub std: f64,
    pub mean: f64,
}

impl FidelityStats {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(FidelityStats {
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            std: var.sqrt(),
            mean,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub records: Vec<RecordEval>,
    pub f1: Option<FidelityStats>,
    pub f2: Option<FidelityStats>,
    pub mean_cos_angle: f64,
    pub failures: usize,
}

impl EvalReport {
    pub fn from_records(records: Vec<RecordEval>) -> Self {
        let ok: Vec<&RecordEval> = records.iter().filter(|r| !r.failed).collect();
        let f1: Vec<f64> = ok.iter().filter_map(|r| r.f1).collect();
        let f2: Vec<f64> = ok.iter().filter_map(|r| r.f2).collect();
        let mean_cos_angle =
            records.iter().map(|r| r.cos_angle).sum::<f64>() / records.len().max(1) as f64;
        EvalReport {
            f1: FidelityStats::from_values(&f1),
            f2: FidelityStats::from_values(&f2),
            failures: records.len() - ok.len(),
            mean_cos_angle,
            records,
        }
    }

    pub fn mean_f1(&self) -> f64 {
        self.f1.map_or(f64::NAN, |s| s.mean)
    }

    pub fn mean_f2(&self) -> f64 {
        self.f2.map_or(f64::NAN, |s| s.mean)
    }

    /// `record_index,f1,f2,cos_angle,gap,failed`; fidelities are empty for failures.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), PipelineError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["record_index", "f1", "f2", "cos_angle", "gap", "failed"])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            out.write_record([
                r.record_index.to_string(),
                opt(r.f1),
                opt(r.f2),
                r.cos_angle.to_string(),
                r.gap.to_string(),
                r.failed.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    /// Table-style aggregate block: max/min/std/mean for f1 and f2.
    pub fn aggregate_json(&self) -> serde_json::Value {
        serde_json::json!({
            "count": self.records.len(),
            "failures": self.failures,
            "mean_cos_angle": self.mean_cos_angle,
            "f1": self.f1,
            "f2": self.f2,
        })
    }

    pub fn summary_line(&self) -> String {
        let fmt = |s: Option<FidelityStats>| match s {
            Some(s) => format!(
                "mean {:.3} max {:.3} min {:.3} std {:.3e}",
                s.mean, s.max, s.min, s.std
            ),
            None => "n/a".to_string(),
        };
        format!(
            "f1: {} | f2: {} | failures {}/{}",
            fmt(self.f1),
            fmt(self.f2),
            self.failures,
            self.records.len()
        )
    }
}

/// Scores predicted coefficient rows (one per record) against each
/// record's true ground state, rebuilt from its stored `h`.
pub fn evaluate_predictions(
    records: &[DatasetRecord],
    predictions: ArrayView2<f64>,
    opts: &EvalOptions,
) -> Result<EvalReport, PipelineError> {
    if records.is_empty() {
        return Err(PipelineError::EmptyTestSet);
    }
    if predictions.nrows() != records.len() {
        return Err(PipelineError::DimensionMismatch {
            expected: records.len(),
            found: predictions.nrows(),
        });
    }
    let results = map_indexed(records.len(), opts.workers, |i| {
        evaluate_one(i, &records[i], predictions.row(i).to_vec(), opts.gap_tol)
    });
    let evals = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(EvalReport::from_records(evals))
}

fn evaluate_one(
    index: usize,
    record: &DatasetRecord,
    row: Vec<f64>,
    gap_tol: f64,
) -> Result<RecordEval, PipelineError> {
    let topology = record.h.topology();
    let h_pred = CoeffVector::new(topology.clone(), row)?;
    let norm = h_pred.norm();
    let cos_angle = if norm > 0.0 {
        cosine_similarity(h_pred.values(), record.h.values())?
    } else {
        0.0
    };
    let failure = |gap| RecordEval {
        record_index: index,
        f1: None,
        f2: None,
        cos_angle,
        gap,
        failed: true,
    };
    if norm == 0.0 {
        return Ok(failure(0.0));
    }
    let truth = ground_state(&build_hamiltonian(&record.h), gap_tol)?.density_matrix();
    match reconstruct_state(&h_pred.scaled(1.0 / norm), gap_tol)? {
        Reconstruction::Degenerate { gap } => Ok(failure(gap)),
        Reconstruction::State(psi) => {
            let rho_nn = psi.density_matrix();
            Ok(RecordEval {
                record_index: index,
                f1: Some(fidelity_f1(truth.as_operator(), rho_nn.as_operator())?),
                f2: Some(fidelity_f2(&truth, &rho_nn)?),
                cos_angle,
                gap: psi.gap(),
                failed: false,
            })
        }
    }
}

pub fn measurement_matrix(records: &[DatasetRecord]) -> Result<Array2<f64>, PipelineError> {
    let rows: Vec<&[f64]> = records.iter().map(|r| r.m.values()).collect();
    Ok(row_matrix(&rows)?)
}

pub fn coefficient_matrix(records: &[DatasetRecord]) -> Result<Array2<f64>, PipelineError> {
    let rows: Vec<&[f64]> = records.iter().map(|r| r.h.values()).collect();
    Ok(row_matrix(&rows)?)
}

/// Predict every record's coefficients, reconstruct, and score.
pub fn evaluate_model<P: CoeffPredictor + ?Sized>(
    predictor: &P,
    records: &[DatasetRecord],
    opts: &EvalOptions,
) -> Result<EvalReport, PipelineError> {
    if records.is_empty() {
        return Err(PipelineError::EmptyTestSet);
    }
    let inputs = measurement_matrix(records)?;
    let predictions = predictor.predict_rows(inputs.view())?;
    let dim = records[0].h.values().len();
    if predictions.ncols() != dim {
        return Err(PipelineError::DimensionMismatch {
            expected: dim,
            found: predictions.ncols(),
        });
    }
    evaluate_predictions(records, predictions.view(), opts)
}
