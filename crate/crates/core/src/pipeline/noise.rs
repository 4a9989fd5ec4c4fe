use std::io::Write;

use serde::{Deserialize, Serialize};

use super::eval::{evaluate_model, CoeffPredictor, EvalOptions, EvalReport, FidelityStats};
use super::PipelineError;
use crate::dataset::seed::mix;
use crate::dataset::{add_measurement_noise, DatasetRecord};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoisePoint {
    pub sigma: f64,
    pub report: EvalReport,
}

/// Evaluates a fixed predictor on measurements perturbed with Gaussian noise
/// of each `sigma`. Record `i` draws its noise from `mix(seed, i)` at every
/// sigma, so the levels differ only in scale.
pub fn noise_robustness_eval<P: CoeffPredictor + ?Sized>(
    predictor: &P,
    records: &[DatasetRecord],
    sigmas: &[f64],
    seed: u64,
    opts: &EvalOptions,
) -> Result<Vec<NoisePoint>, PipelineError> {
    sigmas
        .iter()
        .map(|&sigma| {
            let noisy = records
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    Ok(DatasetRecord {
                        m: add_measurement_noise(&r.m, sigma, mix(seed, i as u64))?,
                        ..r.clone()
                    })
                })
                .collect::<Result<Vec<_>, PipelineError>>()?;
            Ok(NoisePoint {
                sigma,
                report: evaluate_model(predictor, &noisy, opts)?,
            })
        })
        .collect()
}

/// `sigma,f1_mean,f1_std,f2_mean,f2_std,failures`, one row per noise level.
pub fn write_noise_csv<W: Write>(points: &[NoisePoint], w: W) -> Result<(), PipelineError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "sigma", "f1_mean", "f1_std", "f2_mean", "f2_std", "failures",
    ])?;
    for p in points {
        let stat = |s: Option<FidelityStats>, f: fn(FidelityStats) -> f64| {
            s.map(|s| f(s).to_string()).unwrap_or_default()
        };
        out.write_record([
            p.sigma.to_string(),
            stat(p.report.f1, |s| s.mean),
            stat(p.report.f1, |s| s.std),
            stat(p.report.f2, |s| s.mean),
            stat(p.report.f2, |s| s.std),
            p.report.failures.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
