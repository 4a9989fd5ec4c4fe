use std::fs;
use std::path::PathBuf;

use clap::Args;
use qst_core::pipeline::{predict, reconstruct_state, Reconstruction};
use qst_core::quantum::{
    build_hamiltonian, fidelity_f2, ground_state, CoeffVector, MeasurementVector, DEFAULT_GAP_TOL,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{load_model, set, set_some, Common};
use crate::config::{self, required, write_json};
use crate::error::{usage, CliError, CliResult};

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// JSON array of measurements, or an object with "m" and optionally the
    /// true coefficients "h" (a dataset record line works)
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub gap_tol: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PredictConfig {
    pub model: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub gap_tol: f64,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

impl Default for PredictConfig {
    fn default() -> Self {
        PredictConfig {
            model: None,
            input: None,
            gap_tol: DEFAULT_GAP_TOL,
            out: None,
        }
    }
}

fn number_list(v: &Value, what: &str) -> CliResult<Vec<f64>> {
    let arr = v
        .as_array()
        .ok_or_else(|| usage(format!("{what} must be an array of numbers")))?;
    arr.iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| usage(format!("{what} holds a non-number: {x}")))
        })
        .collect()
}

pub fn run(args: PredictArgs) -> CliResult<()> {
    let mut cfg: PredictConfig = config::load(args.common.config.as_deref())?;
    set_some(&mut cfg.model, args.model);
    set_some(&mut cfg.input, args.input);
    set(&mut cfg.gap_tol, args.gap_tol);
    set_some(&mut cfg.out, args.common.out);

    let model_path = required(&cfg.model, "--model")?;
    let input_path = required(&cfg.input, "--input")?;
    let (ckpt, topology) = load_model(&model_path)?;
    let text = fs::read_to_string(&input_path)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("reading {}: {e}", input_path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| usage(format!("input {}: {e}", input_path.display())))?;
    let (m, h) = match &value {
        Value::Array(_) => (number_list(&value, "input")?, None),
        Value::Object(obj) => {
            let m = obj
                .get("m")
                .ok_or_else(|| usage("input object needs an \"m\" array"))?;
            let h = obj.get("h").map(|h| number_list(h, "\"h\"")).transpose()?;
            (number_list(m, "\"m\"")?, h)
        }
        _ => return Err(usage("input must be a JSON array or an object with \"m\"")),
    };
    let m = MeasurementVector::new(topology.clone(), m)?;
    let h_raw = predict(&ckpt.params, &m)?;
    let norm = h_raw.norm();
    let h_pred = if norm > 0.0 {
        h_raw.scaled(1.0 / norm)
    } else {
        h_raw
    };
    let recon = if norm > 0.0 {
        reconstruct_state(&h_pred, cfg.gap_tol)?
    } else {
        Reconstruction::Degenerate { gap: 0.0 }
    };

    let mut out = serde_json::json!({
        "h_pred": h_pred.values(),
        "gap": recon.gap(),
        "degenerate": recon.state().is_none(),
        "amplitudes": recon.state().map(|psi| {
            psi.amplitudes().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()
        }),
    });
    let mut f2 = None;
    if let (Some(h), Some(psi)) = (h, recon.state()) {
        let h = CoeffVector::new(topology, h)?;
        let truth = ground_state(&build_hamiltonian(&h), cfg.gap_tol)?;
        let value = fidelity_f2(&truth.density_matrix(), &psi.density_matrix())?;
        out["f2"] = value.into();
        f2 = Some(value);
    }

    let summary = match (recon.state(), f2) {
        (None, _) => format!("degenerate prediction (gap {:.3e}); no state", recon.gap()),
        (Some(_), Some(f2)) => format!("gap {:.4}, f2 {:.4}", recon.gap(), f2),
        (Some(_), None) => format!("gap {:.4}", recon.gap()),
    };
    match &cfg.out {
        Some(path) => {
            write_json(path, &out)?;
            println!("{summary}");
        }
        None => {
            println!(
                "{}",
                serde_json::to_string_pretty(&out).expect("json values serialize")
            );
            eprintln!("{summary}");
        }
    }
    Ok(())
}
