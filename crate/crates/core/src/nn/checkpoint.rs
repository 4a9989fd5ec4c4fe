//! Binary checkpoint format.
//!
//! ```text
//! magic        8 bytes  "QSTNN\0\x01\0"
//! header_len   u32 LE
//! header       JSON {"version", "layer_sizes", "seed", "param_count", "metadata"}
//! payload      per layer: weights (out x in, row-major), then bias; f64 LE
//! ```

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use super::params::{Dense, LayerSpec, ModelParams};
use super::NnError;

pub const MAGIC: [u8; 8] = *b"QSTNN\x00\x01\x00";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointHeader {
    pub version: u32,
    pub layer_sizes: Vec<usize>,
    pub seed: u64,
    pub param_count: usize,
    /// Free-form training metadata (topology, resolved run config, ...).
    #[serde(default)]
    pub metadata: serde_json::Value,
}

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub header: CheckpointHeader,
    pub params: ModelParams,
}

impl Checkpoint {
    pub fn new(params: ModelParams, seed: u64, metadata: serde_json::Value) -> Self {
        let header = CheckpointHeader {
            version: CHECKPOINT_VERSION,
            layer_sizes: params.layer_spec().sizes().to_vec(),
            seed,
            param_count: params.param_count(),
            metadata,
        };
        Checkpoint { header, params }
    }

    pub fn layer_spec(&self) -> LayerSpec {
        self.params.layer_spec()
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, NnError> {
        let header = serde_json::to_vec(&self.header)?;
        let mut out = Vec::with_capacity(12 + header.len() + 8 * self.header.param_count);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&(header.len() as u32).to_le_bytes());
        out.extend_from_slice(&header);
        for v in self.params.iter() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, NnError> {
        if bytes.len() < MAGIC.len() {
            return Err(NnError::Truncated {
                expected: MAGIC.len(),
                found: bytes.len(),
            });
        }
        if bytes[..8] != MAGIC {
            return Err(NnError::BadMagic);
        }
        let rest = &bytes[8..];
        if rest.len() < 4 {
            return Err(NnError::Truncated {
                expected: 12,
                found: bytes.len(),
            });
        }
        let header_len = u32::from_le_bytes(rest[..4].try_into().unwrap()) as usize;
        let rest = &rest[4..];
        if rest.len() < header_len {
            return Err(NnError::Truncated {
                expected: 12 + header_len,
                found: bytes.len(),
            });
        }
        let header: CheckpointHeader = serde_json::from_slice(&rest[..header_len])?;
        if header.version != CHECKPOINT_VERSION {
            return Err(NnError::UnsupportedVersion(header.version));
        }
        let spec = LayerSpec::new(header.layer_sizes.clone())?;
        if spec.param_count() != header.param_count {
            return Err(NnError::ShapeMismatch(format!(
                "layer sizes {spec} imply {} parameters, header declares {}",
                spec.param_count(),
                header.param_count
            )));
        }
        let payload = &rest[header_len..];
        let expected = 8 * header.param_count;
        if payload.len() < expected {
            return Err(NnError::Truncated {
                expected: 12 + header_len + expected,
                found: bytes.len(),
            });
        }
        if payload.len() > expected {
            return Err(NnError::ShapeMismatch(format!(
                "{} trailing bytes after payload",
                payload.len() - expected
            )));
        }
        let mut values = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
        let mut take = |n: usize| -> Vec<f64> { values.by_ref().take(n).collect() };
        let layers = spec
            .sizes()
            .windows(2)
            .map(|w| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let weights = Array2::from_shape_vec((fan_out, fan_in), take(fan_in * fan_out))
                    .expect("sized");
                let bias = Array1::from(take(fan_out));
                Dense { weights, bias }
            })
            .collect();
        Ok(Checkpoint {
            header,
            params: ModelParams { layers },
        })
    }
}

pub fn save_checkpoint(checkpoint: &Checkpoint, path: &Path) -> Result<(), NnError> {
    fs::write(path, checkpoint.to_bytes()?)?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, NnError> {
    Checkpoint::from_bytes(&fs::read(path)?)
}
