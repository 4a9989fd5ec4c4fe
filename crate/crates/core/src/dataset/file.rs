//! JSON-lines dataset files.
//!
//! Line 1 is the header:
//! `{"version":1,"topology":{"kind":"full","n":4},"spec":{...},"master_seed":7,"count":1000}`.
//! Each following line is one record:
//! `{"seed":..,"h":[..],"m":[..],"energy":..,"gap":..}`.
//! Floats use shortest round-trip decimal, so write/read is bit-exact.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::sampling::{generate_record, DatasetRecord, SamplingParams, SamplingSpec};
use super::seed::mix;
use super::DatasetError;
use crate::parallel::map_indexed;
use crate::quantum::{CoeffVector, MeasurementVector, Topology};

pub const FORMAT_VERSION: u32 = 1;

const SPLIT_STREAM: u64 = 0x5350_4c49_54;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetHeader {
    pub version: u32,
    pub topology: Topology,
    pub spec: SamplingParams,
    pub master_seed: u64,
    pub count: usize,
    /// Resolved configuration of the run that produced the file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

impl DatasetHeader {
    pub fn sampling_spec(&self) -> SamplingSpec {
        SamplingSpec {
            topology: self.topology.clone(),
            params: self.spec,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetFile {
    pub header: DatasetHeader,
    pub records: Vec<DatasetRecord>,
}

#[derive(Serialize, Deserialize)]
struct RecordLine {
    seed: u64,
    h: Vec<f64>,
    m: Vec<f64>,
    energy: f64,
    gap: f64,
}

/// Record `i` uses seed `mix(master_seed, i)`; output is independent of
/// `workers`.
pub fn generate_dataset(
    spec: &SamplingSpec,
    n_records: usize,
    master_seed: u64,
    workers: usize,
) -> Result<DatasetFile, DatasetError> {
    spec.params.validate()?;
    if n_records == 0 {
        return Err(DatasetError::InvalidSpec(
            "n_records must be at least 1".into(),
        ));
    }
    let results = map_indexed(n_records, workers, |i| {
        generate_record(spec, mix(master_seed, i as u64)).map_err(|e| match e {
            DatasetError::GenerationFailed { seed, .. } => DatasetError::GenerationFailed {
                index: Some(i),
                seed,
            },
            other => other,
        })
    });
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(DatasetFile {
        header: DatasetHeader {
            version: FORMAT_VERSION,
            topology: spec.topology.clone(),
            spec: spec.params,
            master_seed,
            count: n_records,
            config: None,
        },
        records,
    })
}

impl DatasetFile {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn topology(&self) -> &Topology {
        &self.header.topology
    }

    /// Leading `n` records as a new file.
    pub fn prefix(&self, n: usize) -> Result<DatasetFile, DatasetError> {
        if n > self.records.len() {
            return Err(DatasetError::Insufficient {
                needed: n,
                available: self.records.len(),
            });
        }
        Ok(self.with_records(self.records[..n].to_vec()))
    }

    fn with_records(&self, records: Vec<DatasetRecord>) -> DatasetFile {
        DatasetFile {
            header: DatasetHeader {
                count: records.len(),
                ..self.header.clone()
            },
            records,
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), DatasetError> {
        serde_json::to_writer(&mut w, &self.header)?;
        w.write_all(b"\n")?;
        for r in &self.records {
            let line = RecordLine {
                seed: r.seed,
                h: r.h.values().to_vec(),
                m: r.m.values().to_vec(),
                energy: r.energy,
                gap: r.gap,
            };
            serde_json::to_writer(&mut w, &line)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<DatasetFile, DatasetError> {
        let mut lines = r.lines();
        let first = lines.next().ok_or(DatasetError::Truncated {
            expected: 1,
            found: 0,
        })??;
        let raw: serde_json::Value = serde_json::from_str(&first)?;
        match raw.get("version").and_then(|v| v.as_u64()) {
            Some(v) if v == FORMAT_VERSION as u64 => {}
            Some(v) => return Err(DatasetError::UnsupportedVersion(v)),
            None => return Err(DatasetError::Malformed("header has no version".into())),
        }
        let header: DatasetHeader = serde_json::from_value(raw)?;
        header.spec.validate()?;
        let topology = header.topology.clone();
        let mut records = Vec::with_capacity(header.count);
        for (k, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if records.len() == header.count {
                return Err(DatasetError::CountMismatch {
                    header: header.count,
                    found: records.len() + 1,
                });
            }
            let rec: RecordLine = match serde_json::from_str(&line) {
                Ok(r) => r,
                Err(e) if e.is_eof() => {
                    return Err(DatasetError::Truncated {
                        expected: header.count,
                        found: records.len(),
                    })
                }
                Err(e) => return Err(e.into()),
            };
            let dim = topology.coeff_dim();
            if rec.h.len() != dim || rec.m.len() != dim {
                return Err(DatasetError::TopologyMismatch {
                    line: k + 2,
                    expected: dim,
                    found: if rec.h.len() != dim {
                        rec.h.len()
                    } else {
                        rec.m.len()
                    },
                });
            }
            records.push(DatasetRecord {
                seed: rec.seed,
                h: CoeffVector::new(topology.clone(), rec.h)?,
                m: MeasurementVector::new(topology.clone(), rec.m)?,
                energy: rec.energy,
                gap: rec.gap,
            });
        }
        if records.len() < header.count {
            return Err(DatasetError::Truncated {
                expected: header.count,
                found: records.len(),
            });
        }
        Ok(DatasetFile { header, records })
    }
}

pub fn write_dataset(file: &DatasetFile, path: &Path) -> Result<(), DatasetError> {
    file.write_to(BufWriter::new(File::create(path)?))
}

pub fn read_dataset(path: &Path) -> Result<DatasetFile, DatasetError> {
    DatasetFile::read_from(BufReader::new(File::open(path)?))
}

/// Shuffles with a stream keyed on the file's master seed, then cuts at
/// `floor(train_fraction * len)`.
pub fn split_dataset(
    file: &DatasetFile,
    train_fraction: f64,
) -> Result<(DatasetFile, DatasetFile), DatasetError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DatasetError::InvalidSpec(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let n = file.records.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(mix(
        file.header.master_seed,
        SPLIT_STREAM,
    )));
    let cut = (train_fraction * n as f64).floor() as usize;
    let pick = |idx: &[usize]| {
        idx.iter()
            .map(|&i| file.records[i].clone())
            .collect::<Vec<_>>()
    };
    Ok((
        file.with_records(pick(&order[..cut])),
        file.with_records(pick(&order[cut..])),
    ))
}
