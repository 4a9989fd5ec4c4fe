use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::seed::mix;
use super::DatasetError;
use crate::quantum::{
    build_hamiltonian, ground_state, measure_local, CoeffVector, MeasurementVector, QuantumError,
    Topology, DEFAULT_GAP_TOL,
};

/// How random Hamiltonians are drawn.
///
/// Each record first draws its own mean `mu ~ U(mean_range)` and standard
/// deviation `s ~ U(std_range)`, then every coefficient i.i.d. from
/// `Normal(mu, s^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSpec {
    pub topology: Topology,
    pub params: SamplingParams,
}

/// Topology-independent part of [`SamplingSpec`]; this is what the dataset
/// header stores under `"spec"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingParams {
    pub mean_range: (f64, f64),
    pub std_range: (f64, f64),
    pub gap_tol: f64,
    pub max_resamples: u32,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            mean_range: (-1.0, 1.0),
            std_range: (0.5, 1.5),
            gap_tol: DEFAULT_GAP_TOL,
            max_resamples: 16,
        }
    }
}

impl SamplingParams {
    pub fn validate(&self) -> Result<(), DatasetError> {
        let (m0, m1) = self.mean_range;
        let (s0, s1) = self.std_range;
        let finite = [m0, m1, s0, s1, self.gap_tol].iter().all(|v| v.is_finite());
        if !finite || m0 > m1 {
            return Err(DatasetError::InvalidSpec(
                "mean_range must be a finite interval".into(),
            ));
        }
        if !(s0 > 0.0 && s0 <= s1) {
            return Err(DatasetError::InvalidSpec(
                "std_range must be a positive interval".into(),
            ));
        }
        if self.gap_tol < 0.0 {
            return Err(DatasetError::InvalidSpec(
                "gap_tol must be non-negative".into(),
            ));
        }
        if self.max_resamples < 1 {
            return Err(DatasetError::InvalidSpec(
                "max_resamples must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

impl SamplingSpec {
    pub fn new(topology: Topology, params: SamplingParams) -> Result<Self, DatasetError> {
        params.validate()?;
        Ok(SamplingSpec { topology, params })
    }

    pub fn with_defaults(topology: Topology) -> Self {
        SamplingSpec {
            topology,
            params: SamplingParams::default(),
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..hi)
    }
}

/// Deterministic in `(spec, record_seed)`.
pub fn sample_coeffs(spec: &SamplingSpec, record_seed: u64) -> CoeffVector {
    let mut rng = ChaCha8Rng::seed_from_u64(record_seed);
    let mu = uniform(&mut rng, spec.params.mean_range);
    let s = uniform(&mut rng, spec.params.std_range);
    let normal = Normal::new(mu, s).expect("validated std");
    let values = (0..spec.topology.coeff_dim())
        .map(|_| normal.sample(&mut rng))
        .collect();
    CoeffVector::new(spec.topology.clone(), values).expect("finite samples")
}

/// One training pair: coefficients, local measurements of their ground
/// state, and spectral data.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRecord {
    pub seed: u64,
    pub h: CoeffVector,
    pub m: MeasurementVector,
    pub energy: f64,
    pub gap: f64,
}

/// Draws coefficients and diagonalizes; degenerate draws are redrawn with
/// `mix(record_seed, attempt)`. The stored `seed` is the one that succeeded.
pub fn generate_record(
    spec: &SamplingSpec,
    record_seed: u64,
) -> Result<DatasetRecord, DatasetError> {
    let mut seed = record_seed;
    for attempt in 0..spec.params.max_resamples {
        if attempt > 0 {
            seed = mix(record_seed, attempt as u64);
        }
        let h = sample_coeffs(spec, seed);
        match ground_state(&build_hamiltonian(&h), spec.params.gap_tol) {
            Ok(psi) => {
                let m = measure_local(&psi, &spec.topology)?;
                return Ok(DatasetRecord {
                    seed,
                    h,
                    m,
                    energy: psi.energy(),
                    gap: psi.gap(),
                });
            }
            Err(QuantumError::DegenerateGroundState { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(DatasetError::GenerationFailed {
        index: None,
        seed: record_seed,
    })
}

/// Recomputes `m` from a record's `h`; used to validate stored data.
pub fn recompute_measurements(
    record: &DatasetRecord,
    gap_tol: f64,
) -> Result<MeasurementVector, QuantumError> {
    let psi = ground_state(&build_hamiltonian(&record.h), gap_tol)?;
    measure_local(&psi, record.h.topology())
}

/// Adds `Normal(0, sigma^2)` to each entry and clips to `[-1, 1]`.
pub fn add_measurement_noise(
    m: &MeasurementVector,
    sigma: f64,
    seed: u64,
) -> Result<MeasurementVector, DatasetError> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(DatasetError::InvalidSpec(format!(
            "noise sigma must be >= 0, got {sigma}"
        )));
    }
    if sigma == 0.0 {
        return Ok(m.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("validated sigma");
    let values = m
        .values()
        .iter()
        .map(|v| (v + normal.sample(&mut rng)).clamp(-1.0, 1.0))
        .collect();
    Ok(MeasurementVector::new(m.topology().clone(), values)?)
}
