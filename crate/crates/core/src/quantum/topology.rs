//! Interaction graphs and the canonical coefficient ordering.
//!
//! Every topology enumerates its terms in one fixed order shared by
//! coefficient vectors and measurement vectors:
//!
//! 1. single-body terms sorted by `(qubit, label)` with `X < Y < Z`;
//! 2. two-body terms sorted by `(edge, first, second)`, where `first` acts on
//!    the edge's first qubit.
//!
//! For the translation-invariant ring only the site-0 / bond-(0,1)
//! representatives appear; each slot stands for the sum (coefficients) or the
//! average (measurements) of all its translated copies.

use serde::{Deserialize, Serialize};

use super::pauli::{PauliLabel, PauliString};
use super::QuantumError;

/// Hilbert spaces beyond this are out of reach for dense storage.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TopologyKind {
    #[serde(rename = "full")]
    FullGraph,
    #[serde(rename = "chain")]
    OpenChain,
    #[serde(rename = "ti_ring")]
    TiRing,
}

impl TopologyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TopologyKind::FullGraph => "full",
            TopologyKind::OpenChain => "chain",
            TopologyKind::TiRing => "ti_ring",
        }
    }
}

impl std::str::FromStr for TopologyKind {
    type Err = QuantumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(TopologyKind::FullGraph),
            "chain" => Ok(TopologyKind::OpenChain),
            "ti_ring" => Ok(TopologyKind::TiRing),
            other => Err(QuantumError::InvalidTopology(format!(
                "unknown topology kind {other:?}"
            ))),
        }
    }
}

/// Slot identity for one entry of a coefficient or measurement vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermLabel {
    Single {
        qubit: usize,
        pauli: PauliLabel,
    },
    Pair {
        edge: (usize, usize),
        first: PauliLabel,
        second: PauliLabel,
    },
}

#[derive(Debug, Clone)]
pub struct Term {
    pub label: TermLabel,
    /// Pauli strings this slot multiplies; more than one only on the ring.
    pub copies: Vec<PauliString>,
}

/// Serialized form: `{"kind": "full", "n": 4}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TopologyDescriptor {
    pub kind: TopologyKind,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TopologyDescriptor", into = "TopologyDescriptor")]
pub struct Topology {
    kind: TopologyKind,
    n_qubits: usize,
    edges: Vec<(usize, usize)>,
}

impl Topology {
    pub fn new(kind: TopologyKind, n_qubits: usize) -> Result<Self, QuantumError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QuantumError::InvalidTopology(format!(
                "n_qubits must be in 1..={MAX_QUBITS}, got {n_qubits}"
            )));
        }
        let edges = match kind {
            TopologyKind::FullGraph => (0..n_qubits)
                .flat_map(|i| ((i + 1)..n_qubits).map(move |j| (i, j)))
                .collect(),
            TopologyKind::OpenChain => (0..n_qubits.saturating_sub(1))
                .map(|i| (i, i + 1))
                .collect(),
            TopologyKind::TiRing => {
                if n_qubits < 3 {
                    return Err(QuantumError::InvalidTopology(
                        "a translation-invariant ring needs at least 3 qubits".into(),
                    ));
                }
                // the closing bond (n-1, 0) keeps its orientation
                (0..n_qubits).map(|i| (i, (i + 1) % n_qubits)).collect()
            }
        };
        Ok(Topology {
            kind,
            n_qubits,
            edges,
        })
    }

    pub fn full(n_qubits: usize) -> Result<Self, QuantumError> {
        Self::new(TopologyKind::FullGraph, n_qubits)
    }

    pub fn chain(n_qubits: usize) -> Result<Self, QuantumError> {
        Self::new(TopologyKind::OpenChain, n_qubits)
    }

    pub fn ti_ring(n_qubits: usize) -> Result<Self, QuantumError> {
        Self::new(TopologyKind::TiRing, n_qubits)
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn hilbert_dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Length of coefficient and measurement vectors.
    pub fn coeff_dim(&self) -> usize {
        match self.kind {
            TopologyKind::TiRing => 12,
            _ => 3 * self.n_qubits + 9 * self.edges.len(),
        }
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> Vec<Term> {
        let n = self.n_qubits;
        let mut terms = Vec::with_capacity(self.coeff_dim());
        match self.kind {
            TopologyKind::TiRing => {
                for pauli in PauliLabel::XYZ {
                    terms.push(Term {
                        label: TermLabel::Single { qubit: 0, pauli },
                        copies: (0..n).map(|q| PauliString::single(n, q, pauli)).collect(),
                    });
                }
                for first in PauliLabel::XYZ {
                    for second in PauliLabel::XYZ {
                        terms.push(Term {
                            label: TermLabel::Pair {
                                edge: self.edges[0],
                                first,
                                second,
                            },
                            copies: self
                                .edges
                                .iter()
                                .map(|&e| PauliString::pair(n, e, first, second))
                                .collect(),
                        });
                    }
                }
            }
            _ => {
                for qubit in 0..n {
                    for pauli in PauliLabel::XYZ {
                        terms.push(Term {
                            label: TermLabel::Single { qubit, pauli },
                            copies: vec![PauliString::single(n, qubit, pauli)],
                        });
                    }
                }
                for &edge in &self.edges {
                    for first in PauliLabel::XYZ {
                        for second in PauliLabel::XYZ {
                            terms.push(Term {
                                label: TermLabel::Pair {
                                    edge,
                                    first,
                                    second,
                                },
                                copies: vec![PauliString::pair(n, edge, first, second)],
                            });
                        }
                    }
                }
            }
        }
        terms
    }

    pub fn descriptor(&self) -> TopologyDescriptor {
        TopologyDescriptor {
            kind: self.kind,
            n: self.n_qubits,
        }
    }

    /// Canonical-order index permutation induced by relabeling qubits
    /// (`perm[q]` is the new label of qubit `q`) on a full graph.
    ///
    /// Returns `map` with `new_vec[map[k]] = old_vec[k]`. A pair term whose
    /// edge flips orientation swaps its two Pauli labels.
    pub fn relabel_permutation(&self, perm: &[usize]) -> Result<Vec<usize>, QuantumError> {
        if self.kind != TopologyKind::FullGraph {
            return Err(QuantumError::InvalidTopology(
                "qubit relabeling is only closed on full graphs".into(),
            ));
        }
        let n = self.n_qubits;
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(QuantumError::InvalidTopology("not a permutation".into()));
        }
        let terms = self.terms();
        let position = |label: TermLabel| terms.iter().position(|t| t.label == label).unwrap();
        Ok(terms
            .iter()
            .map(|t| match t.label {
                TermLabel::Single { qubit, pauli } => position(TermLabel::Single {
                    qubit: perm[qubit],
                    pauli,
                }),
                TermLabel::Pair {
                    edge: (i, j),
                    first,
                    second,
                } => {
                    let (a, b) = (perm[i], perm[j]);
                    let label = if a < b {
                        TermLabel::Pair {
                            edge: (a, b),
                            first,
                            second,
                        }
                    } else {
                        TermLabel::Pair {
                            edge: (b, a),
                            first: second,
                            second: first,
                        }
                    };
                    position(label)
                }
            })
            .collect())
    }
}

impl TryFrom<TopologyDescriptor> for Topology {
    type Error = QuantumError;

    fn try_from(d: TopologyDescriptor) -> Result<Self, Self::Error> {
        Topology::new(d.kind, d.n)
    }
}

impl From<Topology> for TopologyDescriptor {
    fn from(t: Topology) -> Self {
        t.descriptor()
    }
}

impl std::fmt::Display for Topology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.kind.as_str(), self.n_qubits)
    }
}

fn check_vector(topology: &Topology, values: &[f64], what: &str) -> Result<(), QuantumError> {
    if values.len() != topology.coeff_dim() {
        return Err(QuantumError::DimensionMismatch {
            expected: topology.coeff_dim(),
            found: values.len(),
        });
    }
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(QuantumError::NonFinite(format!("{what} entry {k}")));
    }
    Ok(())
}

/// Hamiltonian coefficients in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    topology: Topology,
    values: Vec<f64>,
}

impl CoeffVector {
    pub fn new(topology: Topology, values: Vec<f64>) -> Result<Self, QuantumError> {
        check_vector(&topology, &values, "coefficient")?;
        Ok(CoeffVector { topology, values })
    }

    pub fn zeros(topology: Topology) -> Self {
        let values = vec![0.0; topology.coeff_dim()];
        CoeffVector { topology, values }
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        CoeffVector {
            topology: self.topology.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Local Pauli expectations in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementVector {
    topology: Topology,
    values: Vec<f64>,
}

impl MeasurementVector {
    pub const RANGE_TOL: f64 = 1e-10;

    pub fn new(topology: Topology, values: Vec<f64>) -> Result<Self, QuantumError> {
        check_vector(&topology, &values, "measurement")?;
        if let Some(k) = values.iter().position(|v| v.abs() > 1.0 + Self::RANGE_TOL) {
            return Err(QuantumError::OutOfRange {
                index: k,
                value: values[k],
            });
        }
        Ok(MeasurementVector { topology, values })
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}
