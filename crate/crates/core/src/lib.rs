//! Neural-network quantum state tomography from 2-local measurements.
//!
//! Random 2-local Hamiltonians are diagonalized to produce ground states and
//! their local Pauli expectations ([`dataset`]). A feedforward regressor
//! ([`nn`]) learns the map from expectations back to Hamiltonian
//! coefficients, and [`pipeline`] rebuilds the full state from the predicted
//! Hamiltonian and scores it against the truth.

pub mod dataset;
pub mod nn;
pub mod parallel;
pub mod pipeline;
pub mod quantum;
