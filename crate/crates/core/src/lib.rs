//! Geometric measure of quantum discord for two-qubit states.
//!
//! The crate provides the centrosymmetric (CS) and X seven-parameter state
//! families with the Hadamard conversion between them, the Hilbert-Schmidt
//! geometric measure computed by alternating eigenvector maximization with a
//! sphere-grid oracle, two physical state generators (a nanopore spin pair
//! and a thermal XXZ chain with Dzyaloshinskii-Moriya coupling), and a
//! deterministic parameter-sweep engine with CSV output.

pub mod geodiscord;
pub mod matkit;
pub mod models;
pub mod qst;
pub mod states;
pub mod sweep;
pub mod verify;

pub use geodiscord::{
    geometric_measure, GResult, MeasurementAxes, Method, OptResult, OptimizerConfig,
};
pub use states::{BlochForm, CsParams, DensityMatrix, StateShape, XParams};
