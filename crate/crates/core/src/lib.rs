//! Simulation of entanglement accumulation in a two-mode continuous-variable
//! register that is coupled to a sequence of post-selected two-level (or
//! vee-type three-level) mediators.
//!
//! The register lives in a truncated Fock space ([`fock`]). Each mediator
//! passage is described by resonant Jaynes-Cummings blocks ([`jc`]) that are
//! sandwiched between the mediator preparation and the measured state to form
//! an effective register operator ([`conditional`]). Entanglement is read out
//! from the Schmidt spectrum or, indirectly, from a pair of auxiliary qubits
//! ([`metrics`]). Parameter sweeps and Monte Carlo jitter studies live in
//! [`experiments`]; serialization in [`io`].

pub mod cli;
pub mod conditional;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod io;
pub mod jc;
pub mod linalg;
pub mod metrics;
pub mod operator;
pub mod oracle;

pub use num_complex::Complex64 as C64;

pub use crate::conditional::{
    apply_passage, apply_passage_with, effective_operator, run_sequence, run_sequence_with,
    vee_passage, EffectiveOperator, MediatorSpec, Outcome, PassageOutcome, SequenceResult,
};
pub use crate::error::{Error, Result};
pub use crate::fock::{coherent_amplitudes, default_cutoff, product_state, JointState, ModeVector, TruncationPolicy};
pub use crate::jc::{jc_blocks, vee_propagator, JcBlocks, PhaseConvention, VeePropagator};
pub use crate::metrics::{
    aux_readout, entropy, lambda_delta_gamma, negativity_measure, schmidt, OverlapReport,
    QubitPairState, SchmidtSpectrum,
};
pub use crate::operator::{Axis, ModeOperator};

/// Squared norm below which a post-selected branch is treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-14;
