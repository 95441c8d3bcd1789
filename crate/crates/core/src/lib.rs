//! Simulation engine for 2-D discrete-time quantum walks with composite
//! coins and q-exponentially distributed random step sizes (the generalized
//! elephant quantum walk).
//!
//! The crate provides:
//! - composite coin construction (separable tensor products and CNOT
//!   entangled variants) in [`coin`];
//! - the q-exponential step-size distribution in [`qexp`];
//! - sparse real-space state evolution in [`state`] and [`evolve`];
//! - an exact/Monte-Carlo momentum-space moment estimator in [`spectral`];
//! - distributions, variances, exponent fits, entanglement measures and
//!   coherence in [`observables`];
//! - dense cross-checks, a separability oracle and a Kraus decomposition of
//!   the effective 1-D channel in [`verify`].

pub mod coin;
pub mod error;
pub mod evolve;
pub mod observables;
pub mod qexp;
pub mod seed;
pub mod spectral;
pub mod state;
pub mod verify;

pub use coin::{CoinMatrix2, CoinMatrix4, CoinParams};
pub use error::{Result, WalkError};
pub use evolve::{
    CoinKind, DisorderSequence, Engine, FitWindow, ObservablePlan, RunOutput,
    RunOutput1D, WalkConfig,
};
pub use observables::{Basis, DensityMatrix, FitResult, ObservableRecord};
pub use qexp::{QExpParams, StepWeights};
pub use state::{Site, SparseState, SparseState1D};
