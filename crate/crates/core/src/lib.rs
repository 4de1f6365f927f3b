//! Quantum battery capacity for multipartite states.
//!
//! The crate computes the capacity functional of a state with respect to a
//! Hamiltonian, applies local computational-basis measurements to three-party
//! states and picks the outcome that best charges the unmeasured part, and
//! models white-noise and dephasing degradation. [`experiments`] reproduces
//! the W-state and GHZ-state sweeps and runs randomized property suites.

pub mod battery;
pub mod error;
pub mod experiments;
pub mod json;
pub mod linalg;
pub mod measure;
pub mod model;
pub mod random;
pub mod xstate;

pub use battery::{capacity, loss_rate, majorizes, CapacityReport};
pub use error::{Error, Result};
pub use linalg::{
    hermitian_eig, kron, partial_trace, ComplexMatrix, DensityMatrix, HermitianOperator, Spectrum,
    C64,
};
pub use measure::{
    scheme1, scheme2, select_optimal, whole_capacity_after, OptimalSelection, OutcomeEnsemble,
    Scheme,
};
