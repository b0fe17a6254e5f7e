//! Physics-informed neural solver for `y' + 2y = 0`, `y(0) = 1`, whose network
//! input is augmented with measurement probabilities of a two-qubit circuit.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! wall-clock timing live in the `qpinn` companion crate.
//!
//! Pipeline:
//!
//! 1. [`qsim`] prepares `(Rx(-2t) ⊗ Rx(-2t))(H ⊗ I)|00⟩` and measures it.
//! 2. [`features`] stacks the probabilities over a collocation grid and
//!    standardizes the columns.
//! 3. [`nn`] evaluates the ansatz `ŷ(x) = 1 + x·g([x, q(x)])` together with
//!    `dŷ/dx` (dual numbers) and the exact parameter gradient of the loss.
//! 4. [`pinn`] trains `g` with Adam on the mean squared ODE residual.
//! 5. [`validate`] compares the trained model with `e^{-2x}`.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![warn(missing_docs)]

extern crate alloc;

pub mod dual;
mod error;
pub mod features;
pub mod nn;
pub mod optim;
pub mod pinn;
pub mod qsim;
pub mod rng;
pub mod validate;

pub use dual::DualValue;
pub use error::{Error, Result};
pub use features::{FeatureDerivatives, FeatureMatrix, Grid, Standardizer};
pub use nn::{AnsatzOutput, MlpParams, NetworkInput};
pub use optim::{AdamConfig, AdamState};
pub use pinn::{DerivativeMode, TrainConfig, TrainReport, TrainedModel};
pub use qsim::{Counts, ProbVector, SingleQubitGate, StateVector};
pub use validate::ErrorReport;
