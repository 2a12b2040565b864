//! Training spiking neural networks without back-propagation.
//!
//! The crate simulates integrate-and-fire multi-layer perceptrons, computes
//! exact surrogate-gradient BPTT as a baseline, and estimates gradients with
//! randomized forward-mode (JVP) weight perturbation, globally or layer-wise.
//! On top of that sit spiking DeepONet/SepONet operator networks, PDE dataset
//! generators, and a config-driven experiment harness with a CLI.

pub mod error;
pub mod snn;

pub use error::{Error, Result};
