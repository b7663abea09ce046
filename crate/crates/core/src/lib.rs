//! Simulation and verification toolkit for extremes of stationary infinitely divisible
//! processes with semi-exponential tails driven by null-recurrent renewal zero sets.
//!
//! The crate is organised bottom-up: [`analytic`] evaluates tails, inverses and
//! normalizers; [`subordinator`] samples stable subordinators and regenerative sets;
//! [`zeroset`] and [`capacity`] handle the discrete renewal side; [`process`] builds
//! the series representation and its maxima; [`limit`] samples the limiting random
//! sup-measure; [`stats`] and [`acceptance`] turn simulations into verdicts.

pub mod acceptance;
pub mod analytic;
pub mod capacity;
pub mod error;
pub mod limit;
pub mod numeric;
pub mod process;
pub mod rng;
pub mod stats;
pub mod subordinator;
pub mod zeroset;

pub use analytic::{ModelParams, NormalizerTable};
pub use error::{Error, Result};
pub use stats::EmpiricalDistribution;
pub use subordinator::{RegenerativeSetSample, SubordinatorPath};
pub use zeroset::{StepLaw, ZeroSet};
