//! Robust estimation of expected shortfall from heavy-tailed or contaminated
//! data, with ground-truth functionals and a reproducible Monte Carlo harness.

pub mod corrupt;
pub mod dist;
pub mod error;
pub mod estim;
pub mod functionals;
pub mod mc;
pub mod quad;
pub mod report;
pub mod rng;
pub mod special;

pub use corrupt::CorruptionModel;
pub use dist::{DistributionSpec, ProcessSpec};
pub use error::{Error, Result};
pub use estim::{EstimatorConfig, Sample};
pub use functionals::{RiskLevel, VarianceResult};
