//! Inference algorithms consuming the estimator interface: importance
//! sampling, pseudo-marginal Metropolis-Hastings, stochastic-gradient HMC
//! and black-box variational inference.

mod bbvi;
mod importance;
mod pmmh;
mod sghmc;

pub use bbvi::{bbvi, elbo_gradient_estimate, BbviConfig, VariationalParams};
pub use importance::{importance_sampling, ImportanceOutput};
pub use pmmh::{pmmh, PmmhConfig};
pub use sghmc::{sghmc, SghmcConfig};

use crate::conditioning::CondError;
use crate::estimators::EstimateError;
use crate::model::ParamVector;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InferenceError {
    #[error("all importance weights are zero; the proposal misses the posterior mass")]
    DegenerateProposal,
    #[error("trajectory diverged at iteration {iteration}")]
    Divergence { iteration: u32 },
    #[error("initial state has zero posterior density")]
    DegenerateInit,
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Conditioning(#[from] CondError),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// One posterior draw in unconstrained coordinates. MCMC draws carry unit
/// weight; importance samples carry their self-normalized weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSample {
    pub x: ParamVector,
    pub weight: f64,
    pub iteration: u32,
}

/// Output of an MCMC run. Burn-in draws are discarded from `samples` but
/// the burn-in length is always reported.
#[derive(Debug, Clone)]
pub struct McmcOutput {
    pub samples: Vec<PosteriorSample>,
    /// Post-burn-in acceptance rate; `None` for samplers without an
    /// accept/reject step.
    pub acceptance: Option<f64>,
    pub burn_in: u32,
    /// Set when a Metropolis chain accepted nothing over the whole run.
    pub stuck: bool,
}

impl McmcOutput {
    /// Column `j` of the chain in unconstrained coordinates.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s.x.0[j]).collect()
    }
}

/// Burn-in defaults to 20% of the requested draws.
pub fn default_burn_in(draws: u32) -> u32 {
    draws / 5
}
