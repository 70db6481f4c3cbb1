//! Bayesian inference with stochastic conditioning.
//!
//! Conditioning a model on an observed *distribution* `D` rather than an
//! observed value: the unnormalized likelihood of the observation is
//! `p(y ~ D | x) = exp(E_{y~D}[log p(y|x)])`, which reduces to conventional
//! conditioning when `D` is a point mass. The crate provides
//!
//! - elementary distributions, including a quantile-defined
//!   piecewise-uniform ([`dist`]);
//! - the model contract with unconstrained parameterizations and exact
//!   forward-mode gradients ([`model`], [`gradients`]);
//! - exact finite-support conditioning, the mixture alternative and the
//!   power-mean family, with their consistency checks ([`conditioning`]);
//! - unbiased Monte Carlo log-likelihood and gradient estimators with
//!   bias-adjusted exponentiation ([`estimators`]);
//! - importance sampling, pseudo-marginal Metropolis-Hastings,
//!   stochastic-gradient HMC and black-box variational inference
//!   ([`inference`]);
//! - three executable case studies: commute-forecast accuracy, a
//!   population estimate from summary quantiles, and policy search for the
//!   sailing problem ([`studies`]).

pub mod autodiff;
pub mod conditioning;
pub mod dist;
pub mod estimators;
pub mod gradients;
pub mod inference;
pub mod model;
pub mod rng;
pub mod studies;
pub mod summary;

pub use conditioning::{ObservationSource, ObservedDistribution};
pub use dist::DistSpec;
pub use estimators::LogLikEstimate;
pub use gradients::GradResult;
pub use inference::{McmcOutput, PosteriorSample, VariationalParams};
pub use model::{Model, ParamVector, Transform};
pub use rng::RandomSource;
