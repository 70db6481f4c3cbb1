//! Stochastic-gradient Hamiltonian Monte Carlo.
//!
//! Each retained draw advances the dynamics by `leapfrog` steps of the
//! standard SGHMC update with unit mass:
//!
//! ```text
//! v <- v + eps * g(x) - eps * friction * v + Normal(0, 2 * friction * eps)
//! x <- x + eps * v
//! ```
//!
//! where `g` is the single-draw stochastic gradient of the log-joint.
//! Friction dissipates the energy injected by the gradient noise; momentum
//! is carried across draws rather than resampled.

use crate::conditioning::ObservationSource;
use crate::estimators::estimate_grad_loglik_scaled;
use crate::inference::{default_burn_in, InferenceError, McmcOutput, PosteriorSample};
use crate::model::Model;
use crate::rng::RandomSource;
use rand_distr::Distribution;

#[derive(Debug, Clone)]
pub struct SghmcConfig {
    /// Retained draws (after burn-in).
    pub draws: u32,
    /// Burn-in steps; defaults to 20% of `draws`.
    pub burn_in: Option<u32>,
    pub step_size: f64,
    pub friction: f64,
    pub leapfrog: u32,
    /// Conditioning repetition factor K.
    pub repetitions: f64,
    /// Single-draw gradient estimates averaged per leapfrog step. More
    /// draws tame the gradient noise injected into the stationary
    /// distribution when K is large.
    pub grad_draws: u32,
    /// Keep one of every `thin` post-burn-in draws; `draws` counts the
    /// retained ones.
    pub thin: u32,
    /// Initial unconstrained state; zeros when absent.
    pub init: Option<Vec<f64>>,
}

impl Default for SghmcConfig {
    fn default() -> Self {
        SghmcConfig {
            draws: 10_000,
            burn_in: None,
            step_size: 0.01,
            friction: 1.0,
            leapfrog: 10,
            repetitions: 1.0,
            grad_draws: 1,
            thin: 1,
            init: None,
        }
    }
}

const OVERFLOW_GUARD: f64 = 1e6;

pub fn sghmc<M, D>(
    model: &M,
    d: &D,
    cfg: &SghmcConfig,
    rng: &mut RandomSource,
) -> Result<McmcOutput, InferenceError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    if cfg.draws == 0 {
        return Err(InferenceError::InvalidConfig("draws must be >= 1".into()));
    }
    if cfg.step_size < 0.0 || cfg.friction < 0.0 {
        return Err(InferenceError::InvalidConfig(
            "step size and friction must be nonnegative".into(),
        ));
    }
    if cfg.grad_draws == 0 || cfg.thin == 0 {
        return Err(InferenceError::InvalidConfig(
            "grad_draws and thin must be at least 1".into(),
        ));
    }
    let dim = model.dim();
    let mut x = cfg.init.clone().unwrap_or_else(|| vec![0.0; dim]);
    if x.len() != dim {
        return Err(InferenceError::InvalidConfig(format!(
            "init has dimension {}, model has {}",
            x.len(),
            dim
        )));
    }
    let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(cfg.draws));
    let total = burn_in as u64 + cfg.draws as u64 * cfg.thin as u64;
    let eps = cfg.step_size;
    let noise_sd = (2.0 * cfg.friction * eps).sqrt();
    let mut v = vec![0.0; dim];
    let mut samples = Vec::with_capacity(cfg.draws as usize);

    for step in 0..total {
        for _ in 0..cfg.leapfrog {
            let mut g = estimate_grad_loglik_scaled(model, &x, d, cfg.repetitions, rng);
            for _ in 1..cfg.grad_draws {
                let extra = estimate_grad_loglik_scaled(model, &x, d, cfg.repetitions, rng);
                for (a, b) in g.iter_mut().zip(extra.iter()) {
                    *a += b;
                }
            }
            if cfg.grad_draws > 1 {
                let inv = 1.0 / cfg.grad_draws as f64;
                g.iter_mut().for_each(|a| *a *= inv);
            }
            for i in 0..dim {
                let z: f64 = rand_distr::StandardNormal.sample(rng);
                v[i] += eps * g[i] - eps * cfg.friction * v[i] + noise_sd * z;
                x[i] += eps * v[i];
            }
            if x.iter().any(|xi| !xi.is_finite() || xi.abs() > OVERFLOW_GUARD) {
                return Err(InferenceError::Divergence {
                    iteration: step as u32,
                });
            }
        }
        if step >= burn_in as u64 && (step - burn_in as u64) % cfg.thin as u64 == cfg.thin as u64 - 1 {
            samples.push(PosteriorSample {
                x: x.clone().into(),
                weight: 1.0,
                iteration: samples.len() as u32,
            });
        }
    }

    Ok(McmcOutput {
        samples,
        acceptance: None,
        burn_in,
        stuck: false,
    })
}
