//! Pseudo-marginal Metropolis-Hastings.
//!
//! A Gaussian random walk in unconstrained space proposes `x'`; the
//! acceptance ratio replaces the intractable likelihood with bias-adjusted
//! estimates,
//!
//! ```text
//! alpha = min{ 1, [u(x|x')/u(x'|x)] * exp(m' - m - (s'^2 - s^2)/2N) }
//! ```
//!
//! where `(m, s^2)` and `(m', s'^2)` are computed from the same draws
//! `y_1..y_N` at each step (a shared per-step seed). When the conditioning
//! distribution has finite support the exact log-likelihood is available
//! and the chain reduces to standard Metropolis-Hastings (`s^2 = 0`).

use crate::conditioning::{exact_stochastic_loglik, ObservationSource};
use crate::dist::normal_lpdf;
use crate::estimators::{estimate_loglik_with_seed, log_bias_adjusted_lik, EstimateOptions};
use crate::inference::{default_burn_in, InferenceError, McmcOutput, PosteriorSample};
use crate::model::Model;
use crate::rng::RandomSource;
use rand_distr::Distribution;

#[derive(Debug, Clone)]
pub struct PmmhConfig {
    /// Retained draws (after burn-in).
    pub draws: u32,
    /// Burn-in steps; defaults to 20% of `draws`.
    pub burn_in: Option<u32>,
    /// Monte Carlo draws per log-likelihood estimate (N >= 2).
    pub n: u32,
    /// Random-walk standard deviation in unconstrained space.
    pub proposal_scale: f64,
    /// Scale adaptation toward a 30% acceptance rate, burn-in only.
    pub adapt: bool,
    /// Conditioning repetition factor K.
    pub repetitions: f64,
    /// Use the exact finite-support log-likelihood instead of estimates.
    pub exact: bool,
    /// Keep one of every `thin` post-burn-in draws; `draws` counts the
    /// retained ones.
    pub thin: u32,
    /// Initial unconstrained state; zeros when absent.
    pub init: Option<Vec<f64>>,
}

impl Default for PmmhConfig {
    fn default() -> Self {
        PmmhConfig {
            draws: 10_000,
            burn_in: None,
            n: 32,
            proposal_scale: 0.8,
            adapt: true,
            repetitions: 1.0,
            exact: false,
            thin: 1,
            init: None,
        }
    }
}

pub fn pmmh<M, D>(
    model: &M,
    d: &D,
    cfg: &PmmhConfig,
    rng: &mut RandomSource,
) -> Result<McmcOutput, InferenceError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    if cfg.draws == 0 {
        return Err(InferenceError::InvalidConfig("draws must be >= 1".into()));
    }
    if cfg.thin == 0 {
        return Err(InferenceError::InvalidConfig("thin must be at least 1".into()));
    }
    if !cfg.exact && cfg.n < 2 {
        return Err(crate::estimators::EstimateError::InsufficientSamples(cfg.n).into());
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
    let opts = EstimateOptions::default().with_repetitions(cfg.repetitions);
    let mut scale = cfg.proposal_scale;

    // Exact path: log pi(x) computable; estimated path: per-step shared-seed
    // estimates for both states.
    let exact_log_target = |x: &[f64]| -> Result<f64, InferenceError> {
        let ll = exact_stochastic_loglik(model, x, d)?;
        Ok(model.log_prior(x) + cfg.repetitions * ll)
    };

    let mut exact_current = if cfg.exact {
        let v = exact_log_target(&x)?;
        if v == f64::NEG_INFINITY {
            return Err(InferenceError::DegenerateInit);
        }
        Some(v)
    } else {
        None
    };

    let mut samples = Vec::with_capacity(cfg.draws as usize);
    let mut accepted_main = 0u64;
    let mut accepted_any = 0u64;
    let mut window_accepts = 0u32;
    let mut window_steps = 0u32;

    for step in 0..total {
        let mut proposed = Vec::with_capacity(dim);
        for &xi in &x {
            let z: f64 = rand_distr::StandardNormal.sample(rng);
            proposed.push(xi + scale * z);
        }
        // Random-walk densities; symmetric, so the ratio vanishes, but the
        // general Hastings correction is kept explicit. A zero scale is the
        // identity kernel (ratio one).
        let (log_u_fwd, log_u_rev) = if scale > 0.0 {
            (
                proposed
                    .iter()
                    .zip(x.iter())
                    .map(|(&to, &from)| normal_lpdf(to, from, scale))
                    .sum(),
                x.iter()
                    .zip(proposed.iter())
                    .map(|(&to, &from)| normal_lpdf(to, from, scale))
                    .sum(),
            )
        } else {
            (0.0, 0.0)
        };

        let (log_ratio, proposed_exact) = if cfg.exact {
            let cur = exact_current.unwrap();
            let prop = exact_log_target(&proposed)?;
            ((prop - cur) + (log_u_rev - log_u_fwd), Some(prop))
        } else {
            let step_seed = rng.next_u64();
            let cur = estimate_loglik_with_seed(model, &x, d, cfg.n, step_seed, &opts)?;
            let prop = estimate_loglik_with_seed(model, &proposed, d, cfg.n, step_seed, &opts)?;
            let log_cur = log_bias_adjusted_lik(&cur)?;
            let log_prop = log_bias_adjusted_lik(&prop)?;
            ((log_prop - log_cur) + (log_u_rev - log_u_fwd), None)
        };

        let accept = log_ratio >= 0.0 || rng.next_f64().ln() < log_ratio;
        if accept {
            if cfg.exact {
                exact_current = proposed_exact;
            }
            x = proposed;
            accepted_any += 1;
            if step >= burn_in as u64 {
                accepted_main += 1;
            }
        }

        if step >= burn_in as u64 {
            if (step - burn_in as u64) % cfg.thin as u64 == cfg.thin as u64 - 1 {
                samples.push(PosteriorSample {
                    x: x.clone().into(),
                    weight: 1.0,
                    iteration: samples.len() as u32,
                });
            }
        } else if cfg.adapt {
            window_steps += 1;
            if accept {
                window_accepts += 1;
            }
            if window_steps == 50 {
                let rate = window_accepts as f64 / window_steps as f64;
                scale = (scale * ((rate - 0.3) * 0.7).exp()).clamp(1e-3, 20.0);
                window_steps = 0;
                window_accepts = 0;
            }
        }
    }

    Ok(McmcOutput {
        samples,
        acceptance: Some(accepted_main as f64 / (cfg.draws as f64 * cfg.thin as f64)),
        burn_in,
        stuck: accepted_any == 0,
    })
}
