//! Monte Carlo estimators of the stochastic-conditioning log-likelihood and
//! its gradient: the interface every inference algorithm consumes.
//!
//! Drawing `y_1..y_N ~ D` gives the unbiased estimate
//! `m = (1/N) sum_j log p(x, y_j)` of the log-likelihood, with the unbiased
//! sample variance `s2` (denominator N-1). Exponentiating a mean of logs is
//! biased low; the bias-adjusted likelihood estimate is
//! `exp(m - s2 / 2N)`.
//!
//! Conditioning `K` times on the same `D` (or replacing a product of `K`
//! stored observations by a subsample, the tall-data case) scales each
//! per-draw log-density by `K`; `repetitions` in [`EstimateOptions`] carries
//! that factor and the resulting `scale = K/N` is recorded on the estimate.

use crate::autodiff::Dual;
use crate::conditioning::ObservationSource;
use crate::gradients::grad_log_joint;
use crate::model::Model;
use crate::rng::RandomSource;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EstimateError {
    #[error("log-likelihood estimation requires at least one draw")]
    NoDraws,
    #[error("bias adjustment requires at least two draws, got {0}")]
    InsufficientSamples(u32),
}

/// Summary of N Monte Carlo log-likelihood draws.
///
/// `m` and `s2` are the sample mean and unbiased sample variance of the
/// per-draw values (already scaled by `repetitions` when conditioning is
/// repeated); `scale = repetitions / n` is the subsampling factor; `seed`
/// regenerates the exact draws, so two states can be scored on identical
/// samples.
#[derive(Debug, Clone, PartialEq)]
pub struct LogLikEstimate {
    pub m: f64,
    pub s2: f64,
    pub n: u32,
    pub scale: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct EstimateOptions {
    /// Include `log p(x)` in each per-draw value (the joint, as the
    /// pseudo-marginal weights require), or estimate the conditional
    /// log-likelihood alone.
    pub include_prior: bool,
    /// Number of times the distribution is conditioned on (K). For the
    /// tall-data subsampling reading, K is the full observation count and
    /// the draws are a uniform subsample.
    pub repetitions: f64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            include_prior: true,
            repetitions: 1.0,
        }
    }
}

impl EstimateOptions {
    pub fn conditional_only() -> Self {
        EstimateOptions {
            include_prior: false,
            repetitions: 1.0,
        }
    }

    pub fn with_repetitions(mut self, k: f64) -> Self {
        self.repetitions = k;
        self
    }
}

/// Estimates the log-likelihood from `n` fresh draws; the seed consumed from
/// `rng` is recorded on the estimate.
pub fn estimate_loglik<M, D>(
    model: &M,
    x: &[f64],
    d: &D,
    n: u32,
    rng: &mut RandomSource,
    opts: &EstimateOptions,
) -> Result<LogLikEstimate, EstimateError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    let seed = rng.next_u64();
    estimate_loglik_with_seed(model, x, d, n, seed, opts)
}

/// Same as [`estimate_loglik`] but with the draw seed fixed by the caller;
/// evaluating two states with the same seed scores them on identical
/// `y_1..y_N`.
pub fn estimate_loglik_with_seed<M, D>(
    model: &M,
    x: &[f64],
    d: &D,
    n: u32,
    seed: u64,
    opts: &EstimateOptions,
) -> Result<LogLikEstimate, EstimateError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    if n == 0 {
        return Err(EstimateError::NoDraws);
    }
    let mut src = RandomSource::new(seed);
    let prior = if opts.include_prior {
        model.log_prior(x)
    } else {
        0.0
    };
    let k = opts.repetitions;
    let mut values = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let y = d.sample(&mut src);
        values.push(prior + k * model.log_cond(x, &y));
    }
    let m = values.iter().sum::<f64>() / n as f64;
    // A state outside the support gives m = -inf; the variance is moot there
    // and must not poison acceptance ratios with NaN.
    let s2 = if n > 1 && m.is_finite() {
        values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n as f64 - 1.0)
    } else {
        0.0
    };
    Ok(LogLikEstimate {
        m,
        s2,
        n,
        scale: k / n as f64,
        seed,
    })
}

/// Bias-adjusted likelihood estimate `exp(m - s2/2N)`.
pub fn bias_adjusted_lik(est: &LogLikEstimate) -> Result<f64, EstimateError> {
    log_bias_adjusted_lik(est).map(f64::exp)
}

/// log of the bias-adjusted likelihood estimate, `m - s2/2N`; the form used
/// inside acceptance ratios and importance weights to avoid overflow.
pub fn log_bias_adjusted_lik(est: &LogLikEstimate) -> Result<f64, EstimateError> {
    if est.n < 2 {
        return Err(EstimateError::InsufficientSamples(est.n));
    }
    Ok(est.m - est.s2 / (2.0 * est.n as f64))
}

/// Single-draw unbiased estimate of the gradient of the log-joint:
/// `grad log p(x, y_1)` for one `y_1 ~ D`.
pub fn estimate_grad_loglik<M, D>(model: &M, x: &[f64], d: &D, rng: &mut RandomSource) -> Vec<f64>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    estimate_grad_loglik_scaled(model, x, d, 1.0, rng)
}

/// Single-draw gradient estimate with the conditional part scaled by `k`
/// (conditioning repeated K times): `grad [log p(x) + k log p(y_1|x)]`.
pub fn estimate_grad_loglik_scaled<M, D>(
    model: &M,
    x: &[f64],
    d: &D,
    k: f64,
    rng: &mut RandomSource,
) -> Vec<f64>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    let y = d.sample(rng);
    if k == 1.0 {
        return grad_log_joint(model, x, &y).grad;
    }
    let (value, grad) = crate::autodiff::value_and_grad(
        |args| model.log_prior(args) + Dual::constant(k) * model.log_cond(args, &y),
        x,
    );
    if !value.is_finite() {
        return vec![0.0; x.len()];
    }
    grad
}
