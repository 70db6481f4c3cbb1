//! Black-box variational inference with the score-function estimator.
//!
//! The variational family is a mean-field Gaussian over the unconstrained
//! latent vector, `q(x|lambda)` with per-coordinate mean and log standard
//! deviation. The ELBO gradient is estimated as
//!
//! ```text
//! (1/S) sum_s  grad_lambda log q(x_s|lambda)
//!              * ( log p(x_s) + K log p(y_s|x_s) - log q(x_s|lambda) )
//! ```
//!
//! with `(x_s, y_s) ~ q x D`, ascended with a per-coordinate AdaGrad
//! schedule `eta / (tau + sqrt(sum g^2))`.

use crate::conditioning::ObservationSource;
use crate::dist::normal_lpdf;
use crate::inference::InferenceError;
use crate::model::Model;
use crate::rng::RandomSource;
use rand_distr::Distribution;

/// Mean-field Gaussian parameters in unconstrained space.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationalParams {
    pub mu: Vec<f64>,
    pub log_sd: Vec<f64>,
}

impl VariationalParams {
    pub fn new(mu: Vec<f64>, log_sd: Vec<f64>) -> Self {
        assert_eq!(mu.len(), log_sd.len());
        VariationalParams { mu, log_sd }
    }

    /// Standard-normal start for a d-dimensional model.
    pub fn standard(dim: usize) -> Self {
        VariationalParams {
            mu: vec![0.0; dim],
            log_sd: vec![0.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn sample(&self, rng: &mut RandomSource) -> Vec<f64> {
        self.mu
            .iter()
            .zip(self.log_sd.iter())
            .map(|(&m, &ls)| {
                let z: f64 = rand_distr::StandardNormal.sample(rng);
                m + ls.exp() * z
            })
            .collect()
    }

    pub fn log_density(&self, x: &[f64]) -> f64 {
        self.mu
            .iter()
            .zip(self.log_sd.iter())
            .zip(x.iter())
            .map(|((&m, &ls), &xi)| normal_lpdf(xi, m, ls.exp()))
            .sum()
    }

    /// grad_lambda log q(x|lambda), ordered as (d/dmu_1.., d/dlog_sd_1..).
    pub fn score(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; 2 * d];
        for i in 0..d {
            let sd = self.log_sd[i].exp();
            let z = (x[i] - self.mu[i]) / sd;
            out[i] = z / sd;
            out[d + i] = z * z - 1.0;
        }
        out
    }

    fn is_finite(&self) -> bool {
        self.mu.iter().chain(self.log_sd.iter()).all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone)]
pub struct BbviConfig {
    pub iterations: u32,
    /// Samples per gradient estimate (S >= 1).
    pub batch: u32,
    /// AdaGrad base rate eta.
    pub learning_rate: f64,
    /// AdaGrad damping tau.
    pub lr_tau: f64,
    /// Conditioning repetition factor K.
    pub repetitions: f64,
}

impl Default for BbviConfig {
    fn default() -> Self {
        BbviConfig {
            iterations: 2000,
            batch: 32,
            learning_rate: 0.5,
            lr_tau: 1.0,
            repetitions: 1.0,
        }
    }
}

/// Single-batch score estimate of the ELBO gradient at `lambda`.
pub fn elbo_gradient_estimate<M, D>(
    model: &M,
    d: &D,
    lambda: &VariationalParams,
    batch: u32,
    repetitions: f64,
    rng: &mut RandomSource,
) -> Vec<f64>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    let dim2 = 2 * lambda.dim();
    let mut grad = vec![0.0; dim2];
    for _ in 0..batch {
        let x = lambda.sample(rng);
        let y = d.sample(rng);
        let log_p = model.log_prior(&x) + repetitions * model.log_cond(&x, &y);
        let log_q = lambda.log_density(&x);
        let weight = log_p - log_q;
        let score = lambda.score(&x);
        for (g, s) in grad.iter_mut().zip(score.iter()) {
            *g += s * weight;
        }
    }
    for g in grad.iter_mut() {
        *g /= batch as f64;
    }
    grad
}

/// Runs the ELBO ascent and returns the full trajectory of variational
/// parameters (index 0 is the initial value, so the length is
/// `iterations + 1`).
pub fn bbvi<M, D>(
    model: &M,
    d: &D,
    init: &VariationalParams,
    cfg: &BbviConfig,
    rng: &mut RandomSource,
) -> Result<Vec<VariationalParams>, InferenceError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    if cfg.batch == 0 {
        return Err(InferenceError::InvalidConfig("batch must be >= 1".into()));
    }
    if init.dim() != model.dim() {
        return Err(InferenceError::InvalidConfig(format!(
            "init has dimension {}, model has {}",
            init.dim(),
            model.dim()
        )));
    }
    let mut lambda = init.clone();
    let mut trajectory = Vec::with_capacity(cfg.iterations as usize + 1);
    trajectory.push(lambda.clone());
    let dim = lambda.dim();
    let mut g2_accum = vec![0.0; 2 * dim];

    for iter in 0..cfg.iterations {
        let grad = elbo_gradient_estimate(model, d, &lambda, cfg.batch, cfg.repetitions, rng);
        for (slot, g) in g2_accum.iter_mut().zip(grad.iter()) {
            *slot += g * g;
        }
        for i in 0..dim {
            let lr_mu = cfg.learning_rate / (cfg.lr_tau + g2_accum[i].sqrt());
            let lr_sd = cfg.learning_rate / (cfg.lr_tau + g2_accum[dim + i].sqrt());
            lambda.mu[i] += lr_mu * grad[i];
            lambda.log_sd[i] += lr_sd * grad[dim + i];
        }
        if !lambda.is_finite() {
            return Err(InferenceError::Divergence { iteration: iter });
        }
        trajectory.push(lambda.clone());
    }
    Ok(trajectory)
}
