//! Self-normalized importance sampling with bias-adjusted weights.
//!
//! Particles are drawn in natural space from a product proposal
//! `u(x) = prod_j u_j(x_j)`; the weight of particle i is
//! `w_i = exp(m_i - s_i^2/2N) / u(x_i)` with `(m_i, s_i^2)` the log-joint
//! estimate at the particle. Weights are kept in log space and normalized
//! at the end.

use crate::conditioning::ObservationSource;
use crate::dist::DistSpec;
use crate::estimators::{estimate_loglik, log_bias_adjusted_lik, EstimateOptions};
use crate::inference::{InferenceError, PosteriorSample};
use crate::model::Model;
use crate::rng::RandomSource;

#[derive(Debug, Clone)]
pub struct ImportanceOutput {
    /// Particles with self-normalized weights (the weights sum to one).
    pub samples: Vec<PosteriorSample>,
    /// Unnormalized log-weights, for diagnostics and effective-sample-size
    /// computations.
    pub raw_log_weights: Vec<f64>,
}

impl ImportanceOutput {
    /// Self-normalized posterior mean of a function of the natural-space
    /// parameters.
    pub fn posterior_mean<M: Model>(&self, model: &M, j: usize) -> f64 {
        self.samples
            .iter()
            .map(|s| s.weight * model.constrain(&s.x.0)[j])
            .sum()
    }
}

/// Runs importance sampling with `particles` particles and `n` Monte Carlo
/// draws per log-likelihood estimate. `repetitions` scales the conditional
/// term when the model conditions on `d` several times.
pub fn importance_sampling<M, D>(
    model: &M,
    d: &D,
    proposal: &[DistSpec],
    particles: u32,
    n: u32,
    rng: &mut RandomSource,
    repetitions: f64,
) -> Result<ImportanceOutput, InferenceError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    if particles == 0 {
        return Err(InferenceError::InvalidConfig("particles must be >= 1".into()));
    }
    if proposal.len() != model.dim() {
        return Err(InferenceError::InvalidConfig(format!(
            "proposal has {} components for a {}-dimensional model",
            proposal.len(),
            model.dim()
        )));
    }
    let transforms = model.transforms();
    let opts = EstimateOptions::default().with_repetitions(repetitions);
    let mut log_weights = Vec::with_capacity(particles as usize);
    let mut samples = Vec::with_capacity(particles as usize);
    for i in 0..particles {
        // Draw in natural space, evaluate in unconstrained space. The
        // transform Jacobian enters both the model's unconstrained prior and
        // the proposal's change of variables, so it cancels except for the
        // explicit correction below.
        let mut nat = Vec::with_capacity(proposal.len());
        let mut log_u = 0.0;
        for spec in proposal {
            let v = spec.sample(rng);
            log_u += spec.log_pdf(v);
            nat.push(v);
        }
        let t: Vec<f64> = transforms
            .iter()
            .zip(nat.iter())
            .map(|(tr, &v)| tr.unconstrain(v))
            .collect();
        let log_jac: f64 = transforms
            .iter()
            .zip(t.iter())
            .map(|(tr, &ti)| tr.log_jacobian(ti))
            .sum();
        let est = estimate_loglik(model, &t, d, n, rng, &opts)?;
        let log_w = log_bias_adjusted_lik(&est)? - log_jac - log_u;
        log_weights.push(log_w);
        samples.push(PosteriorSample {
            x: t.into(),
            weight: 0.0,
            iteration: i,
        });
    }
    let hi = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return Err(InferenceError::DegenerateProposal);
    }
    let total: f64 = log_weights.iter().map(|lw| (lw - hi).exp()).sum();
    for (s, lw) in samples.iter_mut().zip(log_weights.iter()) {
        s.weight = (lw - hi).exp() / total;
    }
    Ok(ImportanceOutput {
        samples,
        raw_log_weights: log_weights,
    })
}
