//! Conjugate fixtures with closed-form posteriors, used to validate every
//! inference algorithm end to end.
//!
//! Conditioning a Beta(alpha, beta) prior once on the distribution
//! Bernoulli(theta) shifts the exact posterior to
//! Beta(alpha + theta, beta + 1 - theta); conditioning a Gaussian prior on
//! a point observation gives the usual conjugate-Gaussian posterior.

use crate::autodiff::Scalar;
use crate::dist::{beta_lpdf, bernoulli_lpmf, normal_lpdf};
use crate::model::{Model, Transform};

/// Beta prior, Bernoulli likelihood; the latent success probability is
/// carried as a log-odds coordinate.
#[derive(Debug, Clone)]
pub struct BetaBernoulliModel {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaBernoulliModel {
    pub fn flat() -> Self {
        BetaBernoulliModel {
            alpha: 1.0,
            beta: 1.0,
        }
    }

    /// Parameters of the exact posterior after observing Bernoulli(theta)
    /// once.
    pub fn posterior_after_bernoulli(&self, theta: f64) -> (f64, f64) {
        (self.alpha + theta, self.beta + 1.0 - theta)
    }
}

/// Mean and standard deviation of a Beta(a, b) distribution.
pub fn beta_moments(a: f64, b: f64) -> (f64, f64) {
    let mean = a / (a + b);
    let var = a * b / ((a + b) * (a + b) * (a + b + 1.0));
    (mean, var.sqrt())
}

impl Model for BetaBernoulliModel {
    type Obs = Vec<f64>;

    fn dim(&self) -> usize {
        1
    }

    fn param_names(&self) -> Vec<String> {
        vec!["x".into()]
    }

    fn transforms(&self) -> Vec<Transform> {
        vec![Transform::Logit]
    }

    fn log_prior<S: Scalar>(&self, x: &[S]) -> S {
        let p = Transform::Logit.constrain(x[0]);
        beta_lpdf(p, self.alpha, self.beta) + Transform::Logit.log_jacobian(x[0])
    }

    fn log_cond<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S {
        let p = Transform::Logit.constrain(x[0]);
        let mut total = S::from_f64(0.0);
        for &yi in y {
            total = total + bernoulli_lpmf(yi, p);
        }
        total
    }
}

/// Gaussian prior on a location, Gaussian likelihood with known scale.
#[derive(Debug, Clone)]
pub struct GaussianMeanModel {
    pub prior_mean: f64,
    pub prior_sd: f64,
    pub obs_sd: f64,
}

impl GaussianMeanModel {
    /// Conjugate posterior (mean, sd) after observing the values `ys`.
    pub fn posterior_given(&self, ys: &[f64]) -> (f64, f64) {
        let prior_prec = 1.0 / (self.prior_sd * self.prior_sd);
        let obs_prec = 1.0 / (self.obs_sd * self.obs_sd);
        let n = ys.len() as f64;
        let prec = prior_prec + n * obs_prec;
        let mean = (self.prior_mean * prior_prec + ys.iter().sum::<f64>() * obs_prec) / prec;
        (mean, prec.recip().sqrt())
    }
}

impl Model for GaussianMeanModel {
    type Obs = Vec<f64>;

    fn dim(&self) -> usize {
        1
    }

    fn param_names(&self) -> Vec<String> {
        vec!["mu".into()]
    }

    fn transforms(&self) -> Vec<Transform> {
        vec![Transform::Identity]
    }

    fn log_prior<S: Scalar>(&self, x: &[S]) -> S {
        let z = (x[0] - S::from_f64(self.prior_mean)) / S::from_f64(self.prior_sd);
        S::from_f64(-0.5 * crate::dist::LN_2PI - self.prior_sd.ln()) - z * z * S::from_f64(0.5)
    }

    fn log_cond<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S {
        let mut total = S::from_f64(0.0);
        for &yi in y {
            total = total + normal_lpdf(yi, x[0], S::from_f64(self.obs_sd));
        }
        total
    }
}
