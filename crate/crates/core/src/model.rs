//! The model contract: log-prior, log-conditional and parameter transforms.
//!
//! Latent variables live in an unconstrained vector ([`ParamVector`]); each
//! coordinate carries a [`Transform`] to its constrained (natural) space.
//! Priors are expressed in unconstrained coordinates and therefore include
//! the log-Jacobian of the transform. Everything is generic over [`Scalar`]
//! so the same code yields values and exact forward-mode gradients.

use crate::autodiff::{c, log_sigmoid, sigmoid, Scalar};

/// Unconstrained latent vector with natural-space views provided by the
/// owning model's transform ledger.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamVector(pub Vec<f64>);

impl ParamVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ParamVector {
    fn from(v: Vec<f64>) -> Self {
        ParamVector(v)
    }
}

/// Map from an unconstrained coordinate to its constrained space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transform {
    /// Real line, no change.
    Identity,
    /// Positive reals via exp.
    Log,
    /// Unit interval via the logistic function.
    Logit,
    /// Bounded interval `(lo, hi)` via a scaled logistic.
    ScaledLogit { lo: f64, hi: f64 },
}

impl Transform {
    /// Constrained value from the unconstrained coordinate.
    pub fn constrain<S: Scalar>(&self, t: S) -> S {
        match *self {
            Transform::Identity => t,
            Transform::Log => t.exp(),
            Transform::Logit => sigmoid(t),
            Transform::ScaledLogit { lo, hi } => c::<S>(lo) + c::<S>(hi - lo) * sigmoid(t),
        }
    }

    /// log |d constrain / dt|, the density correction for priors stated in
    /// natural space.
    pub fn log_jacobian<S: Scalar>(&self, t: S) -> S {
        match *self {
            Transform::Identity => c(0.0),
            Transform::Log => t,
            Transform::Logit => log_sigmoid(t) + log_sigmoid(-t),
            Transform::ScaledLogit { lo, hi } => {
                c::<S>((hi - lo).ln()) + log_sigmoid(t) + log_sigmoid(-t)
            }
        }
    }

    /// Unconstrained coordinate for a constrained value (inverse of
    /// `constrain`); used to initialize chains and place proposals.
    pub fn unconstrain(&self, v: f64) -> f64 {
        match *self {
            Transform::Identity => v,
            Transform::Log => v.ln(),
            Transform::Logit => (v / (1.0 - v)).ln(),
            Transform::ScaledLogit { lo, hi } => {
                let u = (v - lo) / (hi - lo);
                (u / (1.0 - u)).ln()
            }
        }
    }
}

/// A Bayesian model amenable to stochastic conditioning.
///
/// `log_prior` is the prior density of the unconstrained vector (including
/// Jacobian terms); `log_cond` is the log-density of one observation given
/// the latent vector. The observation type is model-specific: scalar-vector
/// observations for the elementary studies, richer handles (e.g. a wind
/// history) where the conditioning object is itself a process.
pub trait Model {
    type Obs;

    fn dim(&self) -> usize;

    fn param_names(&self) -> Vec<String>;

    fn transforms(&self) -> Vec<Transform>;

    fn log_prior<S: Scalar>(&self, x: &[S]) -> S;

    fn log_cond<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S;

    fn log_joint<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S {
        let prior = self.log_prior(x);
        if prior.value() == f64::NEG_INFINITY {
            return prior;
        }
        prior + self.log_cond(x, y)
    }

    /// Natural-space view of an unconstrained vector, in `param_names` order.
    fn constrain(&self, x: &[f64]) -> Vec<f64> {
        self.transforms()
            .iter()
            .zip(x.iter())
            .map(|(tr, &t)| tr.constrain(t))
            .collect()
    }

    /// Unconstrained vector for natural-space values.
    fn unconstrain(&self, v: &[f64]) -> Vec<f64> {
        self.transforms()
            .iter()
            .zip(v.iter())
            .map(|(tr, &nat)| tr.unconstrain(nat))
            .collect()
    }
}
