//! Gradient of the log-joint and its finite-difference verifier.

use crate::autodiff::{central_difference_grad, value_and_grad, Dual};
use crate::model::Model;

/// Log-joint value and its gradient in unconstrained coordinates.
///
/// A non-finite log-joint is reported as `value = -inf` with the gradient
/// zeroed; `is_degenerate` flags that case.
#[derive(Debug, Clone, PartialEq)]
pub struct GradResult {
    pub value: f64,
    pub grad: Vec<f64>,
}

impl GradResult {
    pub fn is_degenerate(&self) -> bool {
        !self.value.is_finite()
    }
}

/// Exact gradient of `log p(x) + log p(y | x)` at `x`, including the
/// log-Jacobian of any constraining transform (the model's `log_prior`
/// carries it).
pub fn grad_log_joint<M: Model>(model: &M, x: &[f64], y: &M::Obs) -> GradResult {
    let (value, grad) = value_and_grad(|args: &[Dual]| model.log_joint(args, y), x);
    if !value.is_finite() {
        return GradResult {
            value: f64::NEG_INFINITY,
            grad: vec![0.0; x.len()],
        };
    }
    debug_assert!(
        grad.iter().all(|g| g.is_finite()),
        "finite log-joint with non-finite gradient at {x:?}"
    );
    GradResult { value, grad }
}

/// Max absolute difference between the analytic gradient and a central
/// finite difference with step `h`. Large values flag non-differentiable
/// points (support boundaries, kinks).
pub fn finite_difference_check<M: Model>(model: &M, x: &[f64], y: &M::Obs, h: f64) -> f64 {
    assert!(h > 0.0, "finite-difference step must be positive");
    let analytic = grad_log_joint(model, x, y);
    let numeric = central_difference_grad(|t: &[f64]| model.log_joint(t, y), x, h);
    analytic
        .grad
        .iter()
        .zip(numeric.iter())
        .map(|(a, n)| (a - n).abs())
        .fold(0.0, f64::max)
}
