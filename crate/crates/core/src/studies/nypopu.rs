//! Estimating a total population from published summary statistics.
//!
//! Municipality populations are observed only through a mean, a standard
//! deviation and a quantile table for a random sample of n = 100 towns.
//! The model places a log-normal sampling distribution on populations,
//! parameterized by its real-space mean `m` and variance `s2` via
//!
//! ```text
//! sigma = sqrt(ln(s2/m^2 + 1)),   mu = ln m - sigma^2/2,
//! ```
//!
//! with a Normal(mean, sd/sqrt(n)) prior on `m` and an improper flat prior
//! on `ln s2`. The model is conditioned stochastically, once per sampled
//! town, on the piecewise-uniform distribution defined by the quantile
//! table. The posterior predictive total over all 804 municipalities is
//! estimated by resampling 804-element sample sets.

use crate::autodiff::{c, Scalar};
use crate::conditioning::ObservedDistribution;
use crate::dist::{lognormal_lpdf, piecewise_uniform_from_quantiles, DistError, LN_2PI};
use crate::inference::PosteriorSample;
use crate::model::{Model, Transform};
use crate::rng::RandomSource;
use rand_distr::Distribution;

/// Published summary of a sample: mean, standard deviation, sample size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NyPopuSummary {
    pub mean: f64,
    pub sd: f64,
    pub n: u32,
}

/// Real-space parameters of the log-normal sampling distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NyPopuParams {
    pub m: f64,
    pub s2: f64,
}

impl NyPopuParams {
    /// Log-space parameters `(mu, sigma)` of the log-normal with mean `m`
    /// and variance `s2`.
    pub fn mu_sigma(&self) -> (f64, f64) {
        let sigma2 = (self.s2 / (self.m * self.m) + 1.0).ln();
        let sigma = sigma2.sqrt();
        (self.m.ln() - sigma2 / 2.0, sigma)
    }
}

/// Number of municipalities whose total is being estimated.
pub const TOWNS: u32 = 804;
/// The true total population, for reference in experiments.
pub const TRUE_TOTAL: f64 = 13_776_663.0;

/// Quantile rows `(level, value)` for sample 1.
pub const SAMPLE1_QUANTILES: [(f64, f64); 7] = [
    (0.0, 164.0),
    (0.05, 308.0),
    (0.25, 891.0),
    (0.5, 2081.0),
    (0.75, 6049.0),
    (0.95, 25_130.0),
    (1.0, 1_424_815.0),
];

pub const SAMPLE1_SUMMARY: NyPopuSummary = NyPopuSummary {
    mean: 19_667.0,
    sd: 142_218.0,
    n: 100,
};

/// Quantile rows `(level, value)` for sample 2.
pub const SAMPLE2_QUANTILES: [(f64, f64); 7] = [
    (0.0, 162.0),
    (0.05, 315.0),
    (0.25, 863.0),
    (0.5, 1740.0),
    (0.75, 5239.0),
    (0.95, 41_718.0),
    (1.0, 1_809_578.0),
];

pub const SAMPLE2_SUMMARY: NyPopuSummary = NyPopuSummary {
    mean: 38_505.0,
    sd: 228_625.0,
    n: 100,
};

/// Summary and quantiles for sample 1 or 2.
pub fn sample_inputs(sample: u8) -> Option<(NyPopuSummary, &'static [(f64, f64)])> {
    match sample {
        1 => Some((SAMPLE1_SUMMARY, &SAMPLE1_QUANTILES)),
        2 => Some((SAMPLE2_SUMMARY, &SAMPLE2_QUANTILES)),
        _ => None,
    }
}

/// Population model with latents `(ln m, ln s2)`.
#[derive(Debug, Clone, Copy)]
pub struct NyPopuModel {
    pub summary: NyPopuSummary,
}

impl NyPopuModel {
    pub fn new(summary: NyPopuSummary) -> Self {
        NyPopuModel { summary }
    }

    /// Unconstrained starting point at the published summary itself.
    pub fn init(&self) -> Vec<f64> {
        vec![
            self.summary.mean.ln(),
            (self.summary.sd * self.summary.sd).ln(),
        ]
    }

    pub fn params_of(&self, x: &[f64]) -> NyPopuParams {
        NyPopuParams {
            m: x[0].exp(),
            s2: x[1].exp(),
        }
    }
}

impl Model for NyPopuModel {
    type Obs = Vec<f64>;

    fn dim(&self) -> usize {
        2
    }

    fn param_names(&self) -> Vec<String> {
        vec!["m".into(), "s2".into()]
    }

    fn transforms(&self) -> Vec<Transform> {
        vec![Transform::Log, Transform::Log]
    }

    fn log_prior<S: Scalar>(&self, x: &[S]) -> S {
        // Normal(mean, sd/sqrt(n)) on m = exp(x0), plus the log Jacobian of
        // the log transform; the improper flat prior on ln s2 contributes
        // zero in its own coordinate.
        let se = self.summary.sd / (self.summary.n as f64).sqrt();
        let m = x[0].exp();
        let z = (m - c::<S>(self.summary.mean)) / c::<S>(se);
        c::<S>(-0.5 * LN_2PI - se.ln()) - z * z * c::<S>(0.5) + x[0]
    }

    fn log_cond<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S {
        let m = x[0].exp();
        let s2 = x[1].exp();
        let sigma2 = (s2 / (m * m) + c(1.0)).ln();
        let mu = m.ln() - sigma2 * c(0.5);
        let sigma = sigma2.sqrt();
        let mut total = c::<S>(0.0);
        for &yi in y {
            total = total + lognormal_lpdf(yi, mu, sigma);
        }
        total
    }
}

/// Builds the model and its conditioning distribution from a quantile
/// table; conditioning is repeated once per sampled town (`summary.n`).
pub fn nypopu_model(
    summary: NyPopuSummary,
    quantiles: &[(f64, f64)],
) -> Result<(NyPopuModel, ObservedDistribution, f64), DistError> {
    let d = piecewise_uniform_from_quantiles(quantiles)?;
    Ok((
        NyPopuModel::new(summary),
        ObservedDistribution::Parametric(d),
        summary.n as f64,
    ))
}

/// Posterior predictive totals: `reps` sums of `towns`-element sample sets
/// drawn with replacement from the pooled predictive posterior. Each town
/// draw picks a posterior draw of `(m, s2)` and one log-normal variate
/// under it.
pub fn posterior_predictive_total(
    model: &NyPopuModel,
    posterior: &[PosteriorSample],
    towns: u32,
    reps: u32,
    rng: &mut RandomSource,
) -> Vec<f64> {
    assert!(!posterior.is_empty(), "posterior must be nonempty");
    // Pre-derive (mu, sigma) per posterior draw.
    let params: Vec<(f64, f64)> = posterior
        .iter()
        .map(|s| model.params_of(&s.x.0).mu_sigma())
        .collect();
    let mut totals = Vec::with_capacity(reps as usize);
    for _ in 0..reps {
        let mut total = 0.0;
        for _ in 0..towns {
            let pick = (rng.next_f64() * params.len() as f64) as usize;
            let (mu, sigma) = params[pick.min(params.len() - 1)];
            let z: f64 = rand_distr::StandardNormal.sample(rng);
            total += (mu + sigma * z).exp();
        }
        totals.push(total);
    }
    totals
}

/// 2.5% / 97.5% interval of the predictive totals.
pub fn predictive_interval(totals: &[f64]) -> (f64, f64) {
    let qs = crate::summary::quantiles_of(totals, &[0.025, 0.975]);
    (qs[0], qs[1])
}
