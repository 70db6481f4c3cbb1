//! Commute study: inferring weather-forecast accuracy from rain and trip
//! duration records.
//!
//! A commuter rides a motorcycle on dry days (15 +- 2 minutes), takes a taxi
//! when rain is forecast (30 +- 4), and rides slowly through rural roads
//! when rain catches them without a forecast (60 +- 8). The latent
//! quantities are the rain probability `p_r`, the true-positive forecast
//! rate `p_t` and the false-positive rate `p_f`, each under a flat Beta
//! prior. The forecast itself is never observed and is marginalized out of
//! every density.
//!
//! Four model variants share the same generative story and differ in what
//! they condition on:
//!
//! - `Deterministic`: paired (rain, duration) days, conventional
//!   conditioning on the full dataset with the joint per-day density;
//! - `Averaged`: rains and durations observed as separate unpaired sets,
//!   conventional conditioning with rain analytically summed out of the
//!   duration density (each duration scored under its mixture marginal);
//! - `Stochastic`: conditioning each day on the product distribution
//!   Rains x Durations. A drawn pair combines the rain of one day with the
//!   duration of an independent day, so it is scored under the same
//!   independent-pair density as `Averaged`: the two variants define the
//!   same posterior, one computed analytically and one estimated by
//!   sampling;
//! - `Intensity`: as `Stochastic`, with rain intensity observed alongside
//!   rain. The unforecast wet ride is centered at `30 + 30 * intensity`,
//!   which makes the duration density depend on the drawn continuous
//!   intensity; the analytic averaging of `Averaged` is no longer
//!   available and only the sampled route remains.

use crate::autodiff::{c, log_sum_exp2, Scalar};
use crate::conditioning::{CondError, ObservedDistribution};
use crate::dist::{bernoulli_lpmf, normal_lpdf};
use crate::model::{Model, Transform};
use crate::rng::RandomSource;
use rand_distr::Distribution;

/// Forecast-accuracy parameters in natural (probability) space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommuteParams {
    pub p_r: f64,
    pub p_t: f64,
    pub p_f: f64,
}

/// Daily commute records. `paired` marks whether index i of `rains` and
/// `durations` belongs to the same day; intensities are recorded per day
/// (zero on dry days).
#[derive(Debug, Clone, PartialEq)]
pub struct CommuteData {
    pub rains: Vec<bool>,
    pub durations: Vec<f64>,
    pub intensities: Option<Vec<f64>>,
    pub paired: bool,
}

impl CommuteData {
    pub fn days(&self) -> usize {
        self.rains.len()
    }

    /// Flattened paired observation `[r1, d1, r2, d2, ...]` used for
    /// conditioning on the dataset as a value.
    pub fn paired_flat(&self) -> Vec<f64> {
        assert!(self.paired, "paired observation requires paired data");
        let mut out = Vec::with_capacity(2 * self.days());
        for (r, d) in self.rains.iter().zip(self.durations.iter()) {
            out.push(*r as u8 as f64);
            out.push(*d);
        }
        out
    }

    /// Point-mass conditioning object for the deterministic and averaged
    /// variants.
    pub fn dirac_paired(&self) -> ObservedDistribution {
        ObservedDistribution::dirac(self.paired_flat())
    }

    /// `Rains x Durations`: the product of the independently observed
    /// marginal sets.
    pub fn product_distribution(&self) -> Result<ObservedDistribution, CondError> {
        ObservedDistribution::product_empirical(vec![
            self.rains.iter().map(|&r| vec![r as u8 as f64]).collect(),
            self.durations.iter().map(|&d| vec![d]).collect(),
        ])
    }

    /// `(Rain, Intensity) x Durations` for the intensity variant; rain and
    /// its intensity are observed jointly.
    pub fn intensity_product_distribution(&self) -> Result<ObservedDistribution, CondError> {
        let intensities = self
            .intensities
            .as_ref()
            .ok_or(CondError::Empty("intensity record"))?;
        ObservedDistribution::product_empirical(vec![
            self.rains
                .iter()
                .zip(intensities.iter())
                .map(|(&r, &i)| vec![r as u8 as f64, i])
                .collect(),
            self.durations.iter().map(|&d| vec![d]).collect(),
        ])
    }

    /// CSV with header `day,rain,intensity,duration`, one row per day.
    pub fn to_csv(&self) -> String {
        let zeros;
        let intensities = match &self.intensities {
            Some(v) => v,
            None => {
                zeros = vec![0.0; self.days()];
                &zeros
            }
        };
        let mut out = String::from("day,rain,intensity,duration\n");
        for (day, ((r, d), i)) in self
            .rains
            .iter()
            .zip(self.durations.iter())
            .zip(intensities.iter())
            .enumerate()
        {
            out.push_str(&format!("{},{},{},{}\n", day, *r as u8, i, d));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty file")?;
        if header.trim() != "day,rain,intensity,duration" {
            return Err(format!("unexpected header: {header}"));
        }
        let mut rains = Vec::new();
        let mut intensities = Vec::new();
        let mut durations = Vec::new();
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(format!("bad row: {line}"));
            }
            rains.push(fields[1].trim() == "1");
            intensities.push(fields[2].trim().parse::<f64>().map_err(|e| e.to_string())?);
            durations.push(fields[3].trim().parse::<f64>().map_err(|e| e.to_string())?);
        }
        Ok(CommuteData {
            rains,
            durations,
            intensities: Some(intensities),
            paired: true,
        })
    }
}

/// Seed of the committed golden dataset.
pub const GOLDEN_SEED: u64 = 20_211_474;
/// Generating parameters of the golden dataset.
pub const GOLDEN_PARAMS: CommuteParams = CommuteParams {
    p_r: 0.2,
    p_t: 0.8,
    p_f: 0.1,
};
pub const GOLDEN_DAYS: usize = 30;

/// Draws `days` days from the generative model. Intensity is always
/// recorded (uniform on rainy days, zero otherwise); when `with_intensity`
/// is set, the unforecast wet ride is centered at `30 + 30 * intensity`
/// instead of 60.
pub fn simulate_commute(
    days: usize,
    params: CommuteParams,
    with_intensity: bool,
    rng: &mut RandomSource,
) -> CommuteData {
    let mut rains = Vec::with_capacity(days);
    let mut durations = Vec::with_capacity(days);
    let mut intensities = Vec::with_capacity(days);
    for _ in 0..days {
        let rain = rng.next_f64() < params.p_r;
        let forecast = rng.next_f64() < if rain { params.p_t } else { params.p_f };
        let u_int = rng.next_f64();
        let intensity = if rain { u_int } else { 0.0 };
        let z: f64 = rand_distr::StandardNormal.sample(rng);
        let (mean, sd) = if forecast {
            (30.0, 4.0)
        } else if !rain {
            (15.0, 2.0)
        } else if with_intensity {
            (30.0 + 30.0 * intensity, 8.0)
        } else {
            (60.0, 8.0)
        };
        rains.push(rain);
        durations.push(mean + sd * z);
        intensities.push(intensity);
    }
    CommuteData {
        rains,
        durations,
        intensities: Some(intensities),
        paired: true,
    }
}

/// The four conditioning variants of the commute model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommuteVariant {
    Deterministic,
    Averaged,
    Stochastic,
    Intensity,
}

impl CommuteVariant {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "deterministic" => Some(CommuteVariant::Deterministic),
            "averaged" => Some(CommuteVariant::Averaged),
            "stochastic" => Some(CommuteVariant::Stochastic),
            "intensity" => Some(CommuteVariant::Intensity),
            _ => None,
        }
    }
}

/// log of `w * exp(lp_a) + (1-w) * exp(lp_b)`; the forecast indicator
/// marginalized out of a two-branch duration density.
fn mix2<S: Scalar>(w: S, lp_a: S, lp_b: S) -> S {
    log_sum_exp2(w.ln() + lp_a, (c::<S>(1.0) - w).ln() + lp_b)
}

/// log p(rain, duration | params) with the forecast marginalized.
fn pair_lp<S: Scalar>(p_r: S, p_t: S, p_f: S, rain: bool, duration: f64) -> S {
    let rain_lp = bernoulli_lpmf(rain as u8 as f64, p_r);
    let taxi = normal_lpdf(duration, c(30.0), c(4.0));
    if rain {
        rain_lp + mix2(p_t, taxi, normal_lpdf(duration, c(60.0), c(8.0)))
    } else {
        rain_lp + mix2(p_f, taxi, normal_lpdf(duration, c(15.0), c(2.0)))
    }
}

/// log p(rain | p_r) + log sum_r p(r | p_r) p(duration | r): the duration
/// density with rain itself analytically averaged out.
fn averaged_pair_lp<S: Scalar>(p_r: S, p_t: S, p_f: S, rain: bool, duration: f64) -> S {
    let rain_lp = bernoulli_lpmf(rain as u8 as f64, p_r);
    let taxi = normal_lpdf(duration, c(30.0), c(4.0));
    let wet = mix2(p_t, taxi, normal_lpdf(duration, c(60.0), c(8.0)));
    let dry = mix2(p_f, taxi, normal_lpdf(duration, c(15.0), c(2.0)));
    rain_lp + log_sum_exp2(p_r.ln() + wet, (c::<S>(1.0) - p_r).ln() + dry)
}

/// log p(rain, intensity, duration | params); intensity is uniform on
/// rainy days (zero log-density) and shifts the unforecast wet ride mean.
fn intensity_lp<S: Scalar>(
    p_r: S,
    p_t: S,
    p_f: S,
    rain: bool,
    intensity: f64,
    duration: f64,
) -> S {
    let rain_lp = bernoulli_lpmf(rain as u8 as f64, p_r);
    let taxi = normal_lpdf(duration, c(30.0), c(4.0));
    if rain {
        let rural = normal_lpdf(duration, c(30.0 + 30.0 * intensity), c(8.0));
        rain_lp + mix2(p_t, taxi, rural)
    } else {
        rain_lp + mix2(p_f, taxi, normal_lpdf(duration, c(15.0), c(2.0)))
    }
}

/// Per-unit conditional log-density for a variant, in natural-space
/// parameters. `obs` is `[rain, duration]` for the pair variants and
/// `[rain, intensity, duration]` for the intensity variant.
///
/// The stochastic variant scores a drawn pair under the independent-pair
/// density (rain and duration come from different days), which is the same
/// density the averaged variant evaluates in closed form.
pub fn commute_log_cond(variant: CommuteVariant, params: &CommuteParams, obs: &[f64]) -> f64 {
    let (p_r, p_t, p_f) = (params.p_r, params.p_t, params.p_f);
    match variant {
        CommuteVariant::Deterministic => pair_lp(p_r, p_t, p_f, obs[0] != 0.0, obs[1]),
        CommuteVariant::Averaged | CommuteVariant::Stochastic => {
            averaged_pair_lp(p_r, p_t, p_f, obs[0] != 0.0, obs[1])
        }
        CommuteVariant::Intensity => {
            intensity_lp(p_r, p_t, p_f, obs[0] != 0.0, obs[1], obs[2])
        }
    }
}

/// Commute model exposing the inference contract. Latents are the logits
/// of `(p_r, p_t, p_f)` under flat Beta priors.
#[derive(Debug, Clone, Copy)]
pub struct CommuteModel {
    pub variant: CommuteVariant,
}

impl CommuteModel {
    pub fn new(variant: CommuteVariant) -> Self {
        CommuteModel { variant }
    }

    /// The conditioning object and repetition count for this variant over a
    /// dataset: a point mass for the conventionally conditioned variants,
    /// the product of marginal sets (one conditioning per day) otherwise.
    pub fn conditioning(
        &self,
        data: &CommuteData,
    ) -> Result<(ObservedDistribution, f64), CondError> {
        match self.variant {
            CommuteVariant::Deterministic | CommuteVariant::Averaged => {
                Ok((data.dirac_paired(), 1.0))
            }
            CommuteVariant::Stochastic => {
                Ok((data.product_distribution()?, data.days() as f64))
            }
            CommuteVariant::Intensity => Ok((
                data.intensity_product_distribution()?,
                data.days() as f64,
            )),
        }
    }
}

impl Model for CommuteModel {
    type Obs = Vec<f64>;

    fn dim(&self) -> usize {
        3
    }

    fn param_names(&self) -> Vec<String> {
        vec!["p_r".into(), "p_t".into(), "p_f".into()]
    }

    fn transforms(&self) -> Vec<Transform> {
        vec![Transform::Logit; 3]
    }

    fn log_prior<S: Scalar>(&self, x: &[S]) -> S {
        // Beta(1,1) priors have unit density; only the logit Jacobians
        // remain.
        Transform::Logit.log_jacobian(x[0])
            + Transform::Logit.log_jacobian(x[1])
            + Transform::Logit.log_jacobian(x[2])
    }

    fn log_cond<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S {
        let p_r = Transform::Logit.constrain(x[0]);
        let p_t = Transform::Logit.constrain(x[1]);
        let p_f = Transform::Logit.constrain(x[2]);
        match self.variant {
            CommuteVariant::Deterministic => {
                let mut total = c::<S>(0.0);
                for pair in y.chunks_exact(2) {
                    total = total + pair_lp(p_r, p_t, p_f, pair[0] != 0.0, pair[1]);
                }
                total
            }
            CommuteVariant::Averaged => {
                let mut total = c::<S>(0.0);
                for pair in y.chunks_exact(2) {
                    total = total + averaged_pair_lp(p_r, p_t, p_f, pair[0] != 0.0, pair[1]);
                }
                total
            }
            CommuteVariant::Stochastic => averaged_pair_lp(p_r, p_t, p_f, y[0] != 0.0, y[1]),
            CommuteVariant::Intensity => {
                intensity_lp(p_r, p_t, p_f, y[0] != 0.0, y[1], y[2])
            }
        }
    }
}
