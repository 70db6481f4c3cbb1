//! Wires a validated configuration to the library: builds the study's model
//! and conditioning distribution, runs the requested algorithm, and shapes
//! the output rows.

use crate::config::{Algorithm, ExperimentConfig, Study};
use crate::output::{Row, RunResult};
use serde_json::{json, Map, Value};
use stocond::conditioning::ObservationSource;
use stocond::dist::DistSpec;
use stocond::inference::{
    bbvi, importance_sampling, pmmh, sghmc, BbviConfig, PmmhConfig, SghmcConfig,
    VariationalParams,
};
use stocond::model::Model;
use stocond::rng::{derive_seed, RandomSource};
use stocond::studies::{commute, conjugate, nypopu, sailing};
use stocond::summary;

/// Per-chain seed: chain `i` of an experiment with seed `s` runs on
/// `derive_seed(s, i)`. The CLI runs a single chain (index 0).
fn chain_rng(cfg: &ExperimentConfig) -> RandomSource {
    RandomSource::new(derive_seed(cfg.seed, 0))
}

struct AlgoDefaults {
    step_size: f64,
    friction: f64,
    leapfrog: u32,
    grad_draws: u32,
    proposal_scale: f64,
    learning_rate: f64,
}

fn defaults_for(study: Study) -> AlgoDefaults {
    match study {
        Study::ConjugateCheck => AlgoDefaults {
            step_size: 0.05,
            friction: 2.0,
            leapfrog: 10,
            grad_draws: 1,
            proposal_scale: 1.2,
            learning_rate: 0.5,
        },
        Study::Commute => AlgoDefaults {
            step_size: 0.08,
            friction: 2.5,
            leapfrog: 10,
            grad_draws: 1,
            proposal_scale: 0.5,
            learning_rate: 0.5,
        },
        Study::NyPopu => AlgoDefaults {
            step_size: 0.02,
            friction: 3.0,
            leapfrog: 10,
            grad_draws: 32,
            proposal_scale: 0.25,
            learning_rate: 0.2,
        },
        Study::Sailing => AlgoDefaults {
            step_size: 0.0,
            friction: 0.0,
            leapfrog: 1,
            grad_draws: 1,
            proposal_scale: 0.8,
            learning_rate: 0.2,
        },
    }
}

fn run_algorithm<M, D>(
    model: &M,
    d: &D,
    repetitions: f64,
    init: Option<Vec<f64>>,
    proposal: &[DistSpec],
    cfg: &ExperimentConfig,
) -> Result<RunResult, String>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    let defaults = defaults_for(cfg.study);
    let mut rng = chain_rng(cfg);
    let names = model.param_names();
    match cfg.algorithm {
        Algorithm::Pmmh => {
            let pc = PmmhConfig {
                draws: cfg.draws,
                burn_in: cfg.burn_in,
                n: cfg.n,
                proposal_scale: cfg.proposal_scale.unwrap_or(defaults.proposal_scale),
                adapt: true,
                repetitions,
                exact: false,
                thin: cfg.thin,
                init,
            };
            let out = pmmh(model, d, &pc, &mut rng).map_err(|e| e.to_string())?;
            Ok(RunResult {
                names,
                rows: mcmc_rows(model, &out.samples),
                acceptance: out.acceptance,
                burn_in: out.burn_in,
                weighted: false,
                extras: Map::new(),
                stuck: out.stuck,
            })
        }
        Algorithm::Sghmc => {
            let sc = SghmcConfig {
                draws: cfg.draws,
                burn_in: cfg.burn_in,
                step_size: cfg.step_size.unwrap_or(defaults.step_size),
                friction: cfg.friction.unwrap_or(defaults.friction),
                leapfrog: cfg.leapfrog.unwrap_or(defaults.leapfrog),
                repetitions,
                grad_draws: cfg.grad_draws.unwrap_or(defaults.grad_draws),
                thin: cfg.thin,
                init,
            };
            let out = sghmc(model, d, &sc, &mut rng).map_err(|e| e.to_string())?;
            Ok(RunResult {
                names,
                rows: mcmc_rows(model, &out.samples),
                acceptance: None,
                burn_in: out.burn_in,
                weighted: false,
                extras: Map::new(),
                stuck: false,
            })
        }
        Algorithm::Is => {
            let out = importance_sampling(
                model,
                d,
                proposal,
                cfg.particles,
                cfg.n,
                &mut rng,
                repetitions,
            )
            .map_err(|e| e.to_string())?;
            let rows = out
                .samples
                .iter()
                .map(|s| Row {
                    iteration: s.iteration,
                    weight: s.weight,
                    values: model.constrain(&s.x.0),
                })
                .collect();
            Ok(RunResult {
                names,
                rows,
                acceptance: None,
                burn_in: 0,
                weighted: true,
                extras: Map::new(),
                stuck: false,
            })
        }
        Algorithm::Bbvi => {
            let bc = BbviConfig {
                iterations: cfg.iterations,
                batch: cfg.batch,
                learning_rate: cfg.learning_rate.unwrap_or(defaults.learning_rate),
                lr_tau: 1.0,
                repetitions,
            };
            let init_lambda = match init {
                Some(x) => VariationalParams::new(x, vec![0.0; model.dim()]),
                None => VariationalParams::standard(model.dim()),
            };
            let traj = bbvi(model, d, &init_lambda, &bc, &mut rng).map_err(|e| e.to_string())?;
            let last = traj.last().expect("nonempty trajectory").clone();
            // Posterior draws sampled from the converged variational
            // distribution.
            let rows = (0..cfg.draws)
                .map(|i| {
                    let x = last.sample(&mut rng);
                    Row {
                        iteration: i,
                        weight: 1.0,
                        values: model.constrain(&x),
                    }
                })
                .collect();
            let mut extras = Map::new();
            extras.insert(
                "variational".into(),
                json!({ "mu": last.mu, "log_sd": last.log_sd }),
            );
            Ok(RunResult {
                names,
                rows,
                acceptance: None,
                burn_in: 0,
                weighted: false,
                extras,
                stuck: false,
            })
        }
    }
}

fn mcmc_rows<M: Model>(model: &M, samples: &[stocond::PosteriorSample]) -> Vec<Row> {
    samples
        .iter()
        .map(|s| Row {
            iteration: s.iteration,
            weight: s.weight,
            values: model.constrain(&s.x.0),
        })
        .collect()
}

pub fn execute(cfg: &ExperimentConfig) -> Result<RunResult, String> {
    match cfg.study {
        Study::ConjugateCheck => {
            let model = conjugate::BetaBernoulliModel::flat();
            let d = stocond::ObservedDistribution::Parametric(
                DistSpec::bernoulli(cfg.theta).map_err(|e| e.to_string())?,
            );
            let proposal = vec![DistSpec::beta(1.0, 1.0).expect("valid")];
            run_algorithm(&model, &d, 1.0, None, &proposal, cfg)
        }
        Study::Commute => {
            let variant =
                commute::CommuteVariant::parse(cfg.variant.as_deref().unwrap_or("stochastic"))
                    .ok_or("unknown commute variant")?;
            let data = if cfg.days == commute::GOLDEN_DAYS as u32 {
                commute::simulate_commute(
                    commute::GOLDEN_DAYS,
                    commute::GOLDEN_PARAMS,
                    false,
                    &mut RandomSource::new(commute::GOLDEN_SEED),
                )
            } else {
                commute::simulate_commute(
                    cfg.days as usize,
                    commute::GOLDEN_PARAMS,
                    false,
                    &mut RandomSource::new(derive_seed(cfg.seed, 1)),
                )
            };
            let model = commute::CommuteModel::new(variant);
            let (d, reps) = model.conditioning(&data).map_err(|e| e.to_string())?;
            let proposal = vec![DistSpec::beta(1.0, 1.0).expect("valid"); 3];
            // Product-conditioned variants average gradient draws to tame
            // the K-scaled gradient noise.
            let mut cfg = cfg.clone();
            if cfg.grad_draws.is_none() && reps > 1.0 {
                cfg.grad_draws = Some(16);
            }
            run_algorithm(&model, &d, reps, None, &proposal, &cfg)
        }
        Study::NyPopu => {
            let (summary_row, quantiles) =
                nypopu::sample_inputs(cfg.sample).ok_or("sample must be 1 or 2")?;
            let (model, d, reps) =
                nypopu::nypopu_model(summary_row, quantiles).map_err(|e| e.to_string())?;
            let proposal = vec![
                DistSpec::log_normal(summary_row.mean.ln(), 0.5).expect("valid"),
                DistSpec::log_normal((summary_row.sd * summary_row.sd).ln(), 1.0).expect("valid"),
            ];
            let mut result =
                run_algorithm(&model, &d, reps, Some(model.init()), &proposal, cfg)?;
            // Posterior predictive totals over all municipalities.
            let posterior: Vec<stocond::PosteriorSample> = result
                .rows
                .iter()
                .map(|r| stocond::PosteriorSample {
                    x: model.unconstrain(&r.values).into(),
                    weight: r.weight,
                    iteration: r.iteration,
                })
                .collect();
            let mut rng = RandomSource::new(derive_seed(cfg.seed, 2));
            let totals = nypopu::posterior_predictive_total(
                &model,
                &posterior,
                nypopu::TOWNS,
                cfg.predictive_reps,
                &mut rng,
            );
            let (lo, hi) = nypopu::predictive_interval(&totals);
            result.extras.insert(
                "predictive_total".into(),
                json!({
                    "lo": lo,
                    "hi": hi,
                    "mean": summary::mean(&totals),
                    "reps": cfg.predictive_reps,
                    "towns": nypopu::TOWNS,
                }),
            );
            Ok(result)
        }
        Study::Sailing => {
            let model = sailing::SailingModel::new(cfg.lake_size as usize, cfg.temperature);
            let d = sailing::WindRandomWalk;
            let proposal = vec![DistSpec::uniform(
                sailing::UNIT_COST_RANGE.0,
                sailing::UNIT_COST_RANGE.1,
            )
            .expect("valid")];
            let mut result = run_algorithm(&model, &d, 1.0, None, &proposal, cfg)?;
            let ucs: Vec<f64> = result.rows.iter().map(|r| r.values[0]).collect();
            let mode = summary::mode_from_histogram(
                &ucs,
                sailing::UNIT_COST_RANGE.0,
                sailing::UNIT_COST_RANGE.1,
                35,
            );
            result.extras.insert("unit_cost_mode".into(), json!(mode));
            // Expected travel cost of the inferred (posterior-mode) policy.
            let mut rng = RandomSource::new(derive_seed(cfg.seed, 3));
            let eval = sailing::evaluate_policy(
                &sailing::ParametricPolicy { unit_cost: mode },
                cfg.lake_size as usize,
                &sailing::SailingParams::default(),
                cfg.episodes,
                &mut rng,
                sailing::default_cap(cfg.lake_size as usize),
            )
            .map_err(|e| e.to_string())?;
            result.extras.insert(
                "inferred_travel_cost".into(),
                json!({
                    "mean": eval.mean,
                    "ci_lo": eval.ci_lo,
                    "ci_hi": eval.ci_hi,
                    "episodes": eval.episodes,
                }),
            );
            Ok(result)
        }
    }
}

/// Value echo of the effective configuration for the summary file.
pub fn config_echo(cfg: &ExperimentConfig) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("study".into(), json!(cfg.study.to_string()));
    if let Some(v) = &cfg.variant {
        map.insert("variant".into(), json!(v));
    }
    map.insert("algorithm".into(), json!(cfg.algorithm.to_string()));
    map.insert("draws".into(), json!(cfg.draws));
    map.insert("N".into(), json!(cfg.n));
    map.insert("seed".into(), json!(cfg.seed));
    match cfg.study {
        Study::Sailing => {
            map.insert("lake_size".into(), json!(cfg.lake_size));
            map.insert("temperature".into(), json!(cfg.temperature));
        }
        Study::NyPopu => {
            map.insert("sample".into(), json!(cfg.sample));
        }
        Study::Commute => {
            map.insert("days".into(), json!(cfg.days));
        }
        Study::ConjugateCheck => {
            map.insert("theta".into(), json!(cfg.theta));
        }
    }
    map
}
