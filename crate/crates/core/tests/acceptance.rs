//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (run with `cargo test --test acceptance -- --nocapture` to see
//! them). Criterion 10 (byte-identical experiment reruns) lives in the CLI
//! crate's acceptance tests next to the binary it exercises.

use stocond::autodiff::Scalar;
use stocond::conditioning::{
    argmax_p1, argmax_stochastic_loglik, argmin_kl, exact_stochastic_loglik,
    expected_log_cond_quadrature, kl_argmax_check, normalization_probe,
    running_normalization_integral, ObservationSource, ObservedDistribution,
};
use stocond::dist::{bernoulli_lpmf, normal_lpdf, DistSpec};
use stocond::estimators::{bias_adjusted_lik, estimate_grad_loglik_scaled, LogLikEstimate};
use stocond::gradients::finite_difference_check;
use stocond::inference::{pmmh, sghmc, PmmhConfig, SghmcConfig};
use stocond::model::{Model, Transform};
use stocond::studies::commute::{
    simulate_commute, CommuteModel, CommuteVariant, GOLDEN_DAYS, GOLDEN_PARAMS, GOLDEN_SEED,
};
use stocond::studies::conjugate::{beta_moments, BetaBernoulliModel, GaussianMeanModel};
use stocond::studies::nypopu::{
    nypopu_model, posterior_predictive_total, predictive_interval, sample_inputs, NyPopuModel,
    TOWNS, TRUE_TOTAL,
};
use stocond::studies::sailing::{
    default_cap, evaluate_policy, value_iteration, GreedyPolicy, ParametricPolicy, SailingModel,
    SailingParams, WindRandomWalk,
};
use stocond::{summary, RandomSource};

fn report(name: &str, pass: bool, detail: &str) -> bool {
    println!(
        "criterion {name}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn within_budget(name: &str, started: std::time::Instant, budget_secs: u64) -> bool {
    let elapsed = started.elapsed();
    report(
        name,
        elapsed.as_secs() < budget_secs,
        &format!("runtime {elapsed:.0?} (budget {budget_secs} s)"),
    )
}

// -------------------------------------------------------------------------
// Criterion 1: conjugate oracle. PMMH and SGHMC on a flat Beta prior with
// one stochastic Bernoulli(0.6) observation recover Beta(1.6, 1.4).
// -------------------------------------------------------------------------
#[test]
fn acceptance_01_conjugate_oracle() {
    let started = std::time::Instant::now();
    let model = BetaBernoulliModel::flat();
    let d = ObservedDistribution::Parametric(DistSpec::bernoulli(0.6).unwrap());
    let (target_mean, target_sd) = beta_moments(1.6, 1.4);

    let pm_cfg = PmmhConfig {
        draws: 10_000,
        n: 32,
        proposal_scale: 1.2,
        ..PmmhConfig::default()
    };
    let pm = pmmh(&model, &d, &pm_cfg, &mut RandomSource::new(1001)).unwrap();
    let pm_xs: Vec<f64> = pm.samples.iter().map(|s| model.constrain(&s.x.0)[0]).collect();

    let sg_cfg = SghmcConfig {
        draws: 10_000,
        step_size: 0.08,
        friction: 2.0,
        leapfrog: 10,
        ..SghmcConfig::default()
    };
    let sg = sghmc(&model, &d, &sg_cfg, &mut RandomSource::new(1002)).unwrap();
    let sg_xs: Vec<f64> = sg.samples.iter().map(|s| model.constrain(&s.x.0)[0]).collect();

    let mut ok = true;
    for (algo, xs) in [("pmmh", &pm_xs), ("sghmc", &sg_xs)] {
        let mean = summary::mean(xs);
        let sd = summary::sd(xs);
        ok &= report(
            &format!("1 ({algo})"),
            (mean - target_mean).abs() < 0.02 && (sd - target_sd).abs() < 0.02,
            &format!(
                "mean {mean:.4} vs {target_mean:.4}, sd {sd:.4} vs {target_sd:.4} (tol 0.02)"
            ),
        );
    }
    ok &= within_budget("1 (runtime)", started, 30);
    assert!(ok);
}

// -------------------------------------------------------------------------
// Criterion 2: the likelihood-argmax route agrees with the KL-argmin route
// on 100 randomized finite-support instances, and the mixture alternative
// picks a different index on the point-mass counterexample.
// -------------------------------------------------------------------------

struct BernoulliDirect;

impl Model for BernoulliDirect {
    type Obs = Vec<f64>;
    fn dim(&self) -> usize {
        1
    }
    fn param_names(&self) -> Vec<String> {
        vec!["p".into()]
    }
    fn transforms(&self) -> Vec<Transform> {
        vec![Transform::Identity]
    }
    fn log_prior<S: Scalar>(&self, _x: &[S]) -> S {
        S::from_f64(0.0)
    }
    fn log_cond<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S {
        bernoulli_lpmf(y[0], x[0])
    }
}

struct NormalLoc;

impl Model for NormalLoc {
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
    fn log_prior<S: Scalar>(&self, _x: &[S]) -> S {
        S::from_f64(0.0)
    }
    fn log_cond<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S {
        normal_lpdf(y[0], x[0], S::from_f64(1.0))
    }
}

struct Categorical3;

impl Model for Categorical3 {
    type Obs = Vec<f64>;
    fn dim(&self) -> usize {
        3
    }
    fn param_names(&self) -> Vec<String> {
        vec!["p0".into(), "p1".into(), "p2".into()]
    }
    fn transforms(&self) -> Vec<Transform> {
        vec![Transform::Identity; 3]
    }
    fn log_prior<S: Scalar>(&self, _x: &[S]) -> S {
        S::from_f64(0.0)
    }
    fn log_cond<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S {
        x[y[0] as usize].ln()
    }
}

/// Finite-support source with explicit atom masses.
struct WeightedAtoms(Vec<(Vec<f64>, f64)>);

impl ObservationSource for WeightedAtoms {
    type Obs = Vec<f64>;
    fn sample(&self, rng: &mut RandomSource) -> Vec<f64> {
        let u = rng.next_f64();
        let mut acc = 0.0;
        for (atom, mass) in &self.0 {
            acc += mass;
            if u < acc {
                return atom.clone();
            }
        }
        self.0.last().unwrap().0.clone()
    }
    fn support(&self) -> Option<Box<dyn Iterator<Item = (Vec<f64>, f64)> + '_>> {
        Some(Box::new(self.0.iter().cloned()))
    }
}

#[test]
fn acceptance_02_argmax_consistency() {
    let started = std::time::Instant::now();
    let mut rng = RandomSource::new(2001);
    let mut agreements = 0;
    for case in 0..100 {
        let (amax, akl) = match case % 3 {
            0 => {
                let q = 0.05 + 0.9 * rng.next_f64();
                let d = ObservedDistribution::Parametric(DistSpec::bernoulli(q).unwrap());
                let grid: Vec<Vec<f64>> = (1..20).map(|i| vec![i as f64 / 20.0]).collect();
                kl_argmax_check(&BernoulliDirect, &grid, &d).unwrap()
            }
            1 => {
                let n = 3 + (rng.next_f64() * 8.0) as usize;
                let samples: Vec<f64> = (0..n).map(|_| 4.0 * (rng.next_f64() - 0.5)).collect();
                let d = ObservedDistribution::empirical_scalar(samples).unwrap();
                let grid: Vec<Vec<f64>> =
                    (0..25).map(|i| vec![-3.0 + 6.0 * i as f64 / 24.0]).collect();
                kl_argmax_check(&NormalLoc, &grid, &d).unwrap()
            }
            _ => {
                let raw: Vec<f64> = (0..3).map(|_| 0.1 + rng.next_f64()).collect();
                let total: f64 = raw.iter().sum();
                let q: Vec<f64> = raw.iter().map(|v| v / total).collect();
                let atoms: Vec<(Vec<f64>, f64)> =
                    q.iter().enumerate().map(|(i, &m)| (vec![i as f64], m)).collect();
                let d = WeightedAtoms(atoms);
                let grid: Vec<Vec<f64>> = (0..12)
                    .map(|_| {
                        let raw: Vec<f64> = (0..3).map(|_| 0.05 + rng.next_f64()).collect();
                        let t: f64 = raw.iter().sum();
                        raw.iter().map(|v| v / t).collect()
                    })
                    .collect();
                kl_argmax_check(&Categorical3, &grid, &d).unwrap()
            }
        };
        if amax == akl {
            agreements += 1;
        }
    }
    let mut ok = report(
        "2 (agreement)",
        agreements == 100,
        &format!("{agreements}/100 randomized instances agree"),
    );

    // The counterexample: a point mass at the mode of q wins under the
    // mixture alternative while the geometric mean prefers the exact match.
    let q = [0.5, 0.3, 0.2];
    let atoms: Vec<(Vec<f64>, f64)> =
        q.iter().enumerate().map(|(i, &m)| (vec![i as f64], m)).collect();
    let d = WeightedAtoms(atoms);
    let grid = vec![vec![0.5, 0.3, 0.2], vec![1.0, 0.0, 0.0]];
    let amax = argmax_stochastic_loglik(&Categorical3, &grid, &d).unwrap();
    let akl = argmin_kl(&Categorical3, &grid, &d).unwrap();
    let ap1 = argmax_p1(&Categorical3, &grid, &d).unwrap();
    ok &= report(
        "2 (counterexample)",
        amax == 0 && akl == 0 && ap1 == 1,
        &format!("argmax {amax}, argmin-KL {akl}, mixture-argmax {ap1}"),
    );
    ok &= within_budget("2 (runtime)", started, 10);
    assert!(ok);
}

// -------------------------------------------------------------------------
// Criterion 3: conditioning on a point mass equals the deterministic
// log-conditional bit-for-bit on 1000 randomized (model, x, y0) triples.
// -------------------------------------------------------------------------
#[test]
fn acceptance_03_dirac_reduction() {
    let mut rng = RandomSource::new(3001);
    let mut mismatches = 0;
    for case in 0..1000 {
        let (lhs, rhs) = match case % 4 {
            0 => {
                let model = GaussianMeanModel {
                    prior_mean: 2.0 * (rng.next_f64() - 0.5),
                    prior_sd: 0.5 + rng.next_f64(),
                    obs_sd: 0.5 + rng.next_f64(),
                };
                let x = vec![4.0 * (rng.next_f64() - 0.5)];
                let y = vec![6.0 * (rng.next_f64() - 0.5)];
                let d = ObservedDistribution::Dirac(y.clone());
                (
                    exact_stochastic_loglik(&model, &x, &d).unwrap(),
                    model.log_cond(&x, &y),
                )
            }
            1 => {
                let model = BetaBernoulliModel::flat();
                let x = vec![6.0 * (rng.next_f64() - 0.5)];
                let y = vec![(rng.next_f64() < 0.5) as u8 as f64];
                let d = ObservedDistribution::Dirac(y.clone());
                (
                    exact_stochastic_loglik(&model, &x, &d).unwrap(),
                    model.log_cond(&x, &y),
                )
            }
            2 => {
                let model = CommuteModel::new(CommuteVariant::Stochastic);
                let x = vec![
                    4.0 * (rng.next_f64() - 0.5),
                    4.0 * (rng.next_f64() - 0.5),
                    4.0 * (rng.next_f64() - 0.5),
                ];
                let y = vec![(rng.next_f64() < 0.3) as u8 as f64, 10.0 + 60.0 * rng.next_f64()];
                let d = ObservedDistribution::Dirac(y.clone());
                (
                    exact_stochastic_loglik(&model, &x, &d).unwrap(),
                    model.log_cond(&x, &y),
                )
            }
            _ => {
                let model = NyPopuModel::new(sample_inputs(1).unwrap().0);
                let x = vec![9.0 + 2.0 * rng.next_f64(), 20.0 + 6.0 * rng.next_f64()];
                let y = vec![100.0 + 30_000.0 * rng.next_f64()];
                let d = ObservedDistribution::Dirac(y.clone());
                (
                    exact_stochastic_loglik(&model, &x, &d).unwrap(),
                    model.log_cond(&x, &y),
                )
            }
        };
        if lhs.to_bits() != rhs.to_bits() {
            mismatches += 1;
        }
    }
    let ok = report(
        "3",
        mismatches == 0,
        &format!("{mismatches}/1000 triples differ bit-for-bit"),
    );
    assert!(ok);
}

// -------------------------------------------------------------------------
// Criterion 4: normalization probe. The fixed-variance location family's
// running integral plateaus; adding a scale coordinate on a log grid makes
// the integral grow without plateau as the grid extends by two decades each
// side.
// -------------------------------------------------------------------------
#[test]
fn acceptance_04_normalization_probe() {
    let started = std::time::Instant::now();
    let x = [0.0];
    // (a) Normal(theta, 1): plateau within 1e-3.
    let theta_grid: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.05).collect();
    let y_grid: Vec<f64> = (-520..=520).map(|i| i as f64 * 0.05).collect();
    let run = normalization_probe(
        &NormalLoc,
        &x,
        |theta| DistSpec::normal(theta, 1.0).unwrap(),
        &theta_grid,
        Some(&y_grid),
    )
    .unwrap();
    let last = *run.last().unwrap();
    let at_15 = run[theta_grid.iter().position(|&t| t >= 15.0).unwrap()];
    let mut ok = report(
        "4 (location family)",
        (last - at_15).abs() < 1e-3 && last > 0.0,
        &format!("running integral {at_15:.6} at [-20,15] vs {last:.6} at [-20,20]"),
    );

    // (b) (theta, sigma) family on a log-spaced sigma grid: integrals over
    // [0.1/10^k, 10*10^k] for k = 0, 1, 2 keep growing.
    let inner = |sigma: f64| -> f64 {
        // log of the theta-integral of exp(E_{N(theta, sigma)}[log p(y|x)])
        let thetas: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.05).collect();
        let logliks: Vec<f64> = thetas
            .iter()
            .map(|&theta| {
                let spec = DistSpec::normal(theta, sigma).unwrap();
                let lo = theta - 8.0 * sigma;
                let span = 16.0 * sigma;
                let ys: Vec<f64> = (0..=400).map(|i| lo + span * i as f64 / 400.0).collect();
                expected_log_cond_quadrature(&NormalLoc, &x, &spec, &ys)
            })
            .collect();
        let integral = *running_normalization_integral(&thetas, &logliks)
            .last()
            .unwrap();
        integral.ln()
    };
    let mut integrals = Vec::new();
    for k in 0..3 {
        let lo = 0.1 / 10f64.powi(k);
        let hi = 10.0 * 10f64.powi(k);
        let points = 12 * (2 + 2 * k as usize);
        let ln_sigmas: Vec<f64> = (0..=points)
            .map(|i| lo.ln() + (hi.ln() - lo.ln()) * i as f64 / points as f64)
            .collect();
        let log_inner: Vec<f64> = ln_sigmas.iter().map(|&ls| inner(ls.exp())).collect();
        let total = *running_normalization_integral(&ln_sigmas, &log_inner)
            .last()
            .unwrap();
        integrals.push(total);
    }
    ok &= report(
        "4 (scale family)",
        integrals[0] < integrals[1] - 1.0 && integrals[1] < integrals[2] - 1.0,
        &format!(
            "integrals {:.3} -> {:.3} -> {:.3} as the grid gains a decade each side",
            integrals[0], integrals[1], integrals[2]
        ),
    );
    ok &= within_budget("4 (runtime)", started, 60);
    assert!(ok);
}

// -------------------------------------------------------------------------
// Criterion 5: bias adjustment. With Normal(mu0, sigma0^2) log-likelihood
// draws, the mean of exp(m - s^2/2N) over 1e4 replications is within 1% of
// exp(mu0) for N in {10, 100}.
// -------------------------------------------------------------------------
#[test]
fn acceptance_05_bias_adjustment() {
    let mu0 = 0.3;
    let sigma0 = 1.0;
    let spec = DistSpec::normal(mu0, sigma0).unwrap();
    let mut rng = RandomSource::new(5001);
    let mut ok = true;
    for &n in &[10u32, 100] {
        let reps = 10_000;
        let mut sum = 0.0;
        for _ in 0..reps {
            let draws: Vec<f64> = (0..n).map(|_| spec.sample(&mut rng)).collect();
            let m = summary::mean(&draws);
            let s2 = summary::sd(&draws).powi(2);
            let est = LogLikEstimate {
                m,
                s2,
                n,
                scale: 1.0 / n as f64,
                seed: 0,
            };
            sum += bias_adjusted_lik(&est).unwrap();
        }
        let mean = sum / reps as f64;
        let target = mu0.exp();
        let rel = (mean - target).abs() / target;
        ok &= report(
            &format!("5 (N={n})"),
            rel < 0.01,
            &format!("mean bias-adjusted estimate {mean:.5} vs exp(mu0) {target:.5} (rel {rel:.4})"),
        );
    }
    assert!(ok);
}

// -------------------------------------------------------------------------
// Criterion 6: gradient stack. Finite differences verify the analytic
// gradient at 100 random points for every differentiable shipped model,
// and the averaged single-draw gradient estimate matches the exact-sum
// gradient on finite-support fixtures.
// -------------------------------------------------------------------------
#[test]
fn acceptance_06_gradient_stack() {
    let mut rng = RandomSource::new(6001);
    let golden = simulate_commute(
        GOLDEN_DAYS,
        GOLDEN_PARAMS,
        false,
        &mut RandomSource::new(GOLDEN_SEED),
    );
    let mut ok = true;

    let mut check = |name: &str, worst: f64| {
        ok &= report(
            &format!("6 (fd {name})"),
            worst < 1e-4,
            &format!("max |analytic - central difference| = {worst:.2e} over 100 points"),
        );
    };

    {
        let model = BetaBernoulliModel::flat();
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x = vec![6.0 * (rng.next_f64() - 0.5)];
            let y = vec![(rng.next_f64() < 0.5) as u8 as f64];
            worst = worst.max(finite_difference_check(&model, &x, &y, 1e-5));
        }
        check("beta-bernoulli", worst);
    }
    {
        let model = GaussianMeanModel {
            prior_mean: 0.5,
            prior_sd: 1.5,
            obs_sd: 0.8,
        };
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x = vec![6.0 * (rng.next_f64() - 0.5)];
            let y = vec![4.0 * (rng.next_f64() - 0.5)];
            worst = worst.max(finite_difference_check(&model, &x, &y, 1e-5));
        }
        check("gaussian", worst);
    }
    for variant in [
        CommuteVariant::Deterministic,
        CommuteVariant::Averaged,
        CommuteVariant::Stochastic,
        CommuteVariant::Intensity,
    ] {
        let model = CommuteModel::new(variant);
        let obs: Vec<f64> = match variant {
            CommuteVariant::Deterministic | CommuteVariant::Averaged => golden.paired_flat(),
            CommuteVariant::Stochastic => vec![1.0, 42.0],
            CommuteVariant::Intensity => vec![1.0, 0.6, 42.0],
        };
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| 5.0 * (rng.next_f64() - 0.5)).collect();
            worst = worst.max(finite_difference_check(&model, &x, &obs, 1e-5));
        }
        check(&format!("commute {variant:?}").to_lowercase(), worst);
    }
    for sample in [1u8, 2] {
        let model = NyPopuModel::new(sample_inputs(sample).unwrap().0);
        let y = vec![2081.0, 164.0, 25_130.0];
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let x = vec![9.0 + 2.5 * rng.next_f64(), 20.0 + 6.0 * rng.next_f64()];
            worst = worst.max(finite_difference_check(&model, &x, &y, 1e-5));
        }
        check(&format!("nypopu sample {sample}"), worst);
    }

    // Averaged single-draw gradients vs the exact-sum gradient, on the
    // Bernoulli fixture and on the commute product fixture.
    {
        let d = ObservedDistribution::Parametric(DistSpec::bernoulli(0.6).unwrap());
        let model = BetaBernoulliModel::flat();
        let t = [0.4];
        let h = 1e-5;
        let exact_grad = {
            let f = |v: f64| {
                model.log_prior(&[v]) + exact_stochastic_loglik(&model, &[v], &d).unwrap()
            };
            (f(t[0] + h) - f(t[0] - h)) / (2.0 * h)
        };
        let n = 100_000;
        let grads: Vec<f64> = (0..n)
            .map(|_| estimate_grad_loglik_scaled(&model, &t, &d, 1.0, &mut rng)[0])
            .collect();
        let mean = summary::mean(&grads);
        let se = summary::sd(&grads) / (n as f64).sqrt();
        ok &= report(
            "6 (mc gradient, bernoulli)",
            (mean - exact_grad).abs() < 3.0 * se,
            &format!("mc mean {mean:.5} vs exact {exact_grad:.5} (3se {:.5})", 3.0 * se),
        );
    }
    {
        let model = CommuteModel::new(CommuteVariant::Stochastic);
        let (d, k) = model.conditioning(&golden).unwrap();
        let t = model.unconstrain(&[0.3, 0.7, 0.2]);
        let h = 1e-5;
        let mut exact_grad = Vec::new();
        for j in 0..3 {
            let f = |v: f64| {
                let mut point = t.clone();
                point[j] = v;
                model.log_prior(&point)
                    + k * exact_stochastic_loglik(&model, &point, &d).unwrap()
            };
            exact_grad.push((f(t[j] + h) - f(t[j] - h)) / (2.0 * h));
        }
        let n = 200_000;
        let mut sums = [0.0; 3];
        let mut sq = [0.0; 3];
        for _ in 0..n {
            let g = estimate_grad_loglik_scaled(&model, &t, &d, k, &mut rng);
            for j in 0..3 {
                sums[j] += g[j];
                sq[j] += g[j] * g[j];
            }
        }
        let mut pass = true;
        let mut detail = String::new();
        for j in 0..3 {
            let mean = sums[j] / n as f64;
            let var = sq[j] / n as f64 - mean * mean;
            let se = (var / n as f64).sqrt();
            pass &= (mean - exact_grad[j]).abs() < 3.0 * se;
            detail.push_str(&format!(
                "[{j}] {mean:.4} vs {:.4} (3se {:.4}) ",
                exact_grad[j],
                3.0 * se
            ));
        }
        ok &= report("6 (mc gradient, commute)", pass, detail.trim());
    }
    assert!(ok);
}

// -------------------------------------------------------------------------
// Criterion 7: commute study on the golden 30-day dataset.
// -------------------------------------------------------------------------
#[test]
fn acceptance_07_commute_study() {
    let started = std::time::Instant::now();
    let data = simulate_commute(
        GOLDEN_DAYS,
        GOLDEN_PARAMS,
        false,
        &mut RandomSource::new(GOLDEN_SEED),
    );
    let run = |variant: CommuteVariant, seed: u64| -> (Vec<f64>, Vec<f64>) {
        let model = CommuteModel::new(variant);
        let (d, k) = model.conditioning(&data).unwrap();
        let cfg = SghmcConfig {
            draws: 10_000,
            thin: 10,
            burn_in: Some(4000),
            step_size: 0.08,
            friction: 2.5,
            leapfrog: 10,
            repetitions: k,
            grad_draws: if k > 1.0 { 16 } else { 1 },
            ..SghmcConfig::default()
        };
        let out = sghmc(&model, &d, &cfg, &mut RandomSource::new(seed)).unwrap();
        let pts = out
            .samples
            .iter()
            .map(|s| model.constrain(&s.x.0)[1])
            .collect();
        let pfs = out
            .samples
            .iter()
            .map(|s| model.constrain(&s.x.0)[2])
            .collect();
        (pts, pfs)
    };
    let (avg_t, avg_f) = run(CommuteVariant::Averaged, 7001);
    let (sto_t, sto_f) = run(CommuteVariant::Stochastic, 7002);
    let (det_t, det_f) = run(CommuteVariant::Deterministic, 7003);
    let (int_t, _) = run(CommuteVariant::Intensity, 7004);

    let ha = summary::histogram2d(&avg_t, &avg_f, 0.0, 1.0, 0.0, 1.0, 15);
    let hs = summary::histogram2d(&sto_t, &sto_f, 0.0, 1.0, 0.0, 1.0, 15);
    let tv = summary::total_variation(&ha, &hs);
    let mut ok = report(
        "7a",
        tv < 0.07,
        &format!("TV(averaged, stochastic) = {tv:.4} on a 15x15 grid (bound 0.07)"),
    );

    let (dt, df) = (summary::sd(&det_t), summary::sd(&det_f));
    let (st, sf) = (summary::sd(&sto_t), summary::sd(&sto_f));
    ok &= report(
        "7b",
        dt < st && df < sf,
        &format!("deterministic sds (p_t {dt:.3}, p_f {df:.3}) vs stochastic ({st:.3}, {sf:.3})"),
    );

    let it = summary::sd(&int_t);
    ok &= report(
        "7c",
        it > st,
        &format!("intensity p_t sd {it:.3} vs stochastic {st:.3}"),
    );
    ok &= within_budget("7 (runtime)", started, 300);
    assert!(ok);
}

// -------------------------------------------------------------------------
// Criterion 8: population study. Predictive 95% intervals contain the true
// total and match the reference intervals within 30% per endpoint.
// -------------------------------------------------------------------------
#[test]
fn acceptance_08_population_study() {
    let started = std::time::Instant::now();
    let mut ok = true;
    let windows = [(1u8, (9.6e6, 17.2e6)), (2u8, (12.1e6, 28.1e6))];
    for (sample, (ref_lo, ref_hi)) in windows {
        let (summary_row, quantiles) = sample_inputs(sample).unwrap();
        let (model, d, k) = nypopu_model(summary_row, quantiles).unwrap();
        let cfg = SghmcConfig {
            draws: 10_000,
            thin: 4,
            step_size: 0.02,
            friction: 3.0,
            leapfrog: 10,
            repetitions: k,
            grad_draws: 32,
            init: Some(model.init()),
            ..SghmcConfig::default()
        };
        let out = sghmc(&model, &d, &cfg, &mut RandomSource::new(8000 + sample as u64)).unwrap();
        let mut rng = RandomSource::new(8100 + sample as u64);
        let totals =
            posterior_predictive_total(&model, &out.samples, TOWNS, 10_000, &mut rng);
        let (lo, hi) = predictive_interval(&totals);
        let contains = lo <= TRUE_TOTAL && TRUE_TOTAL <= hi;
        let lo_ok = (lo - ref_lo).abs() / ref_lo < 0.30;
        let hi_ok = (hi - ref_hi).abs() / ref_hi < 0.30;
        ok &= report(
            &format!("8 (sample {sample})"),
            contains && lo_ok && hi_ok,
            &format!(
                "interval [{lo:.3e}, {hi:.3e}] vs reference [{ref_lo:.3e}, {ref_hi:.3e}], contains true total: {contains}"
            ),
        );
    }
    ok &= within_budget("8 (runtime)", started, 300);
    assert!(ok);
}

// -------------------------------------------------------------------------
// Criterion 9: sailing study, lake 25 with the benchmark cost table.
// -------------------------------------------------------------------------
#[test]
fn acceptance_09_sailing_study() {
    let started = std::time::Instant::now();
    let lake = 25usize;
    let params = SailingParams::default();
    let cap = default_cap(lake);
    let temperature = 0.1;

    let posterior = |temp: f64, seed: u64| -> Vec<f64> {
        let model = SailingModel::new(lake, temp);
        let cfg = PmmhConfig {
            draws: 10_000,
            n: 16,
            proposal_scale: 0.8,
            ..PmmhConfig::default()
        };
        let out = pmmh(&model, &WindRandomWalk, &cfg, &mut RandomSource::new(seed)).unwrap();
        out.samples
            .iter()
            .map(|s| model.constrain(&s.x.0)[0])
            .collect()
    };

    let ucs_hi = posterior(temperature, 9001);
    let ucs_lo = posterior(temperature / 4.0, 9002);
    let mode_hi = summary::mode_from_histogram(&ucs_hi, 1.0, 8.0, 35);
    let mode_lo = summary::mode_from_histogram(&ucs_lo, 1.0, 8.0, 35);

    // (a) The reference result for this benchmark puts the optimal unit
    // cost at roughly 3.5-3.9; the window below widens it for Monte Carlo
    // noise. Under the benchmark cost table with the tacking delay charged,
    // the expected travel cost of the parametric policy decreases
    // monotonically over the whole feasible range, so the posterior mode
    // sits near the upper end instead; the band reappears exactly when the
    // delay is removed from the dynamics. See the README's sailing caveat.
    let mut ok = report(
        "9a",
        (3.3..=4.1).contains(&mode_hi),
        &format!("posterior mode of unit-cost = {mode_hi:.2} (window [3.3, 4.1])"),
    );

    let mut rng = RandomSource::new(9100);
    let table = value_iteration(lake, &params, 1e-9, 100_000).unwrap();
    let optimal = evaluate_policy(&table, lake, &params, 10_000, &mut rng, cap).unwrap();
    let greedy = evaluate_policy(&GreedyPolicy, lake, &params, 10_000, &mut rng, cap).unwrap();
    let inferred = evaluate_policy(
        &ParametricPolicy { unit_cost: mode_hi },
        lake,
        &params,
        10_000,
        &mut rng,
        cap,
    )
    .unwrap();
    ok &= report(
        "9b",
        optimal.ci_hi < inferred.ci_lo && inferred.ci_hi < greedy.ci_lo,
        &format!(
            "optimal [{:.2}, {:.2}] < inferred [{:.2}, {:.2}] < greedy [{:.2}, {:.2}]",
            optimal.ci_lo, optimal.ci_hi, inferred.ci_lo, inferred.ci_hi, greedy.ci_lo, greedy.ci_hi
        ),
    );

    let inferred_cold = evaluate_policy(
        &ParametricPolicy { unit_cost: mode_lo },
        lake,
        &params,
        10_000,
        &mut rng,
        cap,
    )
    .unwrap();
    let gap_hi = inferred.mean - optimal.mean;
    let gap_lo = inferred_cold.mean - optimal.mean;
    let slack = (inferred.ci_hi - inferred.ci_lo) / 2.0;
    ok &= report(
        "9c",
        gap_lo <= gap_hi + slack,
        &format!(
            "cost gap to optimum: {gap_lo:.2} at T/4 vs {gap_hi:.2} at T (slack {slack:.2})"
        ),
    );
    ok &= within_budget("9 (runtime)", started, 900);
    assert!(
        ok,
        "criterion 9a is expected to fail under the benchmark cost table; see the README's sailing caveat"
    );
}
