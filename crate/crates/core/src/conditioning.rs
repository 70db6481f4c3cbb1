//! Conditioning on observed distributions.
//!
//! A model is conditioned on a distribution `D` (density `q`) rather than a
//! value; the unnormalized conditional density of the observation is
//!
//! ```text
//! p(y ~ D | x) = exp( E_{y ~ D} [ log p(y|x) ] )
//! ```
//!
//! For finite-support `D` the expectation is an exact sum; sampled `D` is
//! handled by the estimators module. Conditioning on `Dirac(y0)` recovers
//! conventional conditioning on the value `y0`.
//!
//! Also here: the mixture alternative `p1(y ~ D|x) = E_q[p(y|x)]`, the power
//! mean family interpolating between the two, the argmax/KL consistency
//! check, and a quadrature probe of the normalization constant over a
//! parametric family of conditioning distributions.

use crate::dist::DistSpec;
use crate::model::Model;
use crate::rng::RandomSource;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CondError {
    #[error("observed distribution has no finite support; use the Monte Carlo estimator")]
    UnsupportedExact,
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("quadrature grid required for a continuous conditioning family")]
    QuadratureGridRequired,
}

/// Anything observations can be drawn from in order to condition on it.
///
/// `support` yields `(atom, mass)` pairs when the distribution is finite,
/// enabling exact evaluation; product supports are enumerated lazily.
pub trait ObservationSource {
    type Obs;

    fn sample(&self, rng: &mut RandomSource) -> Self::Obs;

    fn support(&self) -> Option<Box<dyn Iterator<Item = (Self::Obs, f64)> + '_>> {
        None
    }
}

/// The conditioning object `D` for vector-valued observations: empirical
/// sample sets, products of independently observed marginal sets, a
/// parametric sampler, or a point mass.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservedDistribution {
    /// Uniform mixture over observed sample vectors.
    Empirical(Vec<Vec<f64>>),
    /// Product of independently observed marginal sample sets; a draw picks
    /// one atom per component and concatenates them. The product support is
    /// enumerated lazily, never materialized.
    ProductEmpirical(Vec<Vec<Vec<f64>>>),
    /// Closed-form scalar sampler.
    Parametric(DistSpec),
    /// Point mass: conditioning on a value.
    Dirac(Vec<f64>),
}

impl ObservedDistribution {
    pub fn empirical(samples: Vec<Vec<f64>>) -> Result<Self, CondError> {
        if samples.is_empty() {
            return Err(CondError::Empty("empirical sample set"));
        }
        Ok(ObservedDistribution::Empirical(samples))
    }

    pub fn empirical_scalar(samples: Vec<f64>) -> Result<Self, CondError> {
        Self::empirical(samples.into_iter().map(|v| vec![v]).collect())
    }

    pub fn product_empirical(components: Vec<Vec<Vec<f64>>>) -> Result<Self, CondError> {
        if components.is_empty() || components.iter().any(|c| c.is_empty()) {
            return Err(CondError::Empty("product-empirical component"));
        }
        Ok(ObservedDistribution::ProductEmpirical(components))
    }

    pub fn dirac(value: Vec<f64>) -> Self {
        ObservedDistribution::Dirac(value)
    }

    pub fn dirac_scalar(value: f64) -> Self {
        ObservedDistribution::Dirac(vec![value])
    }
}

impl ObservationSource for ObservedDistribution {
    type Obs = Vec<f64>;

    fn sample(&self, rng: &mut RandomSource) -> Vec<f64> {
        match self {
            ObservedDistribution::Empirical(samples) => {
                let i = (rng.next_f64() * samples.len() as f64) as usize;
                samples[i.min(samples.len() - 1)].clone()
            }
            ObservedDistribution::ProductEmpirical(components) => {
                let mut out = Vec::new();
                for set in components {
                    let i = (rng.next_f64() * set.len() as f64) as usize;
                    out.extend_from_slice(&set[i.min(set.len() - 1)]);
                }
                out
            }
            ObservedDistribution::Parametric(spec) => vec![spec.sample(rng)],
            ObservedDistribution::Dirac(value) => value.clone(),
        }
    }

    fn support(&self) -> Option<Box<dyn Iterator<Item = (Vec<f64>, f64)> + '_>> {
        match self {
            ObservedDistribution::Empirical(samples) => {
                let w = 1.0 / samples.len() as f64;
                Some(Box::new(samples.iter().map(move |s| (s.clone(), w))))
            }
            ObservedDistribution::ProductEmpirical(components) => {
                Some(Box::new(ProductSupport::new(components)))
            }
            ObservedDistribution::Parametric(spec) => {
                let atoms = spec.support()?;
                Some(Box::new(atoms.into_iter().map(|(v, q)| (vec![v], q))))
            }
            ObservedDistribution::Dirac(value) => {
                Some(Box::new(std::iter::once((value.clone(), 1.0))))
            }
        }
    }
}

/// Odometer over the Cartesian product of component sets.
struct ProductSupport<'a> {
    components: &'a [Vec<Vec<f64>>],
    index: Vec<usize>,
    mass: f64,
    done: bool,
}

impl<'a> ProductSupport<'a> {
    fn new(components: &'a [Vec<Vec<f64>>]) -> Self {
        let mass = components.iter().map(|c| 1.0 / c.len() as f64).product();
        ProductSupport {
            components,
            index: vec![0; components.len()],
            mass,
            done: components.is_empty(),
        }
    }
}

impl Iterator for ProductSupport<'_> {
    type Item = (Vec<f64>, f64);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut atom = Vec::new();
        for (set, &i) in self.components.iter().zip(self.index.iter()) {
            atom.extend_from_slice(&set[i]);
        }
        // advance the odometer
        let mut k = self.components.len();
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            self.index[k] += 1;
            if self.index[k] < self.components[k].len() {
                break;
            }
            self.index[k] = 0;
        }
        Some((atom, self.mass))
    }
}

/// log p(y ~ D | x) = sum_y q(y) log p(y|x), exactly, for finite-support D.
///
/// Atoms with q(y) = 0 contribute nothing (0 log 0 = 0); an atom with
/// q(y) > 0 and p(y|x) = 0 makes the result -inf. With `D = Dirac(y0)` the
/// result is `log p(y0|x)` bit-for-bit.
pub fn exact_stochastic_loglik<M, D>(model: &M, x: &[f64], d: &D) -> Result<f64, CondError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    let support = d.support().ok_or(CondError::UnsupportedExact)?;
    let mut acc = 0.0;
    for (y, q) in support {
        if q == 0.0 {
            continue;
        }
        let lp = model.log_cond(x, &y);
        if lp == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        acc += q * lp;
    }
    Ok(acc)
}

/// The mixture alternative: log p1(y ~ D|x) = log sum_y q(y) p(y|x).
pub fn alternative_loglik_p1<M, D>(model: &M, x: &[f64], d: &D) -> Result<f64, CondError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    power_mean_loglik(model, x, d, 1.0)
}

/// Power mean family: (1/alpha) log sum_y q(y) p(y|x)^alpha for alpha != 0;
/// alpha = 0 is the geometric-mean case handled by
/// [`exact_stochastic_loglik`]. Alpha = 1 recovers the mixture alternative.
pub fn power_mean_loglik<M, D>(model: &M, x: &[f64], d: &D, alpha: f64) -> Result<f64, CondError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    if alpha == 0.0 {
        return exact_stochastic_loglik(model, x, d);
    }
    let support = d.support().ok_or(CondError::UnsupportedExact)?;
    let mut terms = Vec::new();
    for (y, q) in support {
        if q == 0.0 {
            continue;
        }
        terms.push(q.ln() + alpha * model.log_cond(x, &y));
    }
    if terms.is_empty() {
        return Err(CondError::Empty("support"));
    }
    Ok(log_sum_exp(&terms) / alpha)
}

fn log_sum_exp(zs: &[f64]) -> f64 {
    let hi = zs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if hi == f64::INFINITY {
        return f64::INFINITY;
    }
    hi + zs.iter().map(|z| (z - hi).exp()).sum::<f64>().ln()
}

/// Index of the grid point maximizing the stochastic-conditioning
/// log-likelihood (ties resolved to the first).
pub fn argmax_stochastic_loglik<M, D>(
    model: &M,
    grid: &[Vec<f64>],
    d: &D,
) -> Result<usize, CondError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    if grid.is_empty() {
        return Err(CondError::Empty("grid"));
    }
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, x) in grid.iter().enumerate() {
        let ll = exact_stochastic_loglik(model, x, d)?;
        if ll > best.1 {
            best = (i, ll);
        }
    }
    Ok(best.0)
}

/// Index maximizing the mixture alternative p1.
pub fn argmax_p1<M, D>(model: &M, grid: &[Vec<f64>], d: &D) -> Result<usize, CondError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    if grid.is_empty() {
        return Err(CondError::Empty("grid"));
    }
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, x) in grid.iter().enumerate() {
        let ll = alternative_loglik_p1(model, x, d)?;
        if ll > best.1 {
            best = (i, ll);
        }
    }
    Ok(best.0)
}

/// Index minimizing KL(q || p(.|x)), computed directly from
/// sum_y q(y) (ln q(y) - ln p(y|x)) with the 0 log 0 = 0 convention.
pub fn argmin_kl<M, D>(model: &M, grid: &[Vec<f64>], d: &D) -> Result<usize, CondError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    if grid.is_empty() {
        return Err(CondError::Empty("grid"));
    }
    let mut best = (0usize, f64::INFINITY);
    for (i, x) in grid.iter().enumerate() {
        let support = d.support().ok_or(CondError::UnsupportedExact)?;
        let mut kl = 0.0;
        for (y, q) in support {
            if q == 0.0 {
                continue;
            }
            let lp = model.log_cond(x, &y);
            kl += q * (q.ln() - lp);
        }
        if kl < best.1 {
            best = (i, kl);
        }
    }
    Ok(best.0)
}

/// Returns `(argmax-loglik index, argmin-KL index)`; the two routes agree
/// because the log-likelihood is the negative KL up to a constant in x.
pub fn kl_argmax_check<M, D>(
    model: &M,
    grid: &[Vec<f64>],
    d: &D,
) -> Result<(usize, usize), CondError>
where
    M: Model,
    D: ObservationSource<Obs = M::Obs>,
{
    Ok((
        argmax_stochastic_loglik(model, grid, d)?,
        argmin_kl(model, grid, d)?,
    ))
}

/// E_{y ~ D}[log p(y|x)] by trapezoid quadrature over `y_grid` for a
/// continuous conditioning density.
pub fn expected_log_cond_quadrature<M>(
    model: &M,
    x: &[f64],
    dist: &DistSpec,
    y_grid: &[f64],
) -> f64
where
    M: Model<Obs = Vec<f64>>,
{
    let mut total = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for &y in y_grid {
        let q = dist.log_pdf(y).exp();
        let f = if q == 0.0 {
            0.0
        } else {
            let lp = model.log_cond(x, &vec![y]);
            if lp == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            q * lp
        };
        if let Some((y0, f0)) = prev {
            total += 0.5 * (f + f0) * (y - y0);
        }
        prev = Some((y, f));
    }
    total
}

/// Stochastic-conditioning log-likelihood for a parametric `D`: exact when
/// the family has finite support, trapezoid quadrature otherwise.
pub fn stochastic_loglik_of_spec<M>(
    model: &M,
    x: &[f64],
    dist: &DistSpec,
    y_grid: Option<&[f64]>,
) -> Result<f64, CondError>
where
    M: Model<Obs = Vec<f64>>,
{
    let wrapped = ObservedDistribution::Parametric(dist.clone());
    match exact_stochastic_loglik(model, x, &wrapped) {
        Ok(v) => Ok(v),
        Err(CondError::UnsupportedExact) => {
            let grid = y_grid.ok_or(CondError::QuadratureGridRequired)?;
            Ok(expected_log_cond_quadrature(model, x, dist, grid))
        }
        Err(e) => Err(e),
    }
}

/// Running (cumulative trapezoid) integral of `exp(loglik)` over expanding
/// prefixes of `grid`. Element `k` integrates over `grid[0..=k]`; the first
/// element is zero.
pub fn running_normalization_integral(grid: &[f64], logliks: &[f64]) -> Vec<f64> {
    assert_eq!(grid.len(), logliks.len());
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    for i in 0..grid.len() {
        if i > 0 {
            let f0 = logliks[i - 1].exp();
            let f1 = logliks[i].exp();
            acc += 0.5 * (f0 + f1) * (grid[i] - grid[i - 1]);
        }
        out.push(acc);
    }
    out
}

/// Probes whether `p(y ~ D_theta | x)` has a finite normalization constant
/// over the family `theta -> D_theta`: the running integral of
/// `exp(log p(y ~ D_theta|x))` over the theta grid plateaus when it does.
pub fn normalization_probe<M, F>(
    model: &M,
    x: &[f64],
    family: F,
    theta_grid: &[f64],
    y_grid: Option<&[f64]>,
) -> Result<Vec<f64>, CondError>
where
    M: Model<Obs = Vec<f64>>,
    F: Fn(f64) -> DistSpec,
{
    let logliks = theta_grid
        .iter()
        .map(|&theta| stochastic_loglik_of_spec(model, x, &family(theta), y_grid))
        .collect::<Result<Vec<f64>, CondError>>()?;
    Ok(running_normalization_integral(theta_grid, &logliks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autodiff::Scalar;
    use crate::dist::{bernoulli_lpmf, normal_lpdf};
    use crate::model::Transform;

    /// Bernoulli likelihood with the success probability as the (natural
    /// space) parameter; prior plays no role in these tests.
    pub struct BernoulliDirect;

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

    #[test]
    fn bernoulli_conditioning_closed_form() {
        // E_{Bernoulli(0.6)}[log p(y|x=0.7)] = 0.6 ln 0.7 + 0.4 ln 0.3
        let d = ObservedDistribution::Parametric(DistSpec::bernoulli(0.6).unwrap());
        let ll = exact_stochastic_loglik(&BernoulliDirect, &[0.7], &d).unwrap();
        let expected = 0.6 * 0.7_f64.ln() + 0.4 * 0.3_f64.ln();
        assert!((ll - expected).abs() < 1e-14);
        assert!((ll - (-0.695_594_088_093_614)).abs() < 1e-12);
    }

    #[test]
    fn dirac_reduces_to_value_conditioning() {
        let d = ObservedDistribution::dirac_scalar(1.0);
        let ll = exact_stochastic_loglik(&BernoulliDirect, &[0.37], &d).unwrap();
        let direct = BernoulliDirect.log_cond(&[0.37], &vec![1.0]);
        assert_eq!(ll.to_bits(), direct.to_bits());
    }

    #[test]
    fn single_atom_empirical_is_dirac() {
        let d = ObservedDistribution::empirical_scalar(vec![0.0]).unwrap();
        let ll = exact_stochastic_loglik(&BernoulliDirect, &[0.25], &d).unwrap();
        assert!((ll - 0.75_f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn p1_mixture_value() {
        let d = ObservedDistribution::Parametric(DistSpec::bernoulli(0.6).unwrap());
        let ll = alternative_loglik_p1(&BernoulliDirect, &[0.7], &d).unwrap();
        assert!((ll - 0.54_f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn p1_on_dirac_coincides() {
        let d = ObservedDistribution::dirac_scalar(0.0);
        let a = exact_stochastic_loglik(&BernoulliDirect, &[0.3], &d).unwrap();
        let b = alternative_loglik_p1(&BernoulliDirect, &[0.3], &d).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn power_mean_limits() {
        let d = ObservedDistribution::Parametric(DistSpec::bernoulli(0.6).unwrap());
        let x = [0.7];
        let p1 = alternative_loglik_p1(&BernoulliDirect, &x, &d).unwrap();
        let pm1 = power_mean_loglik(&BernoulliDirect, &x, &d, 1.0).unwrap();
        assert_eq!(p1, pm1);
        let exact = exact_stochastic_loglik(&BernoulliDirect, &x, &d).unwrap();
        let near0 = power_mean_loglik(&BernoulliDirect, &x, &d, 1e-6).unwrap();
        assert!((near0 - exact).abs() < 1e-5);
        // alpha -> -inf approaches log min_y p(y|x) = ln 0.3
        let lo = power_mean_loglik(&BernoulliDirect, &x, &d, -1e6).unwrap();
        assert!((lo - 0.3_f64.ln()).abs() < 1e-4);
    }

    #[test]
    fn power_mean_monotone_in_alpha() {
        let d = ObservedDistribution::Parametric(DistSpec::bernoulli(0.35).unwrap());
        let x = [0.6];
        let alphas = [-8.0, -2.0, -0.5, 0.0, 0.5, 1.0, 3.0];
        let vals: Vec<f64> = alphas
            .iter()
            .map(|&a| power_mean_loglik(&BernoulliDirect, &x, &d, a).unwrap())
            .collect();
        for w in vals.windows(2) {
            assert!(w[0] <= w[1] + 1e-12, "{vals:?}");
        }
    }

    #[test]
    fn jensen_ordering() {
        let d = ObservedDistribution::Parametric(DistSpec::bernoulli(0.42).unwrap());
        for i in 1..10 {
            let x = [i as f64 / 10.0];
            let g = exact_stochastic_loglik(&BernoulliDirect, &x, &d).unwrap();
            let a = alternative_loglik_p1(&BernoulliDirect, &x, &d).unwrap();
            assert!(g <= a + 1e-12);
        }
    }

    #[test]
    fn kl_and_argmax_agree_on_grid() {
        let d = ObservedDistribution::Parametric(DistSpec::bernoulli(0.6).unwrap());
        let grid: Vec<Vec<f64>> = (1..10).map(|i| vec![i as f64 / 10.0]).collect();
        let (amax, akl) = kl_argmax_check(&BernoulliDirect, &grid, &d).unwrap();
        assert_eq!(amax, akl);
        assert_eq!(grid[amax], vec![0.6]);
    }

    #[test]
    fn dirac_grid_selects_nearest_mean() {
        let d = ObservedDistribution::dirac_scalar(1.3);
        let grid: Vec<Vec<f64>> = (-5..=5).map(|i| vec![i as f64 / 2.0]).collect();
        let (amax, akl) = kl_argmax_check(&NormalLoc, &grid, &d).unwrap();
        assert_eq!(amax, akl);
        assert_eq!(grid[amax], vec![1.5]);
    }

    /// Three-atom categorical model whose parameter is the whole mass
    /// vector; used for the argmax counterexample where the mixture
    /// alternative prefers a point mass at the mode of q.
    pub struct Categorical3;

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

    #[test]
    fn p1_counterexample_prefers_point_mass() {
        // q = (0.5, 0.3, 0.2); x* matches q, x-dagger is Dirac at argmax q.
        let q = [0.5, 0.3, 0.2];
        let atoms: Vec<(Vec<f64>, f64)> =
            q.iter().enumerate().map(|(i, &m)| (vec![i as f64], m)).collect();
        struct Weighted(Vec<(Vec<f64>, f64)>);
        impl ObservationSource for Weighted {
            type Obs = Vec<f64>;
            fn sample(&self, rng: &mut RandomSource) -> Vec<f64> {
                let u = rng.next_f64();
                let mut acc = 0.0;
                for (a, m) in &self.0 {
                    acc += m;
                    if u < acc {
                        return a.clone();
                    }
                }
                self.0.last().unwrap().0.clone()
            }
            fn support(&self) -> Option<Box<dyn Iterator<Item = (Vec<f64>, f64)> + '_>> {
                Some(Box::new(self.0.iter().cloned()))
            }
        }
        let d = Weighted(atoms);
        let grid = vec![vec![0.5, 0.3, 0.2], vec![1.0, 0.0, 0.0]];
        let amax = argmax_stochastic_loglik(&Categorical3, &grid, &d).unwrap();
        let akl = argmin_kl(&Categorical3, &grid, &d).unwrap();
        let ap1 = argmax_p1(&Categorical3, &grid, &d).unwrap();
        assert_eq!(amax, 0, "geometric-mean likelihood prefers the match to q");
        assert_eq!(akl, 0);
        assert_eq!(ap1, 1, "mixture alternative prefers the point mass");
        let p1_star = alternative_loglik_p1(&Categorical3, &grid[0], &d).unwrap();
        let p1_dag = alternative_loglik_p1(&Categorical3, &grid[1], &d).unwrap();
        assert!(p1_dag > p1_star);
    }

    #[test]
    fn product_support_is_lazy_and_complete() {
        let d = ObservedDistribution::product_empirical(vec![
            vec![vec![0.0], vec![1.0]],
            vec![vec![10.0], vec![20.0], vec![30.0]],
        ])
        .unwrap();
        let atoms: Vec<(Vec<f64>, f64)> = d.support().unwrap().collect();
        assert_eq!(atoms.len(), 6);
        for (a, m) in &atoms {
            assert_eq!(a.len(), 2);
            assert!((m - 1.0 / 6.0).abs() < 1e-15);
        }
        let first = &atoms[0].0;
        assert_eq!(first, &vec![0.0, 10.0]);
    }

    #[test]
    fn continuous_parametric_has_no_exact_path() {
        let d = ObservedDistribution::Parametric(DistSpec::normal(0.0, 1.0).unwrap());
        let err = exact_stochastic_loglik(&NormalLoc, &[0.0], &d);
        assert_eq!(err, Err(CondError::UnsupportedExact));
    }

    #[test]
    fn probe_fixed_variance_family_plateaus() {
        // E_{N(theta,1)}[log N(y; x, 1)] has a closed form; the quadrature
        // running integral over theta must converge to a constant.
        let x = [0.0];
        let theta_grid: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.05).collect();
        let y_grid: Vec<f64> = (-500..=500).map(|i| i as f64 * 0.05).collect();
        let run = normalization_probe(
            &NormalLoc,
            &x,
            |theta| DistSpec::normal(theta, 1.0).unwrap(),
            &theta_grid,
            Some(&y_grid),
        )
        .unwrap();
        let last = *run.last().unwrap();
        // plateau: extending from theta in [-15, 15] to [-20, 20] changes
        // nothing measurable
        let at_15 = run[theta_grid.iter().position(|&t| t >= 15.0).unwrap()];
        assert!((last - at_15).abs() < 1e-3, "{last} vs {at_15}");
        assert!(last > 0.0);
    }

    #[test]
    fn probe_dirac_family_integrates_to_one() {
        let x = [0.0];
        let theta_grid: Vec<f64> = (-240..=240).map(|i| i as f64 * 0.05).collect();
        let run = normalization_probe(
            &NormalLoc,
            &x,
            |theta| DistSpec::dirac(theta).unwrap(),
            &theta_grid,
            None,
        )
        .unwrap();
        let last = *run.last().unwrap();
        assert!((last - 1.0).abs() < 1e-3, "integral {last}");
    }
}
