//! The sailing problem: policy search cast as inference.
//!
//! A boat travels between opposite corners of a square lake, heading to one
//! of eight adjacent squares per step. The per-unit movement cost depends
//! on the angle between the heading and the wind (into the wind is
//! forbidden), diagonal legs cost sqrt(2) times the unit cost, and flipping
//! the tack adds a fixed delay. The wind follows a random walk over the
//! eight directions.
//!
//! Value iteration gives the non-parametric optimal policy. The parametric
//! policy steered by a single `unit-cost` scalar picks the leg minimizing
//! `leg cost + unit-cost * distance(next, goal)`; its posterior is defined
//! by a Boltzmann distribution over trajectories,
//! `exp(-travel-cost / (lake-size * temperature))`, conditioned
//! stochastically on the wind random walk.

use crate::autodiff::Scalar;
use crate::conditioning::ObservationSource;
use crate::model::{Model, Transform};
use crate::rng::RandomSource;

/// Grid headings, clockwise from north; odd indices are diagonals.
pub const DIRS: [(i64, i64); 8] = [
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
];

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Side of the boat the sail hangs off.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tack {
    Port,
    Starboard,
}

/// Relative angle between heading and wind, in 45-degree sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointOfSail {
    Into,
    Up,
    Cross,
    Down,
    Away,
}

/// MDP state: grid position, tack and wind direction (the direction the
/// wind blows from).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SailingState {
    pub position: (usize, usize),
    pub tack: Tack,
    pub wind: u8,
}

/// Cost and wind-walk parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SailingParams {
    /// Per-unit-distance costs for (into, up, cross, down, away).
    pub costs: [f64; 5],
    /// Additional cost when the tack flips.
    pub delay: f64,
    /// Wind random-walk probabilities (same, left, right).
    pub wind_probs: (f64, f64, f64),
}

impl Default for SailingParams {
    fn default() -> Self {
        SailingParams {
            costs: [f64::INFINITY, 4.0, 3.0, 2.0, 1.0],
            delay: 4.0,
            wind_probs: (0.4, 0.3, 0.3),
        }
    }
}

/// Relative sector `(heading - wind) mod 8`: 0 is dead into the wind,
/// 4 is dead downwind.
pub fn relative_sector(heading: u8, wind: u8) -> u8 {
    (heading + 8 - wind) % 8
}

pub fn point_of_sail(sector: u8) -> PointOfSail {
    match sector {
        0 => PointOfSail::Into,
        1 | 7 => PointOfSail::Up,
        2 | 6 => PointOfSail::Cross,
        3 | 5 => PointOfSail::Down,
        _ => PointOfSail::Away,
    }
}

/// Tack after sailing a leg: the sign of the relative angle, preserved on
/// the 0/180-degree axes.
pub fn leg_tack(sector: u8, current: Tack) -> Tack {
    match sector {
        1..=3 => Tack::Starboard,
        5..=7 => Tack::Port,
        _ => current,
    }
}

/// Cost of one leg: per-unit cost by point of sail, times the leg length
/// (sqrt(2) on diagonals), plus the tacking delay when the tack flips.
/// Sailing into the wind is infinitely costly.
pub fn sailing_cost(tack: Tack, leg: u8, wind: u8, params: &SailingParams) -> f64 {
    let sector = relative_sector(leg, wind);
    let unit = match point_of_sail(sector) {
        PointOfSail::Into => return f64::INFINITY,
        PointOfSail::Up => params.costs[1],
        PointOfSail::Cross => params.costs[2],
        PointOfSail::Down => params.costs[3],
        PointOfSail::Away => params.costs[4],
    };
    let length = if leg % 2 == 1 { SQRT_2 } else { 1.0 };
    let delay = if leg_tack(sector, tack) != tack {
        params.delay
    } else {
        0.0
    };
    unit * length + delay
}

/// One step of the wind random walk.
pub fn wind_step(wind: u8, params: &SailingParams, rng: &mut RandomSource) -> u8 {
    let (same, left, _) = params.wind_probs;
    let u = rng.next_f64();
    if u < same {
        wind
    } else if u < same + left {
        (wind + 7) % 8
    } else {
        (wind + 1) % 8
    }
}

/// A latent wind history: the full random walk regenerated on demand from
/// its seed, so a single draw serves rollouts of any length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindHistory {
    pub seed: u64,
}

/// Replaying walker over a wind history.
pub struct WindWalk {
    src: RandomSource,
}

impl WindWalk {
    pub fn from_seed(seed: u64) -> Self {
        WindWalk {
            src: RandomSource::new(seed),
        }
    }

    /// Initial wind direction, uniform over the eight sectors.
    pub fn initial(&mut self) -> u8 {
        (self.src.next_f64() * 8.0) as u8 % 8
    }

    pub fn step(&mut self, wind: u8, params: &SailingParams) -> u8 {
        wind_step(wind, params, &mut self.src)
    }
}

/// The conditioning object: fresh wind histories drawn as seeds.
#[derive(Debug, Clone, Copy, Default)]
pub struct WindRandomWalk;

impl ObservationSource for WindRandomWalk {
    type Obs = WindHistory;

    fn sample(&self, rng: &mut RandomSource) -> WindHistory {
        WindHistory {
            seed: rng.next_u64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SailingError {
    #[error("rollout exceeded {cap} steps at position {position:?} (unit cost {unit_cost})")]
    StepCap {
        cap: usize,
        position: (usize, usize),
        unit_cost: f64,
    },
    #[error("value iteration did not converge within {0} sweeps")]
    NoConvergence(usize),
}

/// A policy maps states to headings on a lake with the goal in the
/// top-right corner.
pub trait Policy {
    fn choose(&self, state: &SailingState, lake: usize, params: &SailingParams) -> u8;
}

fn in_lake(pos: (usize, usize), leg: u8, lake: usize) -> Option<(usize, usize)> {
    let (dx, dy) = DIRS[leg as usize];
    let nx = pos.0 as i64 + dx;
    let ny = pos.1 as i64 + dy;
    if nx < 0 || ny < 0 || nx >= lake as i64 || ny >= lake as i64 {
        None
    } else {
        Some((nx as usize, ny as usize))
    }
}

fn euclid(a: (usize, usize), b: (usize, usize)) -> f64 {
    let dx = a.0 as f64 - b.0 as f64;
    let dy = a.1 as f64 - b.1 as f64;
    (dx * dx + dy * dy).sqrt()
}

/// The parametric policy: minimize leg cost plus `unit_cost` times the
/// Euclidean distance from the next location to the goal. Ties resolve to
/// the smallest leg index; at most one of the eight legs is into the wind,
/// so a feasible leg always exists.
pub fn parametric_policy_leg(
    state: &SailingState,
    unit_cost: f64,
    lake: usize,
    params: &SailingParams,
) -> u8 {
    let goal = (lake - 1, lake - 1);
    let mut best = (u8::MAX, f64::INFINITY);
    for leg in 0..8u8 {
        let Some(next) = in_lake(state.position, leg, lake) else {
            continue;
        };
        let cost = sailing_cost(state.tack, leg, state.wind, params);
        if cost.is_infinite() {
            continue;
        }
        let score = cost + unit_cost * euclid(next, goal);
        if score < best.1 {
            best = (leg, score);
        }
    }
    best.0
}

/// Policy wrapper around a fixed unit cost.
#[derive(Debug, Clone, Copy)]
pub struct ParametricPolicy {
    pub unit_cost: f64,
}

impl Policy for ParametricPolicy {
    fn choose(&self, state: &SailingState, lake: usize, params: &SailingParams) -> u8 {
        parametric_policy_leg(state, self.unit_cost, lake, params)
    }
}

/// Greedy policy: steepest decrease of the distance to the goal among
/// feasible legs.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyPolicy;

impl Policy for GreedyPolicy {
    fn choose(&self, state: &SailingState, lake: usize, params: &SailingParams) -> u8 {
        let goal = (lake - 1, lake - 1);
        let mut best = (u8::MAX, f64::INFINITY);
        for leg in 0..8u8 {
            let Some(next) = in_lake(state.position, leg, lake) else {
                continue;
            };
            if sailing_cost(state.tack, leg, state.wind, params).is_infinite() {
                continue;
            }
            let dist = euclid(next, goal);
            if dist < best.1 {
                best = (leg, dist);
            }
        }
        best.0
    }
}

/// Expected-cost-to-goal table over (position, tack, wind) and its greedy
/// policy.
#[derive(Debug, Clone)]
pub struct ValueTable {
    pub lake: usize,
    values: Vec<f64>,
    policy: Vec<u8>,
}

impl ValueTable {
    fn index(lake: usize, pos: (usize, usize), tack: Tack, wind: u8) -> usize {
        let t = match tack {
            Tack::Port => 0,
            Tack::Starboard => 1,
        };
        ((pos.1 * lake + pos.0) * 2 + t) * 8 + wind as usize
    }

    pub fn value(&self, state: &SailingState) -> f64 {
        self.values[Self::index(self.lake, state.position, state.tack, state.wind)]
    }

    pub fn leg(&self, state: &SailingState) -> u8 {
        self.policy[Self::index(self.lake, state.position, state.tack, state.wind)]
    }

    /// Expected cost from the start corner under a uniform initial wind and
    /// port tack.
    pub fn expected_start_cost(&self) -> f64 {
        (0..8u8)
            .map(|w| {
                self.value(&SailingState {
                    position: (0, 0),
                    tack: Tack::Port,
                    wind: w,
                })
            })
            .sum::<f64>()
            / 8.0
    }
}

impl Policy for ValueTable {
    fn choose(&self, state: &SailingState, _lake: usize, _params: &SailingParams) -> u8 {
        self.leg(state)
    }
}

/// Solves the expected-cost-to-goal MDP by Gauss-Seidel value iteration,
/// sweeping until the largest update falls below `tolerance`.
pub fn value_iteration(
    lake: usize,
    params: &SailingParams,
    tolerance: f64,
    max_sweeps: usize,
) -> Result<ValueTable, SailingError> {
    assert!(lake >= 2, "lake must be at least 2x2");
    let goal = (lake - 1, lake - 1);
    let n_states = lake * lake * 2 * 8;
    let mut values = vec![0.0; n_states];
    let mut policy = vec![0u8; n_states];
    let (p_same, p_left, p_right) = params.wind_probs;
    for _sweep in 0..max_sweeps {
        let mut max_delta = 0.0_f64;
        // Reverse index order starts near the goal corner, which propagates
        // costs outward faster.
        for y in (0..lake).rev() {
            for x in (0..lake).rev() {
                if (x, y) == goal {
                    continue;
                }
                for tack in [Tack::Port, Tack::Starboard] {
                    for wind in 0..8u8 {
                        let idx = ValueTable::index(lake, (x, y), tack, wind);
                        let mut best = (0u8, f64::INFINITY);
                        for leg in 0..8u8 {
                            let Some(next) = in_lake((x, y), leg, lake) else {
                                continue;
                            };
                            let cost = sailing_cost(tack, leg, wind, params);
                            if cost.is_infinite() {
                                continue;
                            }
                            let next_tack = leg_tack(relative_sector(leg, wind), tack);
                            let mut expect = 0.0;
                            for (w_next, p) in [
                                (wind, p_same),
                                ((wind + 7) % 8, p_left),
                                ((wind + 1) % 8, p_right),
                            ] {
                                if p > 0.0 {
                                    expect += p
                                        * values[ValueTable::index(lake, next, next_tack, w_next)];
                                }
                            }
                            let q = cost + expect;
                            if q < best.1 {
                                best = (leg, q);
                            }
                        }
                        max_delta = max_delta.max((values[idx] - best.1).abs());
                        values[idx] = best.1;
                        policy[idx] = best.0;
                    }
                }
            }
        }
        if max_delta < tolerance {
            return Ok(ValueTable {
                lake,
                values,
                policy,
            });
        }
    }
    Err(SailingError::NoConvergence(max_sweeps))
}

/// Rolls a policy out from corner A=(0,0) to corner B=(lake-1, lake-1)
/// under the given wind walker; returns the accumulated travel cost.
pub fn rollout_policy<P: Policy>(
    policy: &P,
    lake: usize,
    params: &SailingParams,
    walk: &mut WindWalk,
    cap: usize,
) -> Result<f64, SailingError> {
    let goal = (lake - 1, lake - 1);
    let mut state = SailingState {
        position: (0, 0),
        tack: Tack::Port,
        wind: walk.initial(),
    };
    let mut total = 0.0;
    let mut steps = 0usize;
    while state.position != goal {
        if steps >= cap {
            return Err(SailingError::StepCap {
                cap,
                position: state.position,
                unit_cost: f64::NAN,
            });
        }
        let leg = policy.choose(&state, lake, params);
        let next = in_lake(state.position, leg, lake).expect("policy chose an in-lake leg");
        total += sailing_cost(state.tack, leg, state.wind, params);
        state.tack = leg_tack(relative_sector(leg, state.wind), state.tack);
        state.position = next;
        state.wind = walk.step(state.wind, params);
        steps += 1;
    }
    Ok(total)
}

/// Default step cap for rollouts.
pub fn default_cap(lake: usize) -> usize {
    400 * lake
}

/// Travel cost of the parametric policy under one latent wind history.
pub fn travel_cost(
    history: &WindHistory,
    unit_cost: f64,
    lake: usize,
    params: &SailingParams,
    cap: usize,
) -> Result<f64, SailingError> {
    let policy = ParametricPolicy { unit_cost };
    let mut walk = WindWalk::from_seed(history.seed);
    rollout_policy(&policy, lake, params, &mut walk, cap).map_err(|e| match e {
        SailingError::StepCap { cap, position, .. } => SailingError::StepCap {
            cap,
            position,
            unit_cost,
        },
        other => other,
    })
}

/// Unnormalized Boltzmann log-density of a (wind-history, unit-cost) pair:
/// `-travel-cost / (lake-size * temperature)`.
pub fn sailing_log_joint(
    history: &WindHistory,
    unit_cost: f64,
    lake: usize,
    temperature: f64,
    params: &SailingParams,
    cap: usize,
) -> Result<f64, SailingError> {
    let cost = travel_cost(history, unit_cost, lake, params, cap)?;
    Ok(-cost / (lake as f64 * temperature))
}

/// Boltzmann policy-search model over the unit cost, with a uniform prior
/// on the feasible range [1, 8] spanning the leg costs.
#[derive(Debug, Clone)]
pub struct SailingModel {
    pub lake: usize,
    pub temperature: f64,
    pub params: SailingParams,
    pub cap: usize,
}

pub const UNIT_COST_RANGE: (f64, f64) = (1.0, 8.0);

impl SailingModel {
    pub fn new(lake: usize, temperature: f64) -> Self {
        SailingModel {
            lake,
            temperature,
            params: SailingParams::default(),
            cap: default_cap(lake),
        }
    }

    fn transform(&self) -> Transform {
        Transform::ScaledLogit {
            lo: UNIT_COST_RANGE.0,
            hi: UNIT_COST_RANGE.1,
        }
    }

    pub fn unit_cost_of(&self, x: &[f64]) -> f64 {
        self.transform().constrain(x[0])
    }
}

impl Model for SailingModel {
    type Obs = WindHistory;

    fn dim(&self) -> usize {
        1
    }

    fn param_names(&self) -> Vec<String> {
        vec!["unit_cost".into()]
    }

    fn transforms(&self) -> Vec<Transform> {
        vec![self.transform()]
    }

    fn log_prior<S: Scalar>(&self, x: &[S]) -> S {
        let (lo, hi) = UNIT_COST_RANGE;
        S::from_f64(-(hi - lo).ln()) + self.transform().log_jacobian(x[0])
    }

    fn log_cond<S: Scalar>(&self, x: &[S], y: &Self::Obs) -> S {
        // The rollout is piecewise constant in the unit cost, so the
        // derivative is zero almost everywhere; the value is exact. A
        // capped rollout is treated as out of support.
        let unit_cost = self.transform().constrain(x[0]).value();
        match travel_cost(y, unit_cost, self.lake, &self.params, self.cap) {
            Ok(cost) => S::from_f64(-cost / (self.lake as f64 * self.temperature)),
            Err(_) => S::from_f64(f64::NEG_INFINITY),
        }
    }
}

/// Monte Carlo policy evaluation: mean travel cost and a 95% confidence
/// interval over fresh wind episodes.
#[derive(Debug, Clone, Copy)]
pub struct PolicyEval {
    pub mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub episodes: u32,
}

pub fn evaluate_policy<P: Policy>(
    policy: &P,
    lake: usize,
    params: &SailingParams,
    episodes: u32,
    rng: &mut RandomSource,
    cap: usize,
) -> Result<PolicyEval, SailingError> {
    assert!(episodes >= 1);
    let mut costs = Vec::with_capacity(episodes as usize);
    for _ in 0..episodes {
        let mut walk = WindWalk::from_seed(rng.next_u64());
        costs.push(rollout_policy(policy, lake, params, &mut walk, cap)?);
    }
    let mean = crate::summary::mean(&costs);
    let se = crate::summary::sd(&costs) / (episodes as f64).sqrt();
    Ok(PolicyEval {
        mean,
        ci_lo: mean - 1.96 * se,
        ci_hi: mean + 1.96 * se,
        episodes,
    })
}
