//! Summary statistics for chains and weighted samples: moments, quantiles,
//! effective sample size, histograms and convergence diagnostics.

use crate::rng::RandomSource;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (N-1 denominator).
pub fn sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)).sqrt()
}

pub fn weighted_mean(xs: &[f64], ws: &[f64]) -> f64 {
    let total: f64 = ws.iter().sum();
    xs.iter().zip(ws.iter()).map(|(x, w)| x * w).sum::<f64>() / total
}

/// Linear-interpolation sample quantile (the common "type 7" definition)
/// over an already sorted slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    if p <= 0.0 {
        return sorted[0];
    }
    if p >= 1.0 {
        return sorted[sorted.len() - 1];
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

pub fn quantiles_of(xs: &[f64], ps: &[f64]) -> Vec<f64> {
    let mut sorted = xs.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ps.iter().map(|&p| quantile_sorted(&sorted, p)).collect()
}

/// Standard deviation under normalized weights.
pub fn weighted_sd(xs: &[f64], ws: &[f64]) -> f64 {
    let m = weighted_mean(xs, ws);
    let total: f64 = ws.iter().sum();
    (xs.iter()
        .zip(ws.iter())
        .map(|(x, w)| w * (x - m) * (x - m))
        .sum::<f64>()
        / total)
        .sqrt()
}

/// Weighted quantile: smallest value whose cumulative normalized weight
/// reaches `p`.
pub fn weighted_quantile(xs: &[f64], ws: &[f64], p: f64) -> f64 {
    assert_eq!(xs.len(), ws.len());
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let total: f64 = ws.iter().sum();
    let mut acc = 0.0;
    for &i in &order {
        acc += ws[i] / total;
        if acc >= p {
            return xs[i];
        }
    }
    xs[*order.last().unwrap()]
}

/// Effective sample size from the autocorrelation sum, truncated at the
/// first lag where the paired autocorrelations go negative (Geyer's initial
/// positive sequence).
pub fn ess(chain: &[f64]) -> f64 {
    let n = chain.len();
    if n < 4 {
        return n as f64;
    }
    let m = mean(chain);
    let centered: Vec<f64> = chain.iter().map(|x| x - m).collect();
    let var: f64 = centered.iter().map(|x| x * x).sum::<f64>() / n as f64;
    if var == 0.0 {
        return n as f64;
    }
    let max_lag = (n / 2).min(2000);
    let rho = |lag: usize| -> f64 {
        let mut acc = 0.0;
        for i in 0..n - lag {
            acc += centered[i] * centered[i + lag];
        }
        acc / (n as f64 * var)
    };
    let mut sum = 0.0;
    let mut lag = 1;
    while lag < max_lag {
        let pair = rho(lag) + rho(lag + 1);
        if pair <= 0.0 {
            break;
        }
        sum += pair;
        lag += 2;
    }
    (n as f64 / (1.0 + 2.0 * sum)).min(n as f64)
}

/// Importance-sampling effective sample size (sum w)^2 / sum w^2.
pub fn ess_weights(ws: &[f64]) -> f64 {
    let s: f64 = ws.iter().sum();
    let s2: f64 = ws.iter().map(|w| w * w).sum();
    s * s / s2
}

/// Normalized histogram over `bins` equal-width cells on `[lo, hi)`;
/// out-of-range values are clamped into the edge cells.
pub fn histogram(xs: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut counts = vec![0.0; bins];
    let width = (hi - lo) / bins as f64;
    for &x in xs {
        let idx = (((x - lo) / width) as isize).clamp(0, bins as isize - 1) as usize;
        counts[idx] += 1.0;
    }
    let total = xs.len() as f64;
    counts.iter_mut().for_each(|c| *c /= total);
    counts
}

/// Normalized 2-D histogram, row-major over `bins x bins` cells.
pub fn histogram2d(
    xs: &[f64],
    ys: &[f64],
    xlo: f64,
    xhi: f64,
    ylo: f64,
    yhi: f64,
    bins: usize,
) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len());
    let mut counts = vec![0.0; bins * bins];
    let xw = (xhi - xlo) / bins as f64;
    let yw = (yhi - ylo) / bins as f64;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        let i = (((x - xlo) / xw) as isize).clamp(0, bins as isize - 1) as usize;
        let j = (((y - ylo) / yw) as isize).clamp(0, bins as isize - 1) as usize;
        counts[i * bins + j] += 1.0;
    }
    let total = xs.len() as f64;
    counts.iter_mut().for_each(|c| *c /= total);
    counts
}

/// Total-variation distance between two normalized histograms.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q.iter()).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Midpoint of the fullest histogram cell; a simple posterior-mode estimate.
pub fn mode_from_histogram(xs: &[f64], lo: f64, hi: f64, bins: usize) -> f64 {
    let h = histogram(xs, lo, hi, bins);
    let (idx, _) = h
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    lo + (idx as f64 + 0.5) * (hi - lo) / bins as f64
}

/// Bootstrap confidence interval for a self-normalized weighted mean.
pub fn bootstrap_weighted_mean_ci(
    xs: &[f64],
    ws: &[f64],
    reps: u32,
    level: f64,
    rng: &mut RandomSource,
) -> (f64, f64) {
    let n = xs.len();
    let mut means = Vec::with_capacity(reps as usize);
    for _ in 0..reps {
        let mut num = 0.0;
        let mut den = 0.0;
        for _ in 0..n {
            let i = (rng.next_f64() * n as f64) as usize;
            let i = i.min(n - 1);
            num += xs[i] * ws[i];
            den += ws[i];
        }
        means.push(num / den);
    }
    means.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let tail = (1.0 - level) / 2.0;
    (
        quantile_sorted(&means, tail),
        quantile_sorted(&means, 1.0 - tail),
    )
}

/// Geweke-style convergence score: difference between the means of the
/// first 10% and last 50% of the chain, in units of its joint standard
/// error (ESS-adjusted).
pub fn geweke_z(chain: &[f64]) -> f64 {
    let n = chain.len();
    let head = &chain[..n / 10];
    let tail = &chain[n / 2..];
    let var_head = sd(head).powi(2) / ess(head);
    let var_tail = sd(tail).powi(2) / ess(tail);
    (mean(head) - mean(tail)) / (var_head + var_tail).sqrt()
}
