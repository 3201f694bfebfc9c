//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use riskfront::risk::{AmbiguitySet, MonotoneMap, RiskKind, RiskSpec, WeightedTerm};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random probability vector, occasionally with zero entries.
pub fn random_weights(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n)
        .map(|_| if r.random_bool(0.1) { 0.0 } else { r.random_range(0.01..1.0) })
        .collect();
    if w.iter().all(|v| *v == 0.0) {
        w[0] = 1.0;
    }
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= s);
    w
}

/// Band inside `[-scale, scale]`, some points exact.
pub fn random_band(r: &mut ChaCha8Rng, n: usize, scale: f64) -> (Vec<f64>, Vec<f64>) {
    let mut l = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    for _ in 0..n {
        let a = r.random_range(-scale..scale);
        let b = if r.random_bool(0.15) { a } else { r.random_range(-scale..scale) };
        l.push(a.min(b));
        u.push(a.max(b));
    }
    (l, u)
}

/// A function inside the band: the first calls hit the all-lower and
/// all-upper vertices, then random vertices and random interior points.
pub fn band_function(r: &mut ChaCha8Rng, l: &[f64], u: &[f64], k: usize) -> Vec<f64> {
    match k {
        0 => l.to_vec(),
        1 => u.to_vec(),
        _ if k.is_multiple_of(2) => l.iter().zip(u).map(|(a, b)| if r.random_bool(0.5) { *a } else { *b }).collect(),
        _ => l.iter().zip(u).map(|(a, b)| a + (b - a) * r.random::<f64>()).collect(),
    }
}

fn random_map(r: &mut ChaCha8Rng) -> (MonotoneMap, f64) {
    match r.random_range(0..3) {
        0 => {
            let scale = r.random_range(-2.0..2.0);
            (
                MonotoneMap::Affine {
                    scale,
                    offset: r.random_range(-1.0..1.0),
                },
                scale.abs(),
            )
        }
        1 => (MonotoneMap::Tanh, 1.0),
        _ => (MonotoneMap::Softplus, 1.0),
    }
}

/// The twelve risk kinds, indexed `0..12`, with random parameters for a
/// support of size `n`.
pub fn random_kind(r: &mut ChaCha8Rng, index: usize, n: usize) -> RiskKind {
    match index {
        0 => RiskKind::Bayes,
        1 => RiskKind::WorstCase,
        2 => RiskKind::BestCase,
        3 => RiskKind::Var {
            alpha: r.random_range(0.01..0.99),
        },
        4 => RiskKind::Cvar {
            alpha: r.random_range(0.01..0.99),
        },
        5 => RiskKind::Mad,
        6 => RiskKind::Std,
        7 => RiskKind::Variance,
        8 => {
            if r.random_bool(0.5) {
                let k = r.random_range(1..4);
                let inner_idx = [0usize, 3, 4, 6][r.random_range(0..4)];
                RiskKind::DistRobust {
                    inner: Box::new(random_kind(r, inner_idx, n)),
                    ambiguity: AmbiguitySet::ExplicitList {
                        distributions: (0..k).map(|_| random_weights(r, n)).collect(),
                    },
                }
            } else {
                RiskKind::DistRobust {
                    inner: Box::new(RiskKind::Bayes),
                    ambiguity: AmbiguitySet::L1Ball {
                        center: None,
                        radius: r.random_range(0.0..0.6),
                    },
                }
            }
        }
        9 => {
            let inner_idx = [0usize, 1, 3, 4, 5, 6][r.random_range(0..6)];
            let (map, constant) = random_map(r);
            RiskKind::Lipschitz {
                inner: Box::new(random_kind(r, inner_idx, n)),
                map,
                constant,
                monotone: true,
            }
        }
        10 => RiskKind::WeightedSum {
            terms: (0..r.random_range(1..4))
                .map(|_| {
                    let coefficient = r.random_range(0.0..2.0);
                    let idx = r.random_range(0..8);
                    let objective = r.random_range(0..2);
                    WeightedTerm {
                        coefficient,
                        risk: RiskSpec::new(random_kind(r, idx, n), objective),
                    }
                })
                .collect(),
        },
        11 => RiskKind::ProbThreshold {
            theta: r.random_range(-1.0..1.0),
        },
        _ => panic!("kind index {index} out of range"),
    }
}

/// Lower quantile by scanning candidate thresholds.
pub fn oracle_var(g: &[f64], w: &[f64], alpha: f64) -> f64 {
    let mut best = f64::INFINITY;
    for &b in g {
        let mass: f64 = g.iter().zip(w).filter(|(v, _)| **v <= b).map(|(_, p)| p).sum();
        if mass >= alpha - 1e-12 && b < best {
            best = b;
        }
    }
    best
}

/// Lower-tail CVaR as `max_t { t - E[(t - g)^+] / alpha }`, attained at a
/// support value.
pub fn oracle_cvar(g: &[f64], w: &[f64], alpha: f64) -> f64 {
    g.iter()
        .map(|&t| t - g.iter().zip(w).map(|(v, p)| p * (t - v).max(0.0)).sum::<f64>() / alpha)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `min p.g` over the L1 ball around `c` intersected with the simplex, by
/// bisection on the level above which mass is removed.
pub fn oracle_l1_bayes(g: &[f64], c: &[f64], radius: f64) -> f64 {
    let lowest = g.iter().copied().fold(f64::INFINITY, f64::min);
    let movable = |tau: f64| -> f64 { g.iter().zip(c).filter(|(v, _)| **v > tau).map(|(_, p)| p).sum() };
    let budget = 0.5 * radius;
    let base: f64 = g.iter().zip(c).map(|(v, p)| v * p).sum();
    if movable(lowest) <= budget {
        return base - g.iter().zip(c).map(|(v, p)| p * (v - lowest)).sum::<f64>();
    }
    let (mut lo, mut hi) = (lowest, g.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if movable(mid) > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = hi;
    let above: f64 = g.iter().zip(c).filter(|(v, _)| **v > tau).map(|(v, p)| p * (v - lowest)).sum();
    let rest = budget - movable(tau);
    base - above - rest * (tau - lowest)
}

fn moment(g: &[f64], w: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let mut mean = 0.0;
    for i in (0..g.len()).rev() {
        mean += w[i] * g[i];
    }
    g.iter().zip(w).map(|(v, p)| p * f(v - mean)).sum()
}

/// Definitional value of a single-objective kind.
pub fn oracle_kind(kind: &RiskKind, g: &[f64], w: &[f64]) -> f64 {
    match kind {
        RiskKind::Bayes => g.iter().zip(w).map(|(v, p)| v * p).sum(),
        RiskKind::WorstCase => g.iter().copied().fold(f64::INFINITY, f64::min),
        RiskKind::BestCase => g.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        RiskKind::Var { alpha } => oracle_var(g, w, *alpha),
        RiskKind::Cvar { alpha } => oracle_cvar(g, w, *alpha),
        RiskKind::Mad => moment(g, w, f64::abs),
        RiskKind::Variance => moment(g, w, |d| d * d).max(0.0),
        RiskKind::Std => moment(g, w, |d| d * d).max(0.0).sqrt(),
        RiskKind::DistRobust { inner, ambiguity } => match ambiguity {
            AmbiguitySet::ExplicitList { distributions } => distributions
                .iter()
                .map(|p| oracle_kind(inner, g, p))
                .fold(f64::INFINITY, f64::min),
            AmbiguitySet::L1Ball { center, radius } => {
                let c = center.as_deref().unwrap_or(w);
                match **inner {
                    RiskKind::Bayes => oracle_l1_bayes(g, c, *radius),
                    _ => oracle_kind(inner, g, c),
                }
            }
        },
        RiskKind::Lipschitz { inner, map, .. } => map.apply(oracle_kind(inner, g, w)),
        RiskKind::ProbThreshold { theta } => g.iter().zip(w).filter(|(v, _)| **v >= *theta).map(|(_, p)| p).sum(),
        RiskKind::WeightedSum { .. } => panic!("weighted_sum needs per-objective values"),
    }
}

pub fn oracle_spec(spec: &RiskSpec, values: &[Vec<f64>], w: &[f64]) -> f64 {
    match &spec.kind {
        RiskKind::WeightedSum { terms } => terms
            .iter()
            .map(|t| t.coefficient * oracle_spec(&t.risk, values, w))
            .sum(),
        k => oracle_kind(k, &values[spec.objective], w),
    }
}

/// `a >= b` componentwise.
pub fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// Indices not strictly dominated by any other point (duplicates kept).
pub fn brute_front(points: &[Vec<f64>]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| {
            !(0..points.len()).any(|j| weakly_dominates(&points[j], &points[i]) && points[j] != points[i])
        })
        .collect()
}

/// Smallest `delta` on a grid of step `res` such that `u - delta` lies in
/// the region dominated by `front`.
pub fn grid_distance(u: &[f64], front: &[Vec<f64>], res: f64) -> f64 {
    let mut k = 0u64;
    loop {
        let d = k as f64 * res;
        let shifted: Vec<f64> = u.iter().map(|v| v - d).collect();
        if front.iter().any(|b| weakly_dominates(b, &shifted)) {
            return d;
        }
        k += 1;
    }
}

/// Monte-Carlo hypervolume over the bounding box `[reference, max]` with
/// `n` samples; returns `(estimate, standard deviation of the estimate)`.
pub fn mc_hypervolume(points: &[Vec<f64>], reference: &[f64], n: usize, r: &mut ChaCha8Rng) -> (f64, f64) {
    let dim = reference.len();
    let hi: Vec<f64> = (0..dim)
        .map(|j| points.iter().map(|p| p[j]).fold(reference[j], f64::max))
        .collect();
    let vol: f64 = (0..dim).map(|j| hi[j] - reference[j]).product();
    let mut hits = 0usize;
    let mut y = vec![0.0; dim];
    for _ in 0..n {
        for j in 0..dim {
            y[j] = reference[j] + (hi[j] - reference[j]) * r.random::<f64>();
        }
        if points.iter().any(|p| weakly_dominates(p, &y)) {
            hits += 1;
        }
    }
    let frac = hits as f64 / n as f64;
    (vol * frac, vol * (frac * (1.0 - frac) / n as f64).sqrt())
}

/// Dense GP posterior `(mean, variance)` at `test` inputs from a nalgebra
/// solve of `(K + diag(noise)) a = y`.
pub fn dense_posterior(
    kernel: impl Fn(&[f64], &[f64]) -> f64,
    train: &[Vec<f64>],
    y: &[f64],
    noise: &[f64],
    test: &[Vec<f64>],
) -> (Vec<f64>, Vec<f64>) {
    let n = train.len();
    let k = DMatrix::from_fn(n, n, |i, j| kernel(&train[i], &train[j]) + if i == j { noise[i] } else { 0.0 });
    let lu = k.lu();
    let alpha = lu.solve(&DVector::from_column_slice(y)).expect("nonsingular");
    let mut mean = Vec::with_capacity(test.len());
    let mut var = Vec::with_capacity(test.len());
    for t in test {
        let ks = DVector::from_fn(n, |i, _| kernel(&train[i], t));
        mean.push(ks.dot(&alpha));
        let v = lu.solve(&ks).expect("nonsingular");
        var.push(kernel(t, t) - ks.dot(&v));
    }
    (mean, var)
}

/// `ln det(I + K / noise)` for a homoscedastic noise variance.
pub fn dense_gain(kernel: impl Fn(&[f64], &[f64]) -> f64, train: &[Vec<f64>], noise: f64) -> f64 {
    let n = train.len();
    let m = DMatrix::from_fn(n, n, |i, j| kernel(&train[i], &train[j]) / noise + if i == j { 1.0 } else { 0.0 });
    0.5 * m.determinant().ln()
}

/// A random distribution in the L1 ball of `radius` around `c`: a random
/// simplex point mixed with `c` until it fits.
pub fn sample_l1_feasible(r: &mut ChaCha8Rng, c: &[f64], radius: f64) -> Vec<f64> {
    let d = random_weights(r, c.len());
    let dist: f64 = d.iter().zip(c).map(|(a, b)| (a - b).abs()).sum();
    let t = if dist <= radius { 1.0 } else { radius / dist * r.random::<f64>().sqrt().max(0.05) };
    let t = t.min(radius / dist.max(1e-300));
    c.iter().zip(&d).map(|(a, b)| a + t * (b - a)).collect()
}
