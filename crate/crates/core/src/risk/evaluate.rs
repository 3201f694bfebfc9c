//! Direct evaluation of risk measures on a known function over a discrete
//! environment distribution, plus the order-statistic primitives shared with
//! the interval bounds.

use super::spec::{AmbiguitySet, RiskKind, RiskSpec};
use super::RiskError;

/// Slack on cumulative weights when locating a quantile.
const CUMULATIVE_TOLERANCE: f64 = 1e-12;

pub fn expectation(z: &[f64], w: &[f64]) -> f64 {
    z.iter().zip(w).map(|(a, b)| a * b).sum()
}

fn sorted_order(z: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..z.len()).collect();
    idx.sort_by(|&a, &b| z[a].total_cmp(&z[b]).then(a.cmp(&b)));
    idx
}

/// `inf{b : P(z <= b) >= alpha}`.
pub fn quantile(z: &[f64], w: &[f64], alpha: f64) -> f64 {
    let order = sorted_order(z);
    let mut cum = 0.0;
    for &i in &order {
        cum += w[i];
        if cum >= alpha - CUMULATIVE_TOLERANCE {
            return z[i];
        }
    }
    z[*order.last().expect("nonempty support")]
}

/// `(1/alpha) * integral_0^alpha quantile(a) da`, exact for the step quantile.
pub fn cvar(z: &[f64], w: &[f64], alpha: f64) -> f64 {
    let mut acc = 0.0;
    let mut prev = 0.0;
    for i in sorted_order(z) {
        let cum = prev + w[i];
        let mass = (cum.min(alpha) - prev).max(0.0);
        acc += z[i] * mass;
        prev = cum;
        if prev >= alpha {
            break;
        }
    }
    acc / alpha
}

/// Minimizes `sum p_i z_i` over distributions `p` with `|p - center|_1 <= radius`
/// by moving up to `radius / 2` mass from the largest values onto the smallest.
/// Returns the optimum and its weights.
pub fn greedy_l1_min(z: &[f64], center: &[f64], radius: f64) -> (f64, Vec<f64>) {
    let mut p = center.to_vec();
    let order = sorted_order(z);
    let target = order[0];
    let mut budget = 0.5 * radius;
    for &i in order.iter().rev() {
        if budget <= 0.0 || z[i] <= z[target] {
            break;
        }
        let moved = p[i].min(budget);
        p[i] -= moved;
        p[target] += moved;
        budget -= moved;
    }
    (expectation(z, &p), p)
}

fn central_moment(g: &[f64], w: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    let m = expectation(g, w);
    g.iter().zip(w).map(|(v, p)| p * f(v - m)).sum()
}

fn check_weights(w: &[f64], n: usize) -> Result<(), RiskError> {
    if w.len() != n {
        return Err(RiskError::Mismatch(format!(
            "{} weights for a support of {n}",
            w.len()
        )));
    }
    Ok(())
}

/// Value of a single-objective measure for the function values `g` on a
/// support with weights `w`.
pub fn evaluate_kind(kind: &RiskKind, g: &[f64], w: &[f64]) -> Result<f64, RiskError> {
    check_weights(w, g.len())?;
    if g.is_empty() {
        return Err(RiskError::Mismatch("empty support".into()));
    }
    Ok(match kind {
        RiskKind::Bayes => expectation(g, w),
        RiskKind::WorstCase => g.iter().copied().fold(f64::INFINITY, f64::min),
        RiskKind::BestCase => g.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        RiskKind::Var { alpha } => quantile(g, w, *alpha),
        RiskKind::Cvar { alpha } => cvar(g, w, *alpha),
        RiskKind::Mad => central_moment(g, w, f64::abs),
        RiskKind::Variance => central_moment(g, w, |d| d * d).max(0.0),
        RiskKind::Std => central_moment(g, w, |d| d * d).max(0.0).sqrt(),
        RiskKind::DistRobust { inner, ambiguity } => match ambiguity {
            AmbiguitySet::ExplicitList { distributions } => {
                let mut best = f64::INFINITY;
                for p in distributions {
                    best = best.min(evaluate_kind(inner, g, p)?);
                }
                best
            }
            AmbiguitySet::L1Ball { center, radius } => {
                let c = center.as_deref().unwrap_or(w);
                check_weights(c, g.len())?;
                match **inner {
                    RiskKind::Bayes => greedy_l1_min(g, c, *radius).0,
                    RiskKind::WorstCase | RiskKind::BestCase => evaluate_kind(inner, g, c)?,
                    _ => {
                        return Err(RiskError::Unsupported(format!(
                            "l1_ball ambiguity with inner kind {}",
                            inner.tag()
                        )))
                    }
                }
            }
        },
        RiskKind::Lipschitz { inner, map, .. } => map.apply(evaluate_kind(inner, g, w)?),
        RiskKind::WeightedSum { .. } => {
            return Err(RiskError::Unsupported("weighted_sum needs per-objective values".into()))
        }
        RiskKind::ProbThreshold { theta } => g
            .iter()
            .zip(w)
            .filter(|(v, _)| **v >= *theta)
            .map(|(_, p)| p)
            .sum(),
    })
}

/// Value of `spec` given function values per objective (`values[m]` aligned
/// with the support).
pub fn evaluate(spec: &RiskSpec, values: &[Vec<f64>], w: &[f64]) -> Result<f64, RiskError> {
    match &spec.kind {
        RiskKind::WeightedSum { terms } => {
            let mut total = 0.0;
            for t in terms {
                total += t.coefficient * evaluate(&t.risk, values, w)?;
            }
            Ok(total)
        }
        kind => {
            let g = values.get(spec.objective).ok_or_else(|| {
                RiskError::Mismatch(format!("no values for objective {}", spec.objective))
            })?;
            evaluate_kind(kind, g, w)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const U4: [f64; 4] = [0.25; 4];

    #[test]
    fn quantile_and_cvar_on_uniform_four() {
        let z = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&z, &U4, 0.5), 2.0);
        assert_eq!(quantile(&z, &U4, 0.51), 3.0);
        assert!((cvar(&z, &U4, 0.5) - 1.5).abs() < 1e-15);
        assert!((cvar(&z, &U4, 0.3) - (0.25 + 2.0 * 0.05) / 0.3).abs() < 1e-12);
    }

    #[test]
    fn greedy_moves_half_radius() {
        let z = [1.0, 2.0, 3.0, 4.0];
        // mean 2.5, minus 0.125 mass moved across a gap of 3
        let (v, p) = greedy_l1_min(&z, &U4, 0.25);
        assert!((v - 2.125).abs() < 1e-12);
        assert!((p[0] - 0.375).abs() < 1e-15 && (p[3] - 0.125).abs() < 1e-15);
        let (v, _) = greedy_l1_min(&z, &U4, 2.0);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moments() {
        let w = [0.5, 0.5];
        let g = [0.0, 2.0];
        assert_eq!(evaluate_kind(&RiskKind::Mad, &g, &w).unwrap(), 1.0);
        assert_eq!(evaluate_kind(&RiskKind::Variance, &g, &w).unwrap(), 1.0);
        assert_eq!(evaluate_kind(&RiskKind::ProbThreshold { theta: 1.0 }, &g, &w).unwrap(), 0.5);
    }
}
