use super::spec::{RiskKind, RiskSpec};
use super::{RiskError, RiskInterval};

/// Slack allowed by [`box_width_bound_check`].
pub const WIDTH_TOLERANCE: f64 = 1e-9;

/// Width function `q(a)`: interval width for bands no wider than `a`.
pub fn q_function(spec: &RiskSpec, a: f64) -> Result<f64, RiskError> {
    if !(a >= 0.0) {
        return Err(RiskError::invalid("a", format!("{a} must be >= 0")));
    }
    match &spec.kind {
        RiskKind::WeightedSum { terms } => {
            let mut total = 0.0;
            for t in terms {
                total += t.coefficient * q_function(&t.risk, a)?;
            }
            Ok(total)
        }
        kind => q_kind(kind, spec.rkhs_bound, a),
    }
}

fn q_kind(kind: &RiskKind, b: f64, a: f64) -> Result<f64, RiskError> {
    Ok(match kind {
        RiskKind::Bayes
        | RiskKind::WorstCase
        | RiskKind::BestCase
        | RiskKind::Var { .. }
        | RiskKind::Cvar { .. } => a,
        RiskKind::Mad => 2.0 * a,
        RiskKind::Std => (8.0 * b * a + 5.0 * a * a).sqrt(),
        RiskKind::Variance => 8.0 * b * a + 5.0 * a * a,
        RiskKind::DistRobust { inner, .. } => q_kind(inner, b, a)?,
        RiskKind::Lipschitz { inner, constant, .. } => constant * q_kind(inner, b, a)?,
        RiskKind::WeightedSum { .. } => {
            return Err(RiskError::Unsupported("nested weighted_sum".into()))
        }
        RiskKind::ProbThreshold { .. } => {
            return Err(RiskError::Unsupported(
                "prob_threshold has no width function".into(),
            ))
        }
    })
}

/// `ucb - lcb <= q(zeta) + 1e-9`, where `zeta` is the largest band width.
pub fn box_width_bound_check(interval: &RiskInterval, spec: &RiskSpec, zeta: f64) -> Result<bool, RiskError> {
    Ok(interval.width() <= q_function(spec, zeta)? + WIDTH_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(q_function(&RiskSpec::bayes(0), 0.7).unwrap(), 0.7);
        let std = RiskSpec::new(RiskKind::Std, 0);
        assert_eq!(q_function(&std, 0.0).unwrap(), 0.0);
        assert!((q_function(&std, 1.0).unwrap() - 13f64.sqrt()).abs() < 1e-12);
        assert!(q_function(&RiskSpec::new(RiskKind::ProbThreshold { theta: 0.0 }, 0), 1.0).is_err());
    }

    #[test]
    fn width_check() {
        let spec = RiskSpec::bayes(0);
        let i = RiskInterval::new(1.0, 1.0).unwrap();
        assert!(box_width_bound_check(&i, &spec, 0.0).unwrap());
        let wide = RiskInterval::new(0.0, 2.0).unwrap();
        assert!(!box_width_bound_check(&wide, &spec, 1.0).unwrap());
        assert!(box_width_bound_check(&wide, &spec, 2.0).unwrap());
    }
}
