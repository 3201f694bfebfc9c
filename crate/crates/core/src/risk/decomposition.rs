use super::evaluate::{cvar, expectation, greedy_l1_min, quantile};
use super::spec::{AmbiguitySet, RiskKind, RiskSpec};
use super::{Band, RiskError, RiskInterval};

/// Side information from a decomposition bound.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundNotes {
    /// A moment-type lower bound came out negative and was raised to 0.
    pub clamped: bool,
}

/// Interval for `spec` from per-objective bands (`bands[m]` aligned with the
/// support carrying weights `w`).
pub fn bound_decomposition(spec: &RiskSpec, bands: &[Band], w: &[f64]) -> Result<RiskInterval, RiskError> {
    bound_decomposition_with_notes(spec, bands, w).map(|(i, _)| i)
}

pub fn bound_decomposition_with_notes(
    spec: &RiskSpec,
    bands: &[Band],
    w: &[f64],
) -> Result<(RiskInterval, BoundNotes), RiskError> {
    let mut notes = BoundNotes::default();
    let (lcb, ucb) = spec_bounds(spec, bands, w, &mut notes)?;
    Ok((RiskInterval::new_unchecked(lcb, ucb), notes))
}

fn spec_bounds(
    spec: &RiskSpec,
    bands: &[Band],
    w: &[f64],
    notes: &mut BoundNotes,
) -> Result<(f64, f64), RiskError> {
    match &spec.kind {
        RiskKind::WeightedSum { terms } => {
            let (mut lo, mut hi) = (0.0, 0.0);
            for t in terms {
                let (a, b) = spec_bounds(&t.risk, bands, w, notes)?;
                lo += t.coefficient * a;
                hi += t.coefficient * b;
            }
            Ok((lo, hi))
        }
        kind => {
            let band = bands.get(spec.objective).ok_or_else(|| {
                RiskError::Mismatch(format!("no band for objective {}", spec.objective))
            })?;
            if band.len() != w.len() {
                return Err(RiskError::Mismatch(format!(
                    "band of length {} for a support of {}",
                    band.len(),
                    w.len()
                )));
            }
            kind_bounds(kind, &band.lower, &band.upper, w, notes)
        }
    }
}

fn str_term(a: f64, b: f64) -> f64 {
    (-a).min(b).max(0.0)
}

/// Raises a negative lower bound to 0, recording that it happened.
fn clamp_zero(v: f64, notes: &mut BoundNotes) -> f64 {
    if v < 0.0 {
        notes.clamped = true;
        0.0
    } else {
        v
    }
}

fn kind_bounds(
    kind: &RiskKind,
    l: &[f64],
    u: &[f64],
    w: &[f64],
    notes: &mut BoundNotes,
) -> Result<(f64, f64), RiskError> {
    let min = |z: &[f64]| z.iter().copied().fold(f64::INFINITY, f64::min);
    let max = |z: &[f64]| z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(match kind {
        RiskKind::Bayes => (expectation(l, w), expectation(u, w)),
        RiskKind::WorstCase => (min(l), min(u)),
        RiskKind::BestCase => (max(l), max(u)),
        RiskKind::Var { alpha } => (quantile(l, w, *alpha), quantile(u, w, *alpha)),
        RiskKind::Cvar { alpha } => (cvar(l, w, *alpha), cvar(u, w, *alpha)),
        RiskKind::Mad | RiskKind::Variance | RiskKind::Std => {
            let el = expectation(l, w);
            let eu = expectation(u, w);
            let square = !matches!(kind, RiskKind::Mad);
            let (mut lo, mut hi) = (0.0, 0.0);
            for i in 0..l.len() {
                let a = l[i] - eu;
                let b = u[i] - el;
                let s = str_term(a, b);
                let (inner_lo, inner_hi) = if square {
                    ((a * a).min(b * b) - s * s, (a * a).max(b * b))
                } else {
                    (a.abs().min(b.abs()) - s, a.abs().max(b.abs()))
                };
                lo += w[i] * inner_lo;
                hi += w[i] * inner_hi;
            }
            let lo = clamp_zero(lo, notes);
            let hi = hi.max(lo);
            if matches!(kind, RiskKind::Std) {
                (lo.sqrt(), hi.sqrt())
            } else {
                (lo, hi)
            }
        }
        RiskKind::DistRobust { inner, ambiguity } => match ambiguity {
            AmbiguitySet::ExplicitList { distributions } => {
                let (mut lo, mut hi) = (f64::INFINITY, f64::INFINITY);
                for p in distributions {
                    if p.len() != w.len() {
                        return Err(RiskError::Mismatch(format!(
                            "ambiguity distribution of length {} for a support of {}",
                            p.len(),
                            w.len()
                        )));
                    }
                    let (a, b) = kind_bounds(inner, l, u, p, notes)?;
                    lo = lo.min(a);
                    hi = hi.min(b);
                }
                (lo, hi)
            }
            AmbiguitySet::L1Ball { center, radius } => {
                let c = center.as_deref().unwrap_or(w);
                if c.len() != w.len() {
                    return Err(RiskError::Mismatch("ball center does not match the support".into()));
                }
                match **inner {
                    RiskKind::Bayes => (greedy_l1_min(l, c, *radius).0, greedy_l1_min(u, c, *radius).0),
                    RiskKind::WorstCase | RiskKind::BestCase => kind_bounds(inner, l, u, c, notes)?,
                    _ => {
                        return Err(RiskError::Unsupported(format!(
                            "l1_ball ambiguity with inner kind {}",
                            inner.tag()
                        )))
                    }
                }
            }
        },
        RiskKind::Lipschitz { inner, map, monotone, .. } => {
            if !monotone {
                return Err(RiskError::NonMonotoneMap);
            }
            let (a, b) = kind_bounds(inner, l, u, w, notes)?;
            let (ha, hb) = (map.apply(a), map.apply(b));
            (ha.min(hb), ha.max(hb))
        }
        RiskKind::WeightedSum { .. } => {
            return Err(RiskError::Unsupported("nested weighted_sum".into()));
        }
        RiskKind::ProbThreshold { theta } => {
            let p = |z: &[f64]| -> f64 {
                z.iter().zip(w).filter(|(v, _)| **v >= *theta).map(|(_, p)| p).sum()
            };
            (p(l), p(u))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::spec::MonotoneMap;

    fn band(l: &[f64], u: &[f64]) -> Vec<Band> {
        vec![Band::new(l.to_vec(), u.to_vec()).unwrap()]
    }

    fn bound(kind: RiskKind, l: &[f64], u: &[f64], w: &[f64]) -> RiskInterval {
        bound_decomposition(&RiskSpec::new(kind, 0), &band(l, u), w).unwrap()
    }

    #[test]
    fn table_examples() {
        let w3 = [1.0 / 3.0; 3];
        let r = bound(RiskKind::WorstCase, &[0.5, 0.2, 0.9], &[0.7, 0.4, 1.0], &w3);
        assert_eq!((r.lcb, r.ucb), (0.2, 0.4));
        let r = bound(RiskKind::Bayes, &[1.0, 2.0, 3.0], &[2.0, 3.0, 4.0], &w3);
        assert!((r.lcb - 2.0).abs() < 1e-12 && (r.ucb - 3.0).abs() < 1e-12);

        let w4 = [0.25; 4];
        let l = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(bound(RiskKind::Var { alpha: 0.5 }, &l, &l, &w4).lcb, 2.0);
        assert!((bound(RiskKind::Cvar { alpha: 0.5 }, &l, &l, &w4).lcb - 1.5).abs() < 1e-12);

        let r = bound(RiskKind::Mad, &[0.0, 2.0], &[0.0, 2.0], &[0.5, 0.5]);
        assert_eq!((r.lcb, r.ucb), (1.0, 1.0));

        let wcbr = RiskKind::DistRobust {
            inner: Box::new(RiskKind::Bayes),
            ambiguity: AmbiguitySet::L1Ball {
                center: None,
                radius: 0.25,
            },
        };
        assert!((bound(wcbr, &l, &l, &w4).lcb - 2.125).abs() < 1e-12);
    }

    #[test]
    fn decreasing_map_swaps_endpoints() {
        let neg = RiskKind::Lipschitz {
            inner: Box::new(RiskKind::Bayes),
            map: MonotoneMap::Affine {
                scale: -2.0,
                offset: 1.0,
            },
            constant: 2.0,
            monotone: true,
        };
        let r = bound(neg, &[0.0, 0.0], &[1.0, 1.0], &[0.5, 0.5]);
        assert_eq!((r.lcb, r.ucb), (-1.0, 1.0));
    }

    #[test]
    fn length_mismatch_is_reported() {
        let spec = RiskSpec::bayes(0);
        assert!(matches!(
            bound_decomposition(&spec, &band(&[0.0], &[1.0]), &[0.5, 0.5]),
            Err(RiskError::Mismatch(_))
        ));
    }
}
