use super::env::EnvDistribution;
use super::evaluate::evaluate;
use super::spec::RiskSpec;
use super::{Band, RiskError, RiskInterval};
use crate::gp::{GPState, JointPoint};
use crate::rng::mix;

/// Result of the sampling bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledBound {
    pub interval: RiskInterval,
    /// No path stayed inside the band; the interval comes from clipped paths.
    pub approximate: bool,
    /// Number of paths that stayed inside the band.
    pub retained: usize,
}

/// Credible band `mu ± beta_sqrt * sigma` of one GP over a design's support.
pub fn posterior_band(gp: &GPState, design: usize, dist: &EnvDistribution, beta_sqrt: f64) -> Band {
    let (lower, upper) = dist
        .support
        .iter()
        .map(|&e| {
            let (m, s) = gp.posterior(JointPoint::new(design, e));
            (m - beta_sqrt * s, m + beta_sqrt * s)
        })
        .unzip();
    Band { lower, upper }
}

/// Interval from `samples` joint posterior paths over the design's support:
/// `(min, max)` of the measure over paths lying inside the band everywhere.
/// Objective `m` uses `gps[m]` and `beta_sqrts[m]`.
pub fn bound_sampling(
    spec: &RiskSpec,
    gps: &[GPState],
    design: usize,
    dist: &EnvDistribution,
    beta_sqrts: &[f64],
    samples: usize,
    seed: u64,
) -> Result<SampledBound, RiskError> {
    if samples == 0 {
        return Err(RiskError::invalid("samples", "must be >= 1"));
    }
    let slice: Vec<JointPoint> = dist.support.iter().map(|&e| JointPoint::new(design, e)).collect();
    let objectives = spec.objectives();
    let n_obj = objectives.last().map_or(0, |m| m + 1);
    if n_obj > gps.len() || n_obj > beta_sqrts.len() {
        return Err(RiskError::Mismatch(format!(
            "spec reads objective {} but only {} GPs were given",
            n_obj - 1,
            gps.len().min(beta_sqrts.len())
        )));
    }
    let mut paths: Vec<Vec<Vec<f64>>> = vec![Vec::new(); n_obj];
    let mut bands: Vec<Option<Band>> = vec![None; n_obj];
    for &m in &objectives {
        paths[m] = gps[m].sample_paths(&slice, samples, mix(seed, m as u64))?;
        bands[m] = Some(posterior_band(&gps[m], design, dist, beta_sqrts[m]));
    }

    let inside = |j: usize| {
        objectives.iter().all(|&m| {
            let b = bands[m].as_ref().expect("band built");
            paths[m][j]
                .iter()
                .enumerate()
                .all(|(i, v)| *v >= b.lower[i] && *v <= b.upper[i])
        })
    };
    let retained: Vec<usize> = (0..samples).filter(|&j| inside(j)).collect();
    let approximate = retained.is_empty();
    let used: Vec<usize> = if approximate { (0..samples).collect() } else { retained.clone() };

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut values: Vec<Vec<f64>> = vec![Vec::new(); n_obj];
    for j in used {
        for &m in &objectives {
            let b = bands[m].as_ref().expect("band built");
            values[m] = paths[m][j]
                .iter()
                .enumerate()
                .map(|(i, v)| v.clamp(b.lower[i], b.upper[i]))
                .collect();
        }
        let r = evaluate(spec, &values, &dist.weights)?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok(SampledBound {
        interval: RiskInterval::new_unchecked(lo, hi),
        approximate,
        retained: retained.len(),
    })
}
