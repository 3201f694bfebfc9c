use std::f64::consts::PI;

use rand::Rng;
use rand_distr::Exp;
use serde::{Deserialize, Serialize};

use super::OptimizerError;
use crate::gp::GPState;
use crate::rng::{stream_rng, Stream};

fn default_fixed() -> f64 {
    3.0
}

/// Schedule for the band half-width multiplier `beta^{1/2}` of each objective.
///
/// `m` below is the number of objectives and `t >= 1` the iteration number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BetaSchedule {
    /// Constant `value`.
    Fixed {
        #[serde(default = "default_fixed")]
        value: f64,
    },
    /// `B_m + sqrt(2 (gain_m + ln(m / delta)))` with the realized information
    /// gain in place of the maximum gain. `rkhs_bounds` defaults to 1 for
    /// every objective.
    Theoretical {
        delta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rkhs_bounds: Option<Vec<f64>>,
    },
    /// `sqrt(2 ln(m |grid| pi^2 t^2 / (6 delta)))`.
    Srinivas { delta: f64 },
    /// `sqrt(2 ln(m |grid| / 2) + r_t)`, `r_t ~ Exp` with the given mean.
    Sampled { mean: f64 },
}

impl Default for BetaSchedule {
    fn default() -> Self {
        BetaSchedule::Fixed { value: 3.0 }
    }
}

impl BetaSchedule {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        let bad = |s: String| Err(OptimizerError::Config(s));
        match self {
            BetaSchedule::Fixed { value } if !(value.is_finite() && *value >= 0.0) => {
                bad(format!("beta value {value} must be >= 0"))
            }
            BetaSchedule::Theoretical { delta, rkhs_bounds } => {
                if !(*delta > 0.0 && *delta < 1.0) {
                    return bad(format!("delta {delta} not in (0, 1)"));
                }
                if let Some(b) = rkhs_bounds {
                    if b.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                        return bad("rkhs_bounds must be > 0".into());
                    }
                }
                Ok(())
            }
            BetaSchedule::Srinivas { delta } if !(*delta > 0.0 && *delta < 1.0) => {
                bad(format!("delta {delta} not in (0, 1)"))
            }
            BetaSchedule::Sampled { mean } if !(mean.is_finite() && *mean > 0.0) => {
                bad(format!("mean {mean} must be > 0"))
            }
            _ => Ok(()),
        }
    }

    /// `beta^{1/2}` per objective at iteration `t` (1-based).
    pub fn beta_sqrts(&self, t: usize, gps: &[GPState], seed: u64) -> Vec<f64> {
        let m = gps.len() as f64;
        let t = t.max(1) as f64;
        match self {
            BetaSchedule::Fixed { value } => vec![*value; gps.len()],
            BetaSchedule::Theoretical { delta, rkhs_bounds } => gps
                .iter()
                .enumerate()
                .map(|(i, gp)| {
                    let b = rkhs_bounds
                        .as_ref()
                        .and_then(|v| v.get(i).copied())
                        .unwrap_or(1.0);
                    let gain = gp.realized_information_gain();
                    b + (2.0 * (gain + (m / delta).ln())).max(0.0).sqrt()
                })
                .collect(),
            BetaSchedule::Srinivas { delta } => {
                let grid = gps.first().map_or(1, |g| g.space().len()) as f64;
                let v = (2.0 * (m * grid * PI * PI * t * t / (6.0 * delta)).ln()).max(0.0).sqrt();
                vec![v; gps.len()]
            }
            BetaSchedule::Sampled { mean } => {
                let grid = gps.first().map_or(1, |g| g.space().len()) as f64;
                let mut rng = stream_rng(seed, Stream::Beta, t as u64);
                let exp = Exp::new(1.0 / mean).expect("positive rate");
                let r: f64 = rng.sample(exp);
                let v = (2.0 * (m * grid / 2.0).ln() + r).max(0.0).sqrt();
                vec![v; gps.len()]
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::{JointSpace, KernelSpec, NoiseModel};
    use std::sync::Arc;

    fn gps(n: usize) -> Vec<GPState> {
        let space = Arc::new(JointSpace::new(vec![vec![0.0], vec![1.0]], vec![vec![0.0]]).unwrap());
        (0..n)
            .map(|_| {
                GPState::new(space.clone(), KernelSpec::gaussian(1.0, 1.0), NoiseModel::homoscedastic(0.1), 1e-10)
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn fixed_is_constant() {
        let s = BetaSchedule::default();
        assert_eq!(s.beta_sqrts(1, &gps(2), 0), vec![3.0, 3.0]);
        assert_eq!(s.beta_sqrts(50, &gps(2), 9), vec![3.0, 3.0]);
    }

    #[test]
    fn theoretical_at_prior() {
        let s = BetaSchedule::Theoretical {
            delta: 0.1,
            rkhs_bounds: Some(vec![2.0, 1.0]),
        };
        let b = s.beta_sqrts(1, &gps(2), 0);
        assert!((b[0] - (2.0 + (2.0 * 20f64.ln()).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn srinivas_grows_and_sampled_is_seeded() {
        let s = BetaSchedule::Srinivas { delta: 0.1 };
        assert!(s.beta_sqrts(10, &gps(2), 0)[0] > s.beta_sqrts(1, &gps(2), 0)[0]);
        let s = BetaSchedule::Sampled { mean: 1.0 };
        assert_eq!(s.beta_sqrts(3, &gps(2), 4), s.beta_sqrts(3, &gps(2), 4));
        assert!(s.beta_sqrts(3, &gps(2), 4)[0] >= (2.0 * 2f64.ln()).sqrt());
    }
}
