use serde::{Deserialize, Serialize};

use super::GpError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    #[default]
    Gaussian,
}

/// Squared-exponential kernel
/// `k(a, b) = variance / scaling * exp(-|a - b|^2 / length_scale)`.
///
/// `length_scale` is the plain divisor of the squared distance (no factor 2),
/// matching `exp(-|θ - θ'|^2 / 0.2)` style parameterisations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(default)]
    pub kind: KernelKind,
    pub length_scale: f64,
    #[serde(default = "one")]
    pub variance: f64,
    #[serde(default = "one")]
    pub scaling: f64,
}

fn one() -> f64 {
    1.0
}

impl KernelSpec {
    pub fn gaussian(length_scale: f64, variance: f64) -> Self {
        Self {
            kind: KernelKind::Gaussian,
            length_scale,
            variance,
            scaling: 1.0,
        }
    }

    pub fn with_scaling(mut self, scaling: f64) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn validate(&self) -> Result<(), GpError> {
        for (name, v) in [
            ("length_scale", self.length_scale),
            ("variance", self.variance),
            ("scaling", self.scaling),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(GpError::InvalidKernel(format!("{name} = {v} must be > 0")));
            }
        }
        Ok(())
    }

    /// Kernel value at zero lag.
    pub fn prior_variance(&self) -> f64 {
        self.variance / self.scaling
    }

    pub fn eval_sq(&self, sq_dist: f64) -> f64 {
        match self.kind {
            KernelKind::Gaussian => self.prior_variance() * (-sq_dist / self.length_scale).exp(),
        }
    }
}

/// Median heuristic `0.5 * median{|a_i - a_j|^2 : i < j}` for the length scale.
pub fn median_heuristic(points: &[Vec<f64>]) -> f64 {
    let mut d = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d.push(
                points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>(),
            );
        }
    }
    if d.is_empty() {
        return 1.0;
    }
    d.sort_by(f64::total_cmp);
    let n = d.len();
    let med = if n % 2 == 1 {
        d[n / 2]
    } else {
        0.5 * (d[n / 2 - 1] + d[n / 2])
    };
    if med > 0.0 {
        0.5 * med
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_lag_is_variance_over_scaling() {
        let k = KernelSpec::gaussian(0.3, 25.0).with_scaling(5.0);
        assert_eq!(k.eval_sq(0.0), 5.0);
        assert!(k.eval_sq(1.0) < 5.0);
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(KernelSpec::gaussian(0.0, 1.0).validate().is_err());
        assert!(KernelSpec::gaussian(1.0, -1.0).validate().is_err());
        assert!(KernelSpec::gaussian(1.0, 1.0).with_scaling(0.0).validate().is_err());
    }

    #[test]
    fn median_heuristic_on_line() {
        // pairwise squared distances of {0, 1, 2}: 1, 4, 1 -> median 1
        let pts = vec![vec![0.0], vec![1.0], vec![2.0]];
        assert_eq!(median_heuristic(&pts), 0.5);
    }
}
