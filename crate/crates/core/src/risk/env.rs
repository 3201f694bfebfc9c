use serde::{Deserialize, Serialize};

use super::RiskError;

/// Tolerance on the total mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Discrete distribution over a subset of the environment grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvDistribution {
    pub support: Vec<usize>,
    pub weights: Vec<f64>,
}

impl EnvDistribution {
    pub fn new(support: Vec<usize>, weights: Vec<f64>) -> Result<Self, RiskError> {
        let d = Self { support, weights };
        d.check_mass()?;
        Ok(d)
    }

    pub fn uniform(support: Vec<usize>) -> Result<Self, RiskError> {
        if support.is_empty() {
            return Err(RiskError::invalid("support", "must be nonempty"));
        }
        let w = 1.0 / support.len() as f64;
        let weights = vec![w; support.len()];
        Ok(Self { support, weights })
    }

    pub fn point_mass(index: usize) -> Self {
        Self {
            support: vec![index],
            weights: vec![1.0],
        }
    }

    /// Normalizes nonnegative `raw` masses.
    pub fn from_unnormalized(support: Vec<usize>, raw: &[f64]) -> Result<Self, RiskError> {
        if support.len() != raw.len() || support.is_empty() {
            return Err(RiskError::invalid("weights", "must match a nonempty support"));
        }
        if raw.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(RiskError::invalid("weights", "must be finite and nonnegative"));
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(RiskError::invalid("weights", "must have positive total mass"));
        }
        Ok(Self {
            support,
            weights: raw.iter().map(|w| w / total).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    fn check_mass(&self) -> Result<(), RiskError> {
        if self.support.is_empty() || self.support.len() != self.weights.len() {
            return Err(RiskError::invalid("weights", "must match a nonempty support"));
        }
        if self.weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(RiskError::invalid("weights", "must be finite and nonnegative"));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE * self.weights.len().max(1) as f64 {
            return Err(RiskError::invalid("weights", format!("sum to {total}, not 1")));
        }
        Ok(())
    }

    /// Checks normalization and that every support index is below `n_envs`
    /// and unique.
    pub fn validate(&self, n_envs: usize) -> Result<(), RiskError> {
        self.check_mass()?;
        let mut seen = vec![false; n_envs];
        for &s in &self.support {
            if s >= n_envs {
                return Err(RiskError::invalid(
                    "support",
                    format!("index {s} outside an environment grid of {n_envs}"),
                ));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(RiskError::invalid("support", format!("index {s} repeated")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvMode {
    Shared,
    PerDesign,
}

/// Provenance tag of the weights; informational only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistributionKind {
    Uniform,
    DiscretizedNormal,
    #[default]
    Explicit,
}

/// Environment distribution, shared by all designs or given per design (`Ω_x`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvModel {
    pub mode: EnvMode,
    #[serde(default)]
    pub kind: DistributionKind,
    /// One entry in shared mode, one per design otherwise.
    pub distributions: Vec<EnvDistribution>,
}

impl EnvModel {
    pub fn shared(kind: DistributionKind, dist: EnvDistribution) -> Self {
        Self {
            mode: EnvMode::Shared,
            kind,
            distributions: vec![dist],
        }
    }

    pub fn per_design(kind: DistributionKind, dists: Vec<EnvDistribution>) -> Self {
        Self {
            mode: EnvMode::PerDesign,
            kind,
            distributions: dists,
        }
    }

    /// Uniform over the whole environment grid.
    pub fn uniform(n_envs: usize) -> Result<Self, RiskError> {
        Ok(Self::shared(
            DistributionKind::Uniform,
            EnvDistribution::uniform((0..n_envs).collect())?,
        ))
    }

    pub fn for_design(&self, design: usize) -> &EnvDistribution {
        match self.mode {
            EnvMode::Shared => &self.distributions[0],
            EnvMode::PerDesign => &self.distributions[design],
        }
    }

    pub fn validate(&self, n_designs: usize, n_envs: usize) -> Result<(), RiskError> {
        let expected = match self.mode {
            EnvMode::Shared => 1,
            EnvMode::PerDesign => n_designs,
        };
        if self.distributions.len() != expected {
            return Err(RiskError::invalid(
                "distributions",
                format!("expected {expected} entries, got {}", self.distributions.len()),
            ));
        }
        self.distributions.iter().try_for_each(|d| d.validate(n_envs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_and_out_of_range() {
        assert!(EnvDistribution::new(vec![0, 1], vec![0.5, 0.6]).is_err());
        let d = EnvDistribution::uniform(vec![0, 3]).unwrap();
        assert!(d.validate(3).is_err());
        assert!(d.validate(4).is_ok());
        assert!(EnvDistribution::uniform(vec![1, 1]).unwrap().validate(2).is_err());
    }

    #[test]
    fn per_design_lookup() {
        let m = EnvModel::per_design(
            DistributionKind::Explicit,
            vec![EnvDistribution::point_mass(0), EnvDistribution::point_mass(2)],
        );
        assert_eq!(m.for_design(1).support, vec![2]);
        assert!(m.validate(2, 3).is_ok());
        assert!(m.validate(3, 3).is_err());
    }
}
