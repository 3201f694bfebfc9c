use serde::{Deserialize, Serialize};

use super::RiskError;

/// One risk measure applied to one objective.
///
/// Serialized flat: `{ kind = "var", alpha = 0.1, objective = 0 }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskSpec {
    #[serde(flatten)]
    pub kind: RiskKind,
    /// Objective `f^(m)` the measure reads. Ignored by `weighted_sum`, whose
    /// terms carry their own.
    #[serde(default)]
    pub objective: usize,
    /// RKHS norm bound `B_m`, used by the std/variance width functions and
    /// the theoretical beta schedule.
    #[serde(default = "default_rkhs_bound")]
    pub rkhs_bound: f64,
}

fn default_rkhs_bound() -> f64 {
    1.0
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RiskKind {
    /// Expectation.
    Bayes,
    /// Minimum over the support.
    WorstCase,
    /// Maximum over the support.
    BestCase,
    /// Lower `alpha`-quantile `inf{b : P(g <= b) >= alpha}`.
    Var { alpha: f64 },
    /// Mean of the lower `alpha` tail.
    Cvar { alpha: f64 },
    /// Mean absolute deviation `E|g - E g|`.
    Mad,
    Std,
    Variance,
    /// Infimum of the inner measure over an ambiguity set of distributions.
    DistRobust {
        inner: Box<RiskKind>,
        ambiguity: AmbiguitySet,
    },
    /// `h(inner)` for a monotone `K`-Lipschitz map `h`.
    Lipschitz {
        inner: Box<RiskKind>,
        map: MonotoneMap,
        constant: f64,
        #[serde(default = "default_true")]
        monotone: bool,
    },
    /// `sum_i coefficient_i * rho_i(f^(m_i))`.
    WeightedSum { terms: Vec<WeightedTerm> },
    /// `P(g >= theta)`.
    ProbThreshold { theta: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedTerm {
    pub coefficient: f64,
    pub risk: RiskSpec,
}

/// Candidate distributions, as weights aligned with a design's support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmbiguitySet {
    ExplicitList { distributions: Vec<Vec<f64>> },
    /// `{P : |P - center|_1 <= radius}`; `center` defaults to the design's
    /// environment weights.
    L1Ball {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
        radius: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneMap {
    Affine { scale: f64, offset: f64 },
    Tanh,
    Softplus,
}

impl MonotoneMap {
    pub fn apply(&self, v: f64) -> f64 {
        match *self {
            MonotoneMap::Affine { scale, offset } => scale * v + offset,
            MonotoneMap::Tanh => v.tanh(),
            MonotoneMap::Softplus => {
                if v > 30.0 {
                    v + (-v).exp().ln_1p()
                } else {
                    v.exp().ln_1p()
                }
            }
        }
    }

    /// Smallest valid Lipschitz constant.
    pub fn lipschitz_constant(&self) -> f64 {
        match *self {
            MonotoneMap::Affine { scale, .. } => scale.abs(),
            MonotoneMap::Tanh | MonotoneMap::Softplus => 1.0,
        }
    }
}

impl RiskSpec {
    pub fn new(kind: RiskKind, objective: usize) -> Self {
        Self {
            kind,
            objective,
            rkhs_bound: 1.0,
        }
    }

    pub fn with_rkhs_bound(mut self, b: f64) -> Self {
        self.rkhs_bound = b;
        self
    }

    pub fn bayes(objective: usize) -> Self {
        Self::new(RiskKind::Bayes, objective)
    }

    /// `-std`, expressed as an affine map of the standard deviation.
    pub fn negative_std(objective: usize) -> Self {
        Self::new(
            RiskKind::Lipschitz {
                inner: Box::new(RiskKind::Std),
                map: MonotoneMap::Affine {
                    scale: -1.0,
                    offset: 0.0,
                },
                constant: 1.0,
                monotone: true,
            },
            objective,
        )
    }

    /// True when the spec is plain `-std` (used by the moment-based baselines).
    pub fn is_negative_std(&self) -> bool {
        matches!(
            &self.kind,
            RiskKind::Lipschitz { inner, map: MonotoneMap::Affine { scale, offset }, .. }
                if **inner == RiskKind::Std && *scale == -1.0 && *offset == 0.0
        )
    }

    /// Objectives read by the spec, sorted and deduplicated.
    pub fn objectives(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_objectives(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_objectives(&self, out: &mut Vec<usize>) {
        match &self.kind {
            RiskKind::WeightedSum { terms } => {
                for t in terms {
                    t.risk.collect_objectives(out);
                }
            }
            _ => out.push(self.objective),
        }
    }

    /// Checks parameters, with `n_objectives` bounding objective indices.
    pub fn validate(&self, n_objectives: usize) -> Result<(), RiskError> {
        if !(self.rkhs_bound.is_finite() && self.rkhs_bound > 0.0) {
            return Err(RiskError::invalid("rkhs_bound", "must be > 0"));
        }
        if let RiskKind::WeightedSum { terms } = &self.kind {
            if terms.is_empty() {
                return Err(RiskError::invalid("terms", "must be nonempty"));
            }
            for t in terms {
                if !(t.coefficient.is_finite() && t.coefficient >= 0.0) {
                    return Err(RiskError::invalid("coefficient", "must be >= 0"));
                }
                t.risk.validate(n_objectives)?;
            }
            return Ok(());
        }
        if self.objective >= n_objectives {
            return Err(RiskError::invalid(
                "objective",
                format!("{} out of range for {n_objectives} objectives", self.objective),
            ));
        }
        self.kind.validate()
    }
}

impl RiskKind {
    pub fn tag(&self) -> &'static str {
        match self {
            RiskKind::Bayes => "bayes",
            RiskKind::WorstCase => "worst_case",
            RiskKind::BestCase => "best_case",
            RiskKind::Var { .. } => "var",
            RiskKind::Cvar { .. } => "cvar",
            RiskKind::Mad => "mad",
            RiskKind::Std => "std",
            RiskKind::Variance => "variance",
            RiskKind::DistRobust { .. } => "dist_robust",
            RiskKind::Lipschitz { .. } => "lipschitz",
            RiskKind::WeightedSum { .. } => "weighted_sum",
            RiskKind::ProbThreshold { .. } => "prob_threshold",
        }
    }

    /// Parameter checks that do not depend on the objective count.
    pub fn validate(&self) -> Result<(), RiskError> {
        match self {
            RiskKind::Var { alpha } | RiskKind::Cvar { alpha } => {
                if !(*alpha > 0.0 && *alpha < 1.0) {
                    return Err(RiskError::invalid("alpha", format!("{alpha} not in (0, 1)")));
                }
            }
            RiskKind::DistRobust { inner, ambiguity } => {
                inner.validate()?;
                match ambiguity {
                    AmbiguitySet::ExplicitList { distributions } => {
                        if distributions.is_empty() {
                            return Err(RiskError::invalid("distributions", "must be nonempty"));
                        }
                    }
                    AmbiguitySet::L1Ball { radius, .. } => {
                        if !(*radius >= 0.0 && *radius <= 2.0) {
                            return Err(RiskError::invalid("radius", format!("{radius} not in [0, 2]")));
                        }
                        if !matches!(
                            **inner,
                            RiskKind::Bayes | RiskKind::WorstCase | RiskKind::BestCase
                        ) {
                            return Err(RiskError::Unsupported(format!(
                                "l1_ball ambiguity with inner kind {}",
                                inner.tag()
                            )));
                        }
                    }
                }
            }
            RiskKind::Lipschitz {
                inner,
                map,
                constant,
                monotone,
            } => {
                if !monotone {
                    return Err(RiskError::NonMonotoneMap);
                }
                if !(constant.is_finite() && *constant > 0.0) {
                    return Err(RiskError::invalid("constant", "must be > 0"));
                }
                if *constant < map.lipschitz_constant() {
                    return Err(RiskError::invalid(
                        "constant",
                        format!("{constant} below the map's constant {}", map.lipschitz_constant()),
                    ));
                }
                if let MonotoneMap::Affine { scale, offset } = map {
                    if !(scale.is_finite() && offset.is_finite() && *scale != 0.0) {
                        return Err(RiskError::invalid("map", "affine scale must be finite and nonzero"));
                    }
                }
                inner.validate()?;
            }
            RiskKind::WeightedSum { .. } => {
                return Err(RiskError::Unsupported("weighted_sum as an inner measure".into()));
            }
            RiskKind::ProbThreshold { theta } if !theta.is_finite() => {
                return Err(RiskError::invalid("theta", "must be finite"));
            }
            _ => {}
        }
        Ok(())
    }
}
