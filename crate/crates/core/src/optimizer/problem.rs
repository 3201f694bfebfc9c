use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::beta::BetaSchedule;
use super::OptimizerError;
use crate::gp::{JointPoint, JointSpace, KernelSpec, NoiseModel};
use crate::risk::{EnvModel, RiskSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// The environment variable is chosen by the optimizer.
    #[default]
    Simulator,
    /// The environment variable is drawn from its distribution.
    Uncontrollable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundMethod {
    #[default]
    Decomposition,
    Sampling { samples: usize },
}

/// Nonnegative slack terms entering the accuracy guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ErrorParams {
    pub eps_lcb: f64,
    pub eps_ucb: f64,
    pub eps_pf: f64,
    pub eps_x: f64,
    pub eps_omega: f64,
}

impl ErrorParams {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        for (name, v) in [
            ("eps_lcb", self.eps_lcb),
            ("eps_ucb", self.eps_ucb),
            ("eps_pf", self.eps_pf),
            ("eps_x", self.eps_x),
            ("eps_omega", self.eps_omega),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(OptimizerError::Config(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        Ok(())
    }
}

/// One black-box objective: its values on the joint grid (observed with
/// Gaussian noise of the model's variance) and its GP prior.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    /// Noise-free values, flat over the joint grid (design-major).
    pub values: Vec<f64>,
    pub kernel: KernelSpec,
    pub noise: NoiseModel,
}

/// A fully specified run.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub space: Arc<JointSpace>,
    pub env_model: EnvModel,
    pub objectives: Vec<ObjectiveSpec>,
    pub risks: Vec<RiskSpec>,
    pub mode: Mode,
    pub bound_method: BoundMethod,
    pub epsilon: f64,
    /// Maximum number of loop observations (initial points excluded).
    pub budget: usize,
    /// Random `(x, w)` observations taken before the loop.
    pub initial_points: usize,
    pub error_params: ErrorParams,
    pub beta: BetaSchedule,
    /// Relative diagonal jitter.
    pub jitter: f64,
}

impl ProblemSpec {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        let g = self.space.len();
        if self.risks.len() < 2 {
            return Err(OptimizerError::Config(format!(
                "need at least 2 risk measures, got {}",
                self.risks.len()
            )));
        }
        if self.objectives.is_empty() {
            return Err(OptimizerError::Config("no objectives".into()));
        }
        for (m, o) in self.objectives.iter().enumerate() {
            if o.values.len() != g {
                return Err(OptimizerError::Config(format!(
                    "objective {m} has {} values for a grid of {g}",
                    o.values.len()
                )));
            }
            if let Some(v) = o.values.iter().find(|v| !v.is_finite()) {
                return Err(OptimizerError::Config(format!("objective {m} has non-finite value {v}")));
            }
            o.kernel.validate()?;
            o.noise.validate(&self.space)?;
        }
        for r in &self.risks {
            r.validate(self.objectives.len())?;
        }
        self.env_model
            .validate(self.space.n_designs(), self.space.n_envs())?;
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(OptimizerError::Config(format!("epsilon = {} must be >= 0", self.epsilon)));
        }
        if let BoundMethod::Sampling { samples } = self.bound_method {
            if samples == 0 {
                return Err(OptimizerError::Config("sampling needs samples >= 1".into()));
            }
        }
        if !(self.jitter.is_finite() && self.jitter >= 0.0) {
            return Err(OptimizerError::Config("jitter must be >= 0".into()));
        }
        self.error_params.validate()?;
        self.beta.validate()?;
        Ok(())
    }

    pub fn n_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn n_risks(&self) -> usize {
        self.risks.len()
    }

    pub fn value(&self, m: usize, p: JointPoint) -> f64 {
        self.objectives[m].values[self.space.flat(p)]
    }

    /// Whether any risk lacks a width function.
    pub fn has_prob_threshold(&self) -> bool {
        self.risks
            .iter()
            .any(|r| crate::risk::q_function(r, 0.0).is_err())
    }
}
