//! TOML run configuration.
//!
//! A config holds either a `[problem]` section (one optimizer run per
//! trial) or a `[benchmark]` section (a named replication experiment).
//! Minimal example:
//!
//! ```toml
//! seed = 1
//!
//! [problem]
//! budget = 20
//! design = { lower = [-5.0, -5.0], upper = [5.0, 5.0], points = 10 }
//! objectives = [{ function = "booth" }, { function = "matyas" }]
//! risks = [{ kind = "bayes", objective = 0 }, { kind = "bayes", objective = 1 }]
//! ```

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ConfigError;
use crate::benchmarks::{discretized_normal, linspace, tabulate, Contender, ExperimentName, InputMap, SyntheticKind};
use crate::gp::{median_heuristic, GpError, JointSpace, KernelSpec, NoiseModel};
use crate::optimizer::{BetaSchedule, BoundMethod, ErrorParams, Mode, ObjectiveSpec, OptimizerError, ProblemSpec};
use crate::risk::{DistributionKind, EnvDistribution, EnvModel, RiskError, RiskSpec};

fn default_trials() -> usize {
    1
}
fn default_budget() -> usize {
    50
}
fn default_initial() -> usize {
    1
}
fn default_jitter() -> f64 {
    1e-10
}
fn default_noise() -> NoiseSpec {
    NoiseSpec::Constant(1e-6)
}
fn default_one() -> f64 {
    1.0
}
fn default_dir() -> String {
    "out".to_string()
}
fn default_formats() -> Vec<OutputFormat> {
    vec![OutputFormat::Csv, OutputFormat::Json]
}
fn default_true() -> bool {
    true
}

/// Full run configuration with defaults filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Point-selection rule for problem runs.
    #[serde(default = "default_method")]
    pub method: Contender,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<BenchmarkSection>,
    #[serde(default)]
    pub gp: GpSection,
    #[serde(default)]
    pub schedule: BetaSchedule,
    #[serde(default)]
    pub output: OutputSection,
}

fn default_method() -> Contender {
    Contender::Proposed
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub design: GridSpec,
    /// Absent for problems without an environment variable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env: Option<EnvSection>,
    pub objectives: Vec<ObjectiveSection>,
    pub risks: Vec<RiskSpec>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub bound_method: BoundMethod,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "default_initial")]
    pub initial_points: usize,
    #[serde(default)]
    pub error_params: ErrorParams,
}

/// Grid of points: a box `[lower, upper]` with `points` per axis, or
/// explicit `values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub distribution: DistributionSpec,
}

impl EnvSection {
    pub fn grid(&self) -> GridSpec {
        GridSpec {
            lower: self.lower.clone(),
            upper: self.upper.clone(),
            points: self.points,
            values: self.values.clone(),
        }
    }
}

/// Environment weights.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    #[default]
    Uniform,
    DiscretizedNormal,
    /// Shared unnormalized weights over the environment grid.
    Explicit { weights: Vec<f64> },
    /// One weight row per design.
    PerDesign { weights: Vec<Vec<f64>> },
}

/// An objective given by a test function or by tabulated values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<SyntheticKind>,
    /// How `(x, w)` becomes the function input; `design` without an
    /// environment grid, `concat` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<InputMap>,
    /// Flat design-major values over the joint grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GpSection {
    #[serde(default = "default_jitter")]
    pub jitter: f64,
    /// Per objective; missing entries take the defaults.
    #[serde(default)]
    pub objectives: Vec<GpObjective>,
}

impl Default for GpSection {
    fn default() -> Self {
        Self {
            jitter: default_jitter(),
            objectives: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GpObjective {
    /// Median heuristic over the joint grid when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_scale: Option<f64>,
    #[serde(default = "default_one")]
    pub variance: f64,
    #[serde(default = "default_one")]
    pub scaling: f64,
    #[serde(default = "default_noise")]
    pub noise: NoiseSpec,
}

impl Default for GpObjective {
    fn default() -> Self {
        Self {
            length_scale: None,
            variance: 1.0,
            scaling: 1.0,
            noise: default_noise(),
        }
    }
}

/// A constant noise variance or one per joint grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    Constant(f64),
    PerPoint(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkSection {
    pub experiment: ExperimentName,
    #[serde(default = "default_budget")]
    pub budget: usize,
    #[serde(default = "all_contenders")]
    pub methods: Vec<Contender>,
}

fn all_contenders() -> Vec<Contender> {
    Contender::ALL.to_vec()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub directory: String,
    #[serde(default = "default_formats")]
    pub formats: Vec<OutputFormat>,
    /// Compute exact risk values for discrepancy and regret columns.
    #[serde(default = "default_true")]
    pub truth: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: default_dir(),
            formats: default_formats(),
            truth: true,
        }
    }
}

/// 1-based line of the first `key = ...` assignment in `text`.
pub fn locate_key(text: &str, key: &str) -> Option<usize> {
    for (i, line) in text.lines().enumerate() {
        let mut start = 0;
        while let Some(pos) = line[start..].find(key) {
            let at = start + pos;
            let before_ok = line[..at]
                .chars()
                .next_back()
                .is_none_or(|c| !(c.is_alphanumeric() || c == '_'));
            let rest = line[at + key.len()..].trim_start();
            if before_ok && rest.starts_with('=') {
                return Some(i + 1);
            }
            start = at + key.len();
        }
    }
    None
}

/// Parses and validates `text`. Diagnostics name the offending field and,
/// when it can be found, its line.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start.min(text.len())].lines().count().max(1));
        ConfigError {
            field: None,
            line,
            message: e.message().trim().to_string(),
        }
    })?;
    config.validate().map_err(|mut e| {
        if let Some(f) = &e.field {
            e.line = locate_key(text, f);
        }
        e
    })?;
    Ok(config)
}

/// Canonical TOML with every default written out.
pub fn to_toml(config: &RunConfig) -> String {
    toml::to_string(config).expect("config serializes")
}

fn field_err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: Some(field.to_string()),
        line: None,
        message: message.into(),
    }
}

fn from_risk(e: RiskError) -> ConfigError {
    match e {
        RiskError::InvalidParameter { field, message } => field_err(&field, message),
        other => field_err("risks", other.to_string()),
    }
}

fn from_gp(e: GpError, field: &str) -> ConfigError {
    field_err(field, e.to_string())
}

impl GridSpec {
    pub fn points(&self, name: &str) -> Result<Vec<Vec<f64>>, ConfigError> {
        match (&self.values, &self.lower, &self.upper, self.points) {
            (Some(v), None, None, None) => {
                if v.is_empty() {
                    return Err(field_err("values", format!("{name} grid is empty")));
                }
                let d = v[0].len();
                if v.iter().any(|p| p.len() != d || p.iter().any(|c| !c.is_finite())) {
                    return Err(field_err("values", format!("{name} points need equal dimension and finite entries")));
                }
                Ok(v.clone())
            }
            (None, Some(lo), Some(hi), Some(n)) => {
                if lo.len() != hi.len() || lo.is_empty() {
                    return Err(field_err("upper", format!("{name} lower and upper need equal nonzero length")));
                }
                if n == 0 {
                    return Err(field_err("points", format!("{name} needs points >= 1")));
                }
                if lo.iter().zip(hi).any(|(a, b)| !(a.is_finite() && b.is_finite() && a <= b)) {
                    return Err(field_err("lower", format!("{name} needs finite lower <= upper")));
                }
                let mut out: Vec<Vec<f64>> = vec![Vec::new()];
                for (a, b) in lo.iter().zip(hi) {
                    let axis = linspace(*a, *b, n);
                    out = out
                        .into_iter()
                        .flat_map(|p| {
                            axis.iter().map(move |&v| {
                                let mut q = p.clone();
                                q.push(v);
                                q
                            })
                        })
                        .collect();
                }
                Ok(out)
            }
            _ => Err(field_err(
                "points",
                format!("{name} grid needs either values or lower, upper and points"),
            )),
        }
    }
}

impl RunConfig {
    /// Semantic checks beyond the TOML schema.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(field_err("trials", "must be >= 1"));
        }
        if self.output.directory.is_empty() {
            return Err(field_err("directory", "must not be empty"));
        }
        match (&self.problem, &self.benchmark) {
            (Some(_), None) => self.problem_spec().map(|_| ()),
            (None, Some(b)) => {
                if b.methods.is_empty() {
                    return Err(field_err("methods", "must not be empty"));
                }
                Ok(())
            }
            _ => Err(field_err("problem", "exactly one of [problem] and [benchmark] is required")),
        }
    }

    /// Builds the optimizer problem from the `[problem]` section.
    pub fn problem_spec(&self) -> Result<ProblemSpec, ConfigError> {
        let p = self
            .problem
            .as_ref()
            .ok_or_else(|| field_err("problem", "section missing"))?;
        let designs = p.design.points("design")?;
        let space = match &p.env {
            Some(e) => JointSpace::new(designs, e.grid().points("env")?),
            None => JointSpace::design_only(designs),
        }
        .map_err(|e| from_gp(e, "design"))?;

        let env_model = match p.env.as_ref().map(|e| &e.distribution) {
            None | Some(DistributionSpec::Uniform) => EnvModel::uniform(space.n_envs()).map_err(from_risk)?,
            Some(DistributionSpec::DiscretizedNormal) => {
                discretized_normal(space.envs()).map_err(|e| field_err("distribution", e.to_string()))?
            }
            Some(DistributionSpec::Explicit { weights }) => {
                if weights.len() != space.n_envs() {
                    return Err(field_err(
                        "weights",
                        format!("{} weights for {} environment points", weights.len(), space.n_envs()),
                    ));
                }
                let d = EnvDistribution::from_unnormalized((0..space.n_envs()).collect(), weights)
                    .map_err(|e| field_err("weights", e.to_string()))?;
                EnvModel::shared(DistributionKind::Explicit, d)
            }
            Some(DistributionSpec::PerDesign { weights }) => {
                if weights.len() != space.n_designs() || weights.iter().any(|w| w.len() != space.n_envs()) {
                    return Err(field_err("weights", "need one row of n_envs weights per design"));
                }
                let dists = weights
                    .iter()
                    .map(|w| EnvDistribution::from_unnormalized((0..space.n_envs()).collect(), w))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| field_err("weights", e.to_string()))?;
                EnvModel::per_design(DistributionKind::Explicit, dists)
            }
        };

        if p.objectives.is_empty() {
            return Err(field_err("objectives", "at least one objective is required"));
        }
        if self.gp.objectives.len() > p.objectives.len() {
            return Err(field_err("objectives", "more [gp] objective entries than problem objectives"));
        }
        let mut median = None;
        let mut objectives = Vec::with_capacity(p.objectives.len());
        for (m, o) in p.objectives.iter().enumerate() {
            let values = match (&o.function, &o.values) {
                (Some(kind), None) => {
                    let default_map = if p.env.is_some() { InputMap::Concat } else { InputMap::Design };
                    let map = o.input.clone().unwrap_or(default_map);
                    tabulate(*kind, &map, &space).map_err(|e| field_err("function", format!("objective {m}: {e}")))?
                }
                (None, Some(v)) => {
                    if v.len() != space.len() {
                        return Err(field_err(
                            "values",
                            format!("objective {m} has {} values for {} grid points", v.len(), space.len()),
                        ));
                    }
                    v.clone()
                }
                _ => {
                    return Err(field_err(
                        "function",
                        format!("objective {m} needs exactly one of function and values"),
                    ))
                }
            };
            let g = self.gp.objectives.get(m).cloned().unwrap_or_default();
            let ls = match g.length_scale {
                Some(l) => l,
                None => *median.get_or_insert_with(|| {
                    let pts: Vec<Vec<f64>> = (0..space.len())
                        .map(|f| {
                            let q = space.point(f);
                            space.design(q.design_index).iter().chain(space.env(q.env_index)).copied().collect()
                        })
                        .collect();
                    median_heuristic(&pts)
                }),
            };
            let kernel = KernelSpec::gaussian(ls, g.variance).with_scaling(g.scaling);
            kernel.validate().map_err(|e| from_gp(e, "length_scale"))?;
            let noise = match g.noise {
                NoiseSpec::Constant(v) => NoiseModel::homoscedastic(v),
                NoiseSpec::PerPoint(v) => {
                    let lower = v.iter().copied().fold(f64::INFINITY, f64::min);
                    let upper = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    NoiseModel::Heteroscedastic { variances: v, lower, upper }
                }
            };
            noise.validate(&space).map_err(|e| from_gp(e, "noise"))?;
            objectives.push(ObjectiveSpec { values, kernel, noise });
        }

        for r in &p.risks {
            r.validate(objectives.len()).map_err(from_risk)?;
        }
        if p.risks.len() < 2 {
            return Err(field_err("risks", "at least 2 risk measures are required"));
        }
        if !(p.epsilon >= 0.0) {
            return Err(field_err("epsilon", "must be >= 0"));
        }
        if !(self.gp.jitter.is_finite() && self.gp.jitter >= 0.0) {
            return Err(field_err("jitter", "must be finite and >= 0"));
        }
        if let BoundMethod::Sampling { samples: 0 } = p.bound_method {
            return Err(field_err("samples", "must be >= 1"));
        }
        let spec = ProblemSpec {
            space: Arc::new(space),
            env_model,
            objectives,
            risks: p.risks.clone(),
            mode: p.mode,
            bound_method: p.bound_method,
            epsilon: p.epsilon,
            budget: p.budget,
            initial_points: p.initial_points,
            error_params: p.error_params,
            beta: self.schedule.clone(),
            jitter: self.gp.jitter,
        };
        spec.validate().map_err(|e| match e {
            OptimizerError::Risk(r) => from_risk(r),
            OptimizerError::Config(msg) => {
                let field = ["eps_lcb", "eps_ucb", "eps_pf", "eps_x", "eps_omega", "delta", "rkhs_bounds", "mean", "value"]
                    .into_iter()
                    .find(|f| msg.contains(f))
                    .unwrap_or("problem");
                field_err(field, msg)
            }
            other => field_err("problem", other.to_string()),
        })?;
        Ok(spec)
    }
}
