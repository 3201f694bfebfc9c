//! Gaussian-process surrogate over a finite joint design × environment grid.

mod kernel;
pub(crate) mod linalg;
mod state;

pub use kernel::{median_heuristic, KernelKind, KernelSpec};
pub use state::{GPState, REBUILD_INTERVAL};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the GP layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GpError {
    #[error("factorization failed after escalating jitter to {jitter:e}")]
    Factorization { jitter: f64 },
    #[error("joint point ({design}, {env}) outside the {n_designs} x {n_envs} grid")]
    OutOfGrid {
        design: usize,
        env: usize,
        n_designs: usize,
        n_envs: usize,
    },
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),
    #[error("sample request needs a nonempty slice and count >= 1")]
    EmptySample,
}

/// A `(design, environment)` pair addressed by grid indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct JointPoint {
    pub design_index: usize,
    pub env_index: usize,
}

impl JointPoint {
    pub fn new(design_index: usize, env_index: usize) -> Self {
        Self {
            design_index,
            env_index,
        }
    }
}

/// Coordinates of the design grid X and the environment grid Ω.
///
/// An environment grid holding a single zero-dimensional point models the
/// no-uncertainty case: the kernel then only sees the design coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSpace {
    designs: Vec<Vec<f64>>,
    envs: Vec<Vec<f64>>,
}

impl JointSpace {
    pub fn new(designs: Vec<Vec<f64>>, envs: Vec<Vec<f64>>) -> Result<Self, GpError> {
        if designs.is_empty() || envs.is_empty() {
            return Err(GpError::InvalidKernel("empty design or environment grid".into()));
        }
        let dx = designs[0].len();
        let dw = envs[0].len();
        if designs.iter().any(|d| d.len() != dx) || envs.iter().any(|w| w.len() != dw) {
            return Err(GpError::InvalidKernel("ragged grid coordinates".into()));
        }
        Ok(Self { designs, envs })
    }

    /// Design-only space (no environment variable).
    pub fn design_only(designs: Vec<Vec<f64>>) -> Result<Self, GpError> {
        Self::new(designs, vec![Vec::new()])
    }

    pub fn n_designs(&self) -> usize {
        self.designs.len()
    }

    pub fn n_envs(&self) -> usize {
        self.envs.len()
    }

    pub fn len(&self) -> usize {
        self.designs.len() * self.envs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn design(&self, i: usize) -> &[f64] {
        &self.designs[i]
    }

    pub fn env(&self, i: usize) -> &[f64] {
        &self.envs[i]
    }

    pub fn designs(&self) -> &[Vec<f64>] {
        &self.designs
    }

    pub fn envs(&self) -> &[Vec<f64>] {
        &self.envs
    }

    /// Row-major flat index, design-major.
    pub fn flat(&self, p: JointPoint) -> usize {
        p.design_index * self.envs.len() + p.env_index
    }

    pub fn point(&self, flat: usize) -> JointPoint {
        JointPoint::new(flat / self.envs.len(), flat % self.envs.len())
    }

    pub fn check(&self, p: JointPoint) -> Result<(), GpError> {
        if p.design_index < self.designs.len() && p.env_index < self.envs.len() {
            Ok(())
        } else {
            Err(GpError::OutOfGrid {
                design: p.design_index,
                env: p.env_index,
                n_designs: self.designs.len(),
                n_envs: self.envs.len(),
            })
        }
    }

    /// Squared Euclidean distance between the concatenated `(x, w)` coordinates.
    pub fn sq_dist(&self, a: JointPoint, b: JointPoint) -> f64 {
        sq(&self.designs[a.design_index], &self.designs[b.design_index])
            + sq(&self.envs[a.env_index], &self.envs[b.env_index])
    }
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Observation noise assumed by the GP.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    /// One variance for every point. Zero is allowed (noiseless evaluations;
    /// the jitter keeps the system solvable).
    Homoscedastic { variance: f64 },
    /// Per-point variances over the flattened joint grid, all inside `[lower, upper]`.
    Heteroscedastic {
        variances: Vec<f64>,
        lower: f64,
        upper: f64,
    },
}

impl NoiseModel {
    pub fn homoscedastic(variance: f64) -> Self {
        NoiseModel::Homoscedastic { variance }
    }

    pub fn validate(&self, space: &JointSpace) -> Result<(), GpError> {
        match self {
            NoiseModel::Homoscedastic { variance } => {
                if !(variance.is_finite() && *variance >= 0.0) {
                    return Err(GpError::InvalidNoise(format!("variance {variance} must be >= 0")));
                }
            }
            NoiseModel::Heteroscedastic {
                variances,
                lower,
                upper,
            } => {
                if !(*lower > 0.0 && lower <= upper) {
                    return Err(GpError::InvalidNoise(format!(
                        "bounds [{lower}, {upper}] must satisfy 0 < lower <= upper"
                    )));
                }
                if variances.len() != space.len() {
                    return Err(GpError::InvalidNoise(format!(
                        "{} variances for a grid of {} points",
                        variances.len(),
                        space.len()
                    )));
                }
                if let Some(v) = variances.iter().find(|v| !(**v >= *lower && **v <= *upper)) {
                    return Err(GpError::InvalidNoise(format!(
                        "variance {v} outside [{lower}, {upper}]"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn variance_at(&self, space: &JointSpace, p: JointPoint) -> f64 {
        match self {
            NoiseModel::Homoscedastic { variance } => *variance,
            NoiseModel::Heteroscedastic { variances, .. } => variances[space.flat(p)],
        }
    }

    /// Largest variance the model can assign.
    pub fn max_variance(&self) -> f64 {
        match self {
            NoiseModel::Homoscedastic { variance } => *variance,
            NoiseModel::Heteroscedastic { upper, .. } => *upper,
        }
    }
}
