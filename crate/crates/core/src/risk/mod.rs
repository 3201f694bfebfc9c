//! Risk measures over a discrete environment distribution and their credible
//! intervals given a pointwise band `[l, u]` on the underlying function.

mod decomposition;
mod env;
pub mod evaluate;
mod q;
mod sampling;
mod spec;

pub use decomposition::{bound_decomposition, bound_decomposition_with_notes, BoundNotes};
pub use env::{DistributionKind, EnvDistribution, EnvMode, EnvModel, MASS_TOLERANCE};
pub use evaluate::{evaluate, evaluate_kind};
pub use q::{box_width_bound_check, q_function, WIDTH_TOLERANCE};
pub use sampling::{bound_sampling, posterior_band, SampledBound};
pub use spec::{AmbiguitySet, MonotoneMap, RiskKind, RiskSpec, WeightedTerm};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gp::GpError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiskError {
    #[error("invalid {field}: {message}")]
    InvalidParameter { field: String, message: String },
    #[error("lipschitz map must be flagged monotone")]
    NonMonotoneMap,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("shape mismatch: {0}")]
    Mismatch(String),
    #[error("lower bound {lower} exceeds upper bound {upper}")]
    Inverted { lower: f64, upper: f64 },
    #[error(transparent)]
    Gp(#[from] GpError),
}

impl RiskError {
    pub(crate) fn invalid(field: &str, message: impl Into<String>) -> Self {
        RiskError::InvalidParameter {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

/// Pointwise function band over a support, `lower[i] <= upper[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Band {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, RiskError> {
        if lower.len() != upper.len() {
            return Err(RiskError::Mismatch(format!(
                "band lower has {} entries, upper {}",
                lower.len(),
                upper.len()
            )));
        }
        if let Some((l, u)) = lower.iter().zip(&upper).find(|(l, u)| !(l <= u)) {
            return Err(RiskError::Inverted { lower: *l, upper: *u });
        }
        Ok(Self { lower, upper })
    }

    /// Zero-width band at `g`.
    pub fn exact(g: Vec<f64>) -> Self {
        Self {
            lower: g.clone(),
            upper: g,
        }
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// Largest pointwise width.
    pub fn max_width(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .fold(0.0, f64::max)
    }
}

/// Credible interval `[lcb, ucb]` for one risk value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskInterval {
    pub lcb: f64,
    pub ucb: f64,
}

impl RiskInterval {
    pub fn new(lcb: f64, ucb: f64) -> Result<Self, RiskError> {
        if !(lcb <= ucb) {
            return Err(RiskError::Inverted { lower: lcb, upper: ucb });
        }
        Ok(Self { lcb, ucb })
    }

    /// For bounds that are ordered by construction; rounding slack is absorbed.
    pub(crate) fn new_unchecked(lcb: f64, ucb: f64) -> Self {
        Self { lcb, ucb: ucb.max(lcb) }
    }

    pub fn width(&self) -> f64 {
        self.ucb - self.lcb
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lcb - tol && v <= self.ucb + tol
    }
}
