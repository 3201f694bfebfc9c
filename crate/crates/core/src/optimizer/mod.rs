//! The bounding-box loop: per-iteration credible boxes, estimated Pareto
//! set, maximin design choice, variance-driven environment choice, epsilon
//! stopping, diagnostics and baselines.

mod baselines;
mod beta;
mod history;
mod problem;
mod report;
mod run;
mod select;

pub use baselines::{run_baseline, BaselineKind, NAIVE_DRAWS};
pub use beta::BetaSchedule;
pub use history::{GuaranteeReport, IterationRecord, RunHistory, StopReason};
pub use problem::{BoundMethod, ErrorParams, Mode, ObjectiveSpec, ProblemSpec};
pub use report::{guarantee_report, termination_bound, uncertainty_width};
pub use run::{Method, Optimizer};
pub use select::{acquisition_values, sample_env_uncontrollable, select_design, select_env};

use thiserror::Error;

use crate::gp::GpError;
use crate::pareto::ParetoError;
use crate::risk::RiskError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Gp(#[from] GpError),
    #[error(transparent)]
    Risk(#[from] RiskError),
    #[error(transparent)]
    Pareto(#[from] ParetoError),
}

impl OptimizerError {
    /// Numerical failure (as opposed to a bad configuration).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            OptimizerError::Gp(GpError::Factorization { .. })
                | OptimizerError::Risk(RiskError::Gp(GpError::Factorization { .. }))
        )
    }
}
