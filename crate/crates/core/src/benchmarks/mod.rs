//! Benchmark problems: standardized test functions, tabulation on joint
//! grids, ground-truth risk tables, desk-scale replication problems and
//! multi-trial experiment drivers.

mod experiments;
mod problems;
mod synthetic;
mod truth;

pub use experiments::{
    observation_curve, replicate_experiment, replicate_problem, Contender, CurveStats, ExperimentResult,
    MethodResult,
};
pub use problems::{
    desk_problem, rkhs_problem, rosenbrock_iu, two_objective_no_iu, zdt1_iu, ExperimentName, SYNTHETIC_NOISE,
};
pub use synthetic::{cube_grid, eval_synthetic, linspace, tabulate, InputMap, SyntheticKind};
pub use truth::{build_truth, discretized_normal, TruthTable};

use thiserror::Error;

use crate::gp::GpError;
use crate::optimizer::OptimizerError;
use crate::pareto::ParetoError;
use crate::risk::RiskError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchmarkError {
    #[error("{kind} expects {expected} inputs, got {found}")]
    Dimension {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error(transparent)]
    Gp(#[from] GpError),
    #[error(transparent)]
    Risk(#[from] RiskError),
    #[error(transparent)]
    Pareto(#[from] ParetoError),
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
}
