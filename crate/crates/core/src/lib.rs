//! Pareto front identification for risk measures of black-box functions
//! under input uncertainty.
//!
//! Each objective `f(x, w)` is modelled by a Gaussian process over the joint
//! design × environment grid. Posterior credible bands `[mu - b*sigma, mu + b*sigma]`
//! are pushed through a risk measure to obtain a credible interval per design
//! point; the product of those intervals is a bounding box, and the next
//! design is chosen by the maximin distance between its optimistic corner and
//! the region dominated by the pessimistic Pareto front.
//!
//! Module map:
//!
//! - [`gp`]: kernels, exact posterior (homo- and heteroscedastic noise),
//!   incremental Cholesky updates, posterior path sampling, information gain.
//! - [`risk`]: environment distributions, risk-measure specs, interval bounds
//!   by decomposition and by sampling, width functions `q(a)`.
//! - [`pareto`]: dominance, fronts, the maximin acquisition distance,
//!   bounding-box tables, inference discrepancy, hypervolume.
//! - [`optimizer`]: the outer loop, beta schedules, stopping, baselines.
//! - [`benchmarks`]: synthetic test functions, truth tables, experiment harness.
//! - [`cli`]: configuration parsing and output writers.

pub mod benchmarks;
pub mod cli;
pub mod gp;
pub mod optimizer;
pub mod pareto;
pub mod risk;
pub mod rng;

pub use gp::{GPState, JointPoint, JointSpace, KernelSpec, NoiseModel};
pub use optimizer::{Optimizer, ProblemSpec, RunHistory};
pub use pareto::{BoxTable, ObjectiveVector, ParetoSet};
pub use risk::{Band, EnvModel, RiskInterval, RiskSpec};
