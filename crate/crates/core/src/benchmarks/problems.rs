use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::synthetic::{cube_grid, linspace, tabulate, InputMap, SyntheticKind};
use super::truth::discretized_normal;
use super::BenchmarkError;
use crate::gp::{JointSpace, KernelSpec, NoiseModel};
use crate::optimizer::{BetaSchedule, BoundMethod, ErrorParams, Mode, ObjectiveSpec, ProblemSpec};
use crate::risk::{EnvModel, RiskSpec};
use crate::rng::{stream_rng, Stream};

/// Observation noise variance used by the synthetic problems.
pub const SYNTHETIC_NOISE: f64 = 1e-6;

/// Desk-scale replication problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentName {
    /// Bayes risk of both ZDT1 objectives at `x + w`, uniform `w`.
    Zdt1Iu,
    /// Mean and negative std of a 6-D Rosenbrock over a discretized normal `w`.
    RosenbrockIu,
    /// Booth and Matyas without environment variable.
    TwoObjectiveNoIu,
}

impl ExperimentName {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentName::Zdt1Iu => "zdt1_iu",
            ExperimentName::RosenbrockIu => "rosenbrock_iu",
            ExperimentName::TwoObjectiveNoIu => "two_objective_no_iu",
        }
    }
}

impl FromStr for ExperimentName {
    type Err = BenchmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zdt1_iu" => Ok(ExperimentName::Zdt1Iu),
            "rosenbrock_iu" => Ok(ExperimentName::RosenbrockIu),
            "two_objective_no_iu" => Ok(ExperimentName::TwoObjectiveNoIu),
            other => Err(BenchmarkError::UnknownExperiment(other.to_string())),
        }
    }
}

fn base_problem(
    space: JointSpace,
    env_model: EnvModel,
    objectives: Vec<ObjectiveSpec>,
    risks: Vec<RiskSpec>,
    budget: usize,
) -> ProblemSpec {
    ProblemSpec {
        space: Arc::new(space),
        env_model,
        objectives,
        risks,
        mode: Mode::Simulator,
        bound_method: BoundMethod::Decomposition,
        epsilon: 0.0,
        budget,
        initial_points: 1,
        error_params: ErrorParams::default(),
        beta: BetaSchedule::default(),
        jitter: 1e-10,
    }
}

fn synthetic_objective(
    kind: SyntheticKind,
    map: &InputMap,
    space: &JointSpace,
    kernel: KernelSpec,
) -> Result<ObjectiveSpec, BenchmarkError> {
    Ok(ObjectiveSpec {
        values: tabulate(kind, map, space)?,
        kernel,
        noise: NoiseModel::homoscedastic(SYNTHETIC_NOISE),
    })
}

/// ZDT1 at `x + w`: `design_n^2` designs on `[0.25, 0.75]^2`, `env_n^2`
/// environment points on `[-0.25, 0.25]^2`, uniform weights, Bayes risk of
/// both objectives, kernel `exp(-d^2 / 0.2)`.
pub fn zdt1_iu(design_n: usize, env_n: usize, budget: usize) -> Result<ProblemSpec, BenchmarkError> {
    let space = JointSpace::new(cube_grid(0.25, 0.75, design_n, 2), cube_grid(-0.25, 0.25, env_n, 2))?;
    let kernel = KernelSpec::gaussian(0.2, 1.0);
    let objectives = vec![
        synthetic_objective(SyntheticKind::Zdt1F1, &InputMap::Sum, &space, kernel)?,
        synthetic_objective(SyntheticKind::Zdt1F2, &InputMap::Sum, &space, kernel)?,
    ];
    let env = EnvModel::uniform(space.n_envs())?;
    Ok(base_problem(
        space,
        env,
        objectives,
        vec![RiskSpec::bayes(0), RiskSpec::bayes(1)],
        budget,
    ))
}

/// Rosenbrock `f(w1, w2, x1, x2, x3, w3)` with `n` points per coordinate on
/// `[-1, 1]`, discretized normal `w`, risks mean and negative std, kernel
/// `exp(-d^2 / 4)`.
pub fn rosenbrock_iu(n: usize, budget: usize) -> Result<ProblemSpec, BenchmarkError> {
    let envs = cube_grid(-1.0, 1.0, n, 3);
    let env = discretized_normal(&envs)?;
    let space = JointSpace::new(cube_grid(-1.0, 1.0, n, 3), envs)?;
    let map = InputMap::Select {
        indices: vec![3, 4, 0, 1, 2, 5],
    };
    let objectives = vec![synthetic_objective(
        SyntheticKind::Rosenbrock6,
        &map,
        &space,
        KernelSpec::gaussian(4.0, 1.0),
    )?];
    Ok(base_problem(
        space,
        env,
        objectives,
        vec![RiskSpec::bayes(0), RiskSpec::negative_std(0)],
        budget,
    ))
}

/// Booth and Matyas on an `n x n` grid over `[-5, 5]^2`, no environment
/// variable, kernel `2 exp(-d^2 / 2)`.
pub fn two_objective_no_iu(n: usize, budget: usize) -> Result<ProblemSpec, BenchmarkError> {
    let space = JointSpace::design_only(cube_grid(-5.0, 5.0, n, 2))?;
    let kernel = KernelSpec::gaussian(2.0, 2.0);
    let objectives = vec![
        synthetic_objective(SyntheticKind::Booth, &InputMap::Design, &space, kernel)?,
        synthetic_objective(SyntheticKind::Matyas, &InputMap::Design, &space, kernel)?,
    ];
    let env = EnvModel::uniform(1)?;
    Ok(base_problem(
        space,
        env,
        objectives,
        vec![RiskSpec::bayes(0), RiskSpec::bayes(1)],
        budget,
    ))
}

/// The named problem at its default desk size.
pub fn desk_problem(name: ExperimentName, budget: usize) -> Result<ProblemSpec, BenchmarkError> {
    match name {
        ExperimentName::Zdt1Iu => zdt1_iu(12, 5, budget),
        ExperimentName::RosenbrockIu => rosenbrock_iu(3, budget),
        ExperimentName::TwoObjectiveNoIu => two_objective_no_iu(20, budget),
    }
}

/// Noise-free two-objective Bayes-risk problem whose objectives lie in the
/// kernel's RKHS with norm `rkhs_norm`.
///
/// Designs form a `design_n x design_n` grid on `[-2, 2]^2`, environments
/// `env_n` points on `[-2, 2]`, the kernel is `exp(-d^2)` and each objective
/// is `sum_i a_i k(., z_i)` over `centers` random grid points, rescaled to
/// the requested norm. With noise-free data the posterior error obeys
/// `|f - mu| <= |f|_H sigma`, so any `beta^{1/2} >= rkhs_norm` gives bands
/// that contain the truth up to jitter effects.
pub fn rkhs_problem(
    seed: u64,
    design_n: usize,
    env_n: usize,
    centers: usize,
    rkhs_norm: f64,
    budget: usize,
) -> Result<ProblemSpec, BenchmarkError> {
    let designs = cube_grid(-2.0, 2.0, design_n, 2);
    let envs: Vec<Vec<f64>> = linspace(-2.0, 2.0, env_n).into_iter().map(|v| vec![v]).collect();
    let space = JointSpace::new(designs, envs)?;
    let kernel = KernelSpec::gaussian(1.0, 1.0);
    let mut rng = stream_rng(seed, Stream::Benchmark, 0);
    let g = space.len();
    let centers = centers.clamp(1, g);
    let mut objectives = Vec::with_capacity(2);
    for _ in 0..2 {
        let z: Vec<usize> = sample(&mut rng, g, centers).into_vec();
        let a: Vec<f64> = (0..centers).map(|_| rng.sample(StandardNormal)).collect();
        let mut norm2 = 0.0;
        for i in 0..centers {
            for j in 0..centers {
                norm2 += a[i] * a[j] * kernel.eval_sq(space.sq_dist(space.point(z[i]), space.point(z[j])));
            }
        }
        let scale = rkhs_norm / norm2.sqrt();
        let values = (0..g)
            .map(|f| {
                let p = space.point(f);
                scale
                    * z.iter()
                        .zip(&a)
                        .map(|(&c, ai)| ai * kernel.eval_sq(space.sq_dist(p, space.point(c))))
                        .sum::<f64>()
            })
            .collect();
        objectives.push(ObjectiveSpec {
            values,
            kernel,
            noise: NoiseModel::homoscedastic(0.0),
        });
    }
    let env = EnvModel::uniform(space.n_envs())?;
    let mut p = base_problem(
        space,
        env,
        objectives,
        vec![RiskSpec::bayes(0), RiskSpec::bayes(1)],
        budget,
    );
    p.initial_points = 0;
    Ok(p)
}
