use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::history::{IterationRecord, RunHistory, StopReason};
use super::run::{Method, Optimizer};
use super::select::{acquisition_values, argmax, sample_env_uncontrollable};
use super::{OptimizerError, ProblemSpec};
use crate::benchmarks::TruthTable;
use crate::gp::{median_heuristic, GPState, JointPoint, JointSpace, KernelSpec, NoiseModel};
use crate::pareto::{build_box_table, inference_discrepancy, phv_regret, BoxTable};
use crate::risk::{RiskInterval, RiskKind, RiskSpec};
use crate::rng::{stream_rng, Stream};

/// Environment draws per naive iteration.
pub const NAIVE_DRAWS: usize = 5;

/// Noise variance of the naive design-only GPs, relative to the prior variance.
const NAIVE_NOISE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    Random,
    Us,
    NaiveRandom,
    NaiveUs,
}

impl BaselineKind {
    pub fn name(&self) -> &'static str {
        match self {
            BaselineKind::Random => "random",
            BaselineKind::Us => "us",
            BaselineKind::NaiveRandom => "naive_random",
            BaselineKind::NaiveUs => "naive_us",
        }
    }
}

/// Runs a baseline to its budget with the same instrumentation as the
/// proposed method.
pub fn run_baseline(
    kind: BaselineKind,
    problem: Arc<ProblemSpec>,
    seed: u64,
    truth: Option<Arc<TruthTable>>,
) -> Result<RunHistory, OptimizerError> {
    match kind {
        BaselineKind::Random => Optimizer::new(problem, Method::Random, seed, truth)?.run(),
        BaselineKind::Us => Optimizer::new(problem, Method::Us, seed, truth)?.run(),
        BaselineKind::NaiveRandom | BaselineKind::NaiveUs => run_naive(kind, &problem, seed, truth),
    }
}

enum Moment {
    Mean,
    NegStd,
}

fn moment_of(spec: &RiskSpec) -> Result<Moment, OptimizerError> {
    if spec.kind == RiskKind::Bayes {
        Ok(Moment::Mean)
    } else if spec.is_negative_std() {
        Ok(Moment::NegStd)
    } else {
        Err(OptimizerError::Config(format!(
            "naive baselines support bayes and negative std only, got {}",
            spec.kind.tag()
        )))
    }
}

fn estimate(moment: &Moment, ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let mean = ys.iter().sum::<f64>() / n;
    match moment {
        Moment::Mean => mean,
        Moment::NegStd => {
            let var = ys.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / (n - 1.0);
            -var.max(0.0).sqrt()
        }
    }
}

struct NaiveCtx<'a> {
    problem: &'a ProblemSpec,
    moments: &'a [Moment],
    gps: &'a mut Vec<GPState>,
    history: &'a mut RunHistory,
    evaluated: &'a mut Vec<bool>,
    obs_rng: &'a mut ChaCha8Rng,
}

impl NaiveCtx<'_> {
    /// Draws the environment `NAIVE_DRAWS` times at `x`, observes every
    /// objective and feeds the moment estimates to the design-only GPs.
    fn observe(&mut self, x: usize, env_rng: &mut ChaCha8Rng) -> Result<(), OptimizerError> {
        let problem = self.problem;
        let mut ys = vec![Vec::with_capacity(NAIVE_DRAWS); problem.n_objectives()];
        for _ in 0..NAIVE_DRAWS {
            let w = sample_env_uncontrollable(&problem.env_model, x, env_rng);
            let p = JointPoint::new(x, w);
            for (m, y) in ys.iter_mut().enumerate() {
                let var = problem.objectives[m].noise.variance_at(&problem.space, p);
                let z: f64 = self.obs_rng.sample(StandardNormal);
                y.push(problem.value(m, p) + var.sqrt() * z);
            }
            self.history.evaluations += 1;
        }
        for (r, spec) in problem.risks.iter().enumerate() {
            let v = estimate(&self.moments[r], &ys[spec.objective]);
            self.gps[r] = self.gps[r].update(JointPoint::new(x, 0), v)?;
        }
        self.evaluated[x] = true;
        Ok(())
    }
}

fn run_naive(
    kind: BaselineKind,
    problem: &ProblemSpec,
    seed: u64,
    truth: Option<Arc<TruthTable>>,
) -> Result<RunHistory, OptimizerError> {
    problem.validate()?;
    let moments: Vec<Moment> = problem.risks.iter().map(moment_of).collect::<Result<_, _>>()?;
    let designs = problem.space.designs().to_vec();
    let ls = median_heuristic(&designs);
    let xspace = Arc::new(JointSpace::design_only(designs)?);
    let mut gps: Vec<GPState> = problem
        .risks
        .iter()
        .map(|r| {
            let k = problem.objectives[r.objective].kernel;
            let prior = k.prior_variance();
            GPState::new(
                xspace.clone(),
                KernelSpec::gaussian(ls, prior),
                NoiseModel::homoscedastic(NAIVE_NOISE * prior),
                problem.jitter,
            )
            .map(GPState::with_grid_cache)
        })
        .collect::<Result<_, _>>()?;

    let mut history = RunHistory::new(kind.name());
    let mut evaluated = vec![false; problem.space.n_designs()];
    let mut obs_rng = stream_rng(seed, Stream::ObservationNoise, 0);
    let mut env_rng = stream_rng(seed, Stream::EnvDraws, 0);
    let mut pick_rng = stream_rng(seed, Stream::BaselineRandom, 0);
    let mut init_rng = stream_rng(seed, Stream::Initial, 0);

    for _ in 0..problem.initial_points {
        let x = init_rng.random_range(0..problem.space.n_designs());
        let mut ctx = NaiveCtx { problem, moments: &moments, gps: &mut gps, history: &mut history, evaluated: &mut evaluated, obs_rng: &mut obs_rng };
        ctx.observe(x, &mut init_rng)?;
    }

    let boxes = |gps: &[GPState], betas: &[f64]| -> Result<BoxTable, OptimizerError> {
        let rows: Vec<Vec<RiskInterval>> = (0..xspace.n_designs())
            .map(|x| {
                gps.iter()
                    .zip(betas)
                    .map(|(g, b)| {
                        let (m, s) = g.posterior(JointPoint::new(x, 0));
                        RiskInterval::new(m - b * s, m + b * s).expect("ordered")
                    })
                    .collect()
            })
            .collect();
        Ok(build_box_table(&rows)?)
    };

    for iter in 0..problem.budget {
        let betas = problem.beta.beta_sqrts(iter + 1, &gps, seed);
        let table = boxes(&gps, &betas)?;
        let pi_hat = table.pareto_set();
        let (_, af) = argmax(&acquisition_values(&table, &pi_hat));
        let x = match kind {
            BaselineKind::NaiveUs => {
                let scores: Vec<f64> = (0..xspace.n_designs())
                    .map(|x| gps.iter().map(|g| g.posterior(JointPoint::new(x, 0)).1.powi(2)).sum())
                    .collect();
                argmax(&scores).0
            }
            _ => pick_rng.random_range(0..xspace.n_designs()),
        };
        let (disc, regret) = match &truth {
            Some(t) => {
                let d = inference_discrepancy(&pi_hat, &t.risk_values)?.total();
                let ev: Vec<usize> = (0..evaluated.len()).filter(|&i| evaluated[i]).collect();
                (Some(d), Some(phv_regret(&ev, &t.risk_values, &t.reference)?))
            }
            None => (None, None),
        };
        NaiveCtx { problem, moments: &moments, gps: &mut gps, history: &mut history, evaluated: &mut evaluated, obs_rng: &mut obs_rng }
            .observe(x, &mut env_rng)?;
        let done = iter + 1 == problem.budget;
        history.records.push(IterationRecord {
            iter,
            design_index: Some(x),
            env_index: None,
            af_value: af,
            env_af_value: None,
            pi_hat: pi_hat.members,
            inference_discrepancy: disc,
            phv_regret: regret,
            termination_bound: None,
            stopped: done,
            band_contains_truth: None,
            beta_sqrts: betas,
            evaluations: history.evaluations,
        });
    }

    history.stop_reason = Some(StopReason::Budget);
    let betas = problem.beta.beta_sqrts(problem.budget + 1, &gps, seed);
    let table = boxes(&gps, &betas)?;
    let pi_hat = table.pareto_set();
    if let Some(t) = &truth {
        history.final_inference_discrepancy = Some(inference_discrepancy(&pi_hat, &t.risk_values)?.total());
        let ev: Vec<usize> = (0..evaluated.len()).filter(|&i| evaluated[i]).collect();
        history.final_phv_regret = Some(phv_regret(&ev, &t.risk_values, &t.reference)?);
    }
    history.final_lcb = pi_hat.members.iter().map(|&i| table.lcb(i).to_vec()).collect();
    history.final_ucb = pi_hat.members.iter().map(|&i| table.ucb(i).to_vec()).collect();
    history.final_pi_hat = pi_hat.members;
    history.guarantee = super::report::guarantee_report(&history, problem.epsilon, &problem.error_params);
    Ok(history)
}
