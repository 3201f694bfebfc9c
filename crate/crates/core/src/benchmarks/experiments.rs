use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::problems::{desk_problem, ExperimentName};
use super::truth::{build_truth, TruthTable};
use super::BenchmarkError;
use crate::optimizer::{run_baseline, BaselineKind, Method, Optimizer, ProblemSpec, RunHistory};
use crate::rng::mix;

/// A method compared in the replication experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contender {
    Proposed,
    Random,
    Us,
    NaiveRandom,
    NaiveUs,
}

impl Contender {
    pub const ALL: [Contender; 5] = [
        Contender::Proposed,
        Contender::Random,
        Contender::Us,
        Contender::NaiveRandom,
        Contender::NaiveUs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Contender::Proposed => "proposed",
            Contender::Random => "random",
            Contender::Us => "us",
            Contender::NaiveRandom => "naive_random",
            Contender::NaiveUs => "naive_us",
        }
    }

    /// Runs one trial.
    pub fn run(
        &self,
        problem: Arc<ProblemSpec>,
        seed: u64,
        truth: Option<Arc<TruthTable>>,
    ) -> Result<RunHistory, BenchmarkError> {
        let h = match self {
            Contender::Proposed => Optimizer::new(problem, Method::Proposed, seed, truth)?.run()?,
            Contender::Random => run_baseline(BaselineKind::Random, problem, seed, truth)?,
            Contender::Us => run_baseline(BaselineKind::Us, problem, seed, truth)?,
            Contender::NaiveRandom => run_baseline(BaselineKind::NaiveRandom, problem, seed, truth)?,
            Contender::NaiveUs => run_baseline(BaselineKind::NaiveUs, problem, seed, truth)?,
        };
        Ok(h)
    }
}

/// Mean and standard error per position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveStats {
    pub mean: Vec<f64>,
    pub se: Vec<f64>,
}

impl CurveStats {
    /// Aggregates equally long curves; `se` is the sample std over `sqrt(n)`
    /// (zero for a single curve).
    pub fn from_curves(curves: &[Vec<f64>]) -> Self {
        let len = curves.first().map_or(0, Vec::len);
        let n = curves.len() as f64;
        let mut mean = vec![0.0; len];
        let mut se = vec![0.0; len];
        for t in 0..len {
            let m = curves.iter().map(|c| c[t]).sum::<f64>() / n;
            mean[t] = m;
            if curves.len() > 1 {
                let var = curves.iter().map(|c| (c[t] - m).powi(2)).sum::<f64>() / (n - 1.0);
                se[t] = (var / n).sqrt();
            }
        }
        Self { mean, se }
    }
}

/// Metric values after `1..=budget` loop observations. Entry `k` is the
/// metric recorded before observation `k + 1`; the last entry and any
/// positions past an early stop take the final value.
pub fn observation_curve(
    history: &RunHistory,
    budget: usize,
    metric: impl Fn(&crate::optimizer::IterationRecord) -> Option<f64>,
    final_value: Option<f64>,
) -> Vec<f64> {
    let fin = final_value.unwrap_or(f64::NAN);
    (1..=budget)
        .map(|k| history.records.get(k).and_then(&metric).unwrap_or(fin))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: String,
    pub discrepancy: CurveStats,
    pub phv_regret: CurveStats,
    pub final_discrepancy: Vec<f64>,
    pub final_phv_regret: Vec<f64>,
    #[serde(skip)]
    pub histories: Vec<RunHistory>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    pub trials: usize,
    pub budget: usize,
    pub seed: u64,
    pub methods: Vec<MethodResult>,
}

impl ExperimentResult {
    pub fn method(&self, name: &str) -> Option<&MethodResult> {
        self.methods.iter().find(|m| m.method == name)
    }
}

/// Runs every contender for `trials` trials on `problem`; trial `i` uses
/// seed `mix(seed, i)` for every contender. Trials run in parallel and the
/// result does not depend on the thread count.
pub fn replicate_problem(
    name: &str,
    problem: Arc<ProblemSpec>,
    contenders: &[Contender],
    trials: usize,
    seed: u64,
) -> Result<ExperimentResult, BenchmarkError> {
    if trials == 0 {
        return Err(BenchmarkError::Empty("trials"));
    }
    let truth = Arc::new(build_truth(&problem)?);
    let budget = problem.budget;
    let per_trial: Vec<Vec<RunHistory>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = mix(seed, i as u64);
            contenders
                .iter()
                .map(|c| c.run(problem.clone(), s, Some(truth.clone())))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let methods = contenders
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let histories: Vec<RunHistory> = per_trial.iter().map(|t| t[ci].clone()).collect();
            let disc: Vec<Vec<f64>> = histories
                .iter()
                .map(|h| observation_curve(h, budget, |r| r.inference_discrepancy, h.final_inference_discrepancy))
                .collect();
            let phv: Vec<Vec<f64>> = histories
                .iter()
                .map(|h| observation_curve(h, budget, |r| r.phv_regret, h.final_phv_regret))
                .collect();
            MethodResult {
                method: c.name().to_string(),
                discrepancy: CurveStats::from_curves(&disc),
                phv_regret: CurveStats::from_curves(&phv),
                final_discrepancy: histories
                    .iter()
                    .map(|h| h.final_inference_discrepancy.unwrap_or(f64::NAN))
                    .collect(),
                final_phv_regret: histories.iter().map(|h| h.final_phv_regret.unwrap_or(f64::NAN)).collect(),
                histories,
            }
        })
        .collect();
    Ok(ExperimentResult {
        name: name.to_string(),
        trials,
        budget,
        seed,
        methods,
    })
}

/// Replicates a named desk experiment with all contenders and `epsilon = 0`.
pub fn replicate_experiment(
    name: &str,
    trials: usize,
    budget: usize,
    seed: u64,
) -> Result<ExperimentResult, BenchmarkError> {
    let exp: ExperimentName = name.parse()?;
    let problem = Arc::new(desk_problem(exp, budget)?);
    replicate_problem(exp.as_str(), problem, &Contender::ALL, trials, seed)
}
