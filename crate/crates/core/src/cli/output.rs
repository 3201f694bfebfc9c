//! Output writers. Floats use 17 significant digits; missing values are
//! empty CSV cells and `null` in JSON.
//!
//! `history.csv` columns: `trial, iter, design_index, env_index, af_value,
//! env_af_value, I_t, phv_regret, termination_bound, stopped`.
//!
//! `pareto.csv` columns: `trial, design_index, lcb_0.., ucb_0..`.
//!
//! `curves.csv` columns: `t, discrepancy_mean, discrepancy_se,
//! phv_regret_mean, phv_regret_se`, with `t` counting loop observations.

use std::fmt::Write as _;

use serde::Serialize;

use crate::benchmarks::{ExperimentResult, MethodResult};
use crate::optimizer::{RunHistory, StopReason};

pub const HISTORY_HEADER: &str =
    "trial,iter,design_index,env_index,af_value,env_af_value,I_t,phv_regret,termination_bound,stopped";

/// `{:.16e}`, i.e. 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_f(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn opt_u(v: Option<usize>) -> String {
    v.map(|u| u.to_string()).unwrap_or_default()
}

/// One row per trial and iteration.
pub fn history_csv(runs: &[RunHistory]) -> String {
    let mut s = String::from(HISTORY_HEADER);
    s.push('\n');
    for (trial, h) in runs.iter().enumerate() {
        for r in &h.records {
            writeln!(
                s,
                "{trial},{},{},{},{},{},{},{},{},{}",
                r.iter,
                opt_u(r.design_index),
                opt_u(r.env_index),
                fmt_f64(r.af_value),
                opt_f(r.env_af_value),
                opt_f(r.inference_discrepancy),
                opt_f(r.phv_regret),
                opt_f(r.termination_bound),
                r.stopped
            )
            .expect("write to string");
        }
    }
    s
}

/// Final estimated Pareto set members with their LCB and UCB vectors.
pub fn pareto_csv(runs: &[RunHistory], n_risks: usize) -> String {
    let mut s = String::from("trial,design_index");
    for l in 0..n_risks {
        write!(s, ",lcb_{l}").expect("write to string");
    }
    for l in 0..n_risks {
        write!(s, ",ucb_{l}").expect("write to string");
    }
    s.push('\n');
    for (trial, h) in runs.iter().enumerate() {
        for (k, &x) in h.final_pi_hat.iter().enumerate() {
            write!(s, "{trial},{x}").expect("write to string");
            for v in h.final_lcb[k].iter().chain(&h.final_ucb[k]) {
                write!(s, ",{}", fmt_f64(*v)).expect("write to string");
            }
            s.push('\n');
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    pub stop_reason: Option<StopReason>,
    pub final_pi_hat: Vec<usize>,
    pub guarantee: Option<f64>,
    pub guarantee_budget_stop: Option<bool>,
    pub final_inference_discrepancy: Option<f64>,
    pub final_phv_regret: Option<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub clamped_bounds: usize,
    pub approximate_bounds: usize,
    pub containment_violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub method: String,
    pub seed: u64,
    pub trials: Vec<TrialSummary>,
}

pub fn run_summary(method: &str, seed: u64, trial_seeds: &[u64], runs: &[RunHistory]) -> RunSummary {
    RunSummary {
        method: method.to_string(),
        seed,
        trials: runs
            .iter()
            .zip(trial_seeds)
            .enumerate()
            .map(|(trial, (h, &s))| TrialSummary {
                trial,
                seed: s,
                stop_reason: h.stop_reason,
                final_pi_hat: h.final_pi_hat.clone(),
                guarantee: h.guarantee.map(|g| g.value),
                guarantee_budget_stop: h.guarantee.map(|g| g.budget_stop),
                final_inference_discrepancy: h.final_inference_discrepancy,
                final_phv_regret: h.final_phv_regret,
                iterations: h.records.len(),
                evaluations: h.evaluations,
                clamped_bounds: h.clamped_bounds,
                approximate_bounds: h.approximate_bounds,
                containment_violations: h.containment_violations,
            })
            .collect(),
    }
}

/// Aggregate curves of one method.
pub fn curves_csv(m: &MethodResult) -> String {
    let mut s = String::from("t,discrepancy_mean,discrepancy_se,phv_regret_mean,phv_regret_se\n");
    for t in 0..m.discrepancy.mean.len() {
        writeln!(
            s,
            "{},{},{},{},{}",
            t + 1,
            fmt_f64(m.discrepancy.mean[t]),
            fmt_f64(m.discrepancy.se[t]),
            fmt_f64(m.phv_regret.mean[t]),
            fmt_f64(m.phv_regret.se[t])
        )
        .expect("write to string");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: String,
    pub final_discrepancy_mean: f64,
    pub final_discrepancy_se: f64,
    pub final_phv_regret_mean: f64,
    pub final_phv_regret_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkSummary {
    pub experiment: String,
    pub trials: usize,
    pub budget: usize,
    pub seed: u64,
    pub methods: Vec<MethodSummary>,
}

pub fn benchmark_summary(r: &ExperimentResult) -> BenchmarkSummary {
    let last = |v: &[f64]| v.last().copied().unwrap_or(f64::NAN);
    BenchmarkSummary {
        experiment: r.name.clone(),
        trials: r.trials,
        budget: r.budget,
        seed: r.seed,
        methods: r
            .methods
            .iter()
            .map(|m| MethodSummary {
                method: m.method.clone(),
                final_discrepancy_mean: last(&m.discrepancy.mean),
                final_discrepancy_se: last(&m.discrepancy.se),
                final_phv_regret_mean: last(&m.phv_regret.mean),
                final_phv_regret_se: last(&m.phv_regret.se),
            })
            .collect(),
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("summary serializes");
    s.push('\n');
    s
}
