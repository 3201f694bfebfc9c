use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::history::{IterationRecord, RunHistory, StopReason};
use super::problem::{BoundMethod, Mode, ProblemSpec};
use super::report::{guarantee_report, termination_bound, uncertainty_width};
use super::select::{argmax, sample_env_uncontrollable, select_design, select_env};
use super::OptimizerError;
use crate::benchmarks::TruthTable;
use crate::gp::{GPState, JointPoint};
use crate::pareto::{build_box_table, inference_discrepancy, phv_regret, BoxTable, ParetoSet};
use crate::risk::{bound_decomposition_with_notes, bound_sampling, posterior_band, Band, RiskInterval};
use crate::rng::{mix, stream_rng, Stream};

/// Grids up to this many joint points keep a full posterior cache.
const GRID_CACHE_LIMIT: usize = 250_000;

/// Point-selection rule sharing the bounding-box machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Maximin-distance design choice with variance-driven environment choice
    /// and epsilon stopping.
    Proposed,
    /// Uniform design; uniform (simulator) or drawn (uncontrollable) environment.
    Random,
    /// Largest summed posterior variance.
    Us,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Proposed => "proposed",
            Method::Random => "random",
            Method::Us => "us",
        }
    }
}

/// Box table for one iteration plus bookkeeping.
pub(crate) struct Boxes {
    pub table: BoxTable,
    pub clamped: usize,
    pub approximate: usize,
    pub contains_truth: Option<bool>,
}

/// Loop state of one run.
pub struct Optimizer {
    problem: Arc<ProblemSpec>,
    method: Method,
    seed: u64,
    gps: Vec<GPState>,
    truth: Option<Arc<TruthTable>>,
    history: RunHistory,
    evaluated: Vec<bool>,
    obs_rng: ChaCha8Rng,
    env_rng: ChaCha8Rng,
    baseline_rng: ChaCha8Rng,
    observations: usize,
}

impl Optimizer {
    /// Builds the GP priors and takes the initial random observations.
    pub fn new(
        problem: Arc<ProblemSpec>,
        method: Method,
        seed: u64,
        truth: Option<Arc<TruthTable>>,
    ) -> Result<Self, OptimizerError> {
        problem.validate()?;
        let cache = problem.space.len() <= GRID_CACHE_LIMIT;
        let gps = problem
            .objectives
            .iter()
            .map(|o| {
                let gp = GPState::new(problem.space.clone(), o.kernel, o.noise.clone(), problem.jitter)?;
                Ok(if cache { gp.with_grid_cache() } else { gp })
            })
            .collect::<Result<Vec<_>, OptimizerError>>()?;
        let mut opt = Self {
            evaluated: vec![false; problem.space.n_designs()],
            history: RunHistory::new(method.name()),
            obs_rng: stream_rng(seed, Stream::ObservationNoise, 0),
            env_rng: stream_rng(seed, Stream::EnvDraws, 0),
            baseline_rng: stream_rng(seed, Stream::BaselineRandom, 0),
            problem,
            method,
            seed,
            gps,
            truth,
            observations: 0,
        };
        let mut init_rng = stream_rng(seed, Stream::Initial, 0);
        for _ in 0..opt.problem.initial_points {
            let x = init_rng.random_range(0..opt.problem.space.n_designs());
            let w = match opt.problem.mode {
                Mode::Simulator => {
                    let s = &opt.problem.env_model.for_design(x).support;
                    s[init_rng.random_range(0..s.len())]
                }
                Mode::Uncontrollable => sample_env_uncontrollable(&opt.problem.env_model, x, &mut init_rng),
            };
            opt.observe(JointPoint::new(x, w))?;
        }
        Ok(opt)
    }

    pub fn gps(&self) -> &[GPState] {
        &self.gps
    }

    pub fn history(&self) -> &RunHistory {
        &self.history
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn into_history(self) -> RunHistory {
        self.history
    }

    fn observe(&mut self, p: JointPoint) -> Result<(), OptimizerError> {
        for m in 0..self.gps.len() {
            let var = self.problem.objectives[m].noise.variance_at(&self.problem.space, p);
            let z: f64 = self.obs_rng.sample(StandardNormal);
            let y = self.problem.value(m, p) + var.sqrt() * z;
            self.gps[m] = self.gps[m].update(p, y)?;
        }
        self.evaluated[p.design_index] = true;
        self.history.evaluations += 1;
        Ok(())
    }

    fn boxes(&self, beta_sqrts: &[f64], iter: usize) -> Result<Boxes, OptimizerError> {
        let problem = &self.problem;
        let check_truth = self.truth.is_some();
        let rows = (0..problem.space.n_designs())
            .into_par_iter()
            .map(|x| -> Result<(Vec<RiskInterval>, usize, usize, bool), OptimizerError> {
                let dist = problem.env_model.for_design(x);
                let bands: Vec<Band> = self
                    .gps
                    .iter()
                    .zip(beta_sqrts)
                    .map(|(gp, b)| posterior_band(gp, x, dist, *b))
                    .collect();
                let contained = !check_truth
                    || bands.iter().enumerate().all(|(m, band)| {
                        dist.support.iter().enumerate().all(|(i, &w)| {
                            let v = problem.value(m, JointPoint::new(x, w));
                            v >= band.lower[i] && v <= band.upper[i]
                        })
                    });
                let mut row = Vec::with_capacity(problem.risks.len());
                let (mut clamped, mut approx) = (0, 0);
                for (r, spec) in problem.risks.iter().enumerate() {
                    let iv = match problem.bound_method {
                        BoundMethod::Decomposition => {
                            let (iv, notes) = bound_decomposition_with_notes(spec, &bands, &dist.weights)?;
                            clamped += notes.clamped as usize;
                            iv
                        }
                        BoundMethod::Sampling { samples } => {
                            let seed = mix(mix(self.seed, iter as u64), (x * problem.risks.len() + r) as u64);
                            let s = bound_sampling(spec, &self.gps, x, dist, beta_sqrts, samples, seed)?;
                            approx += s.approximate as usize;
                            s.interval
                        }
                    };
                    row.push(iv);
                }
                Ok((row, clamped, approx, contained))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut intervals = Vec::with_capacity(rows.len());
        let (mut clamped, mut approximate, mut contained) = (0, 0, true);
        for (row, c, a, ok) in rows {
            intervals.push(row);
            clamped += c;
            approximate += a;
            contained &= ok;
        }
        Ok(Boxes {
            table: build_box_table(&intervals)?,
            clamped,
            approximate,
            contains_truth: check_truth.then_some(contained),
        })
    }

    fn metrics(&self, pi_hat: &ParetoSet) -> Result<(Option<f64>, Option<f64>), OptimizerError> {
        let Some(truth) = &self.truth else {
            return Ok((None, None));
        };
        let d = inference_discrepancy(pi_hat, &truth.risk_values)?.total();
        let evaluated: Vec<usize> = (0..self.evaluated.len()).filter(|&i| self.evaluated[i]).collect();
        let r = phv_regret(&evaluated, &truth.risk_values, &truth.reference)?;
        Ok((Some(d), Some(r)))
    }

    fn termination(&self, beta_sqrts: &[f64]) -> Option<f64> {
        let gains: Vec<f64> = self.gps.iter().map(|g| g.realized_information_gain()).collect();
        let noise: Vec<f64> = self
            .gps
            .iter()
            .map(|g| g.noise().max_variance() + g.jitter())
            .collect();
        let s = uncertainty_width(beta_sqrts, &gains, &noise, self.observations);
        termination_bound(s, &self.problem.risks, &self.problem.error_params, self.problem.mode).ok()
    }

    /// Runs one iteration. Returns `true` once the run has stopped.
    pub fn step(&mut self) -> Result<bool, OptimizerError> {
        if self.history.stopped() {
            return Ok(true);
        }
        let iter = self.history.records.len();
        let betas = self.problem.beta.beta_sqrts(iter + 1, &self.gps, self.seed);
        let boxes = self.boxes(&betas, iter)?;
        self.history.clamped_bounds += boxes.clamped;
        self.history.approximate_bounds += boxes.approximate;
        if boxes.contains_truth == Some(false) {
            self.history.containment_violations += 1;
        }
        let (x_best, af, pi_hat) = select_design(&boxes.table);
        let (disc, regret) = self.metrics(&pi_hat)?;
        let mut record = IterationRecord {
            iter,
            design_index: Some(x_best),
            env_index: None,
            af_value: af,
            env_af_value: None,
            pi_hat: pi_hat.members.clone(),
            inference_discrepancy: disc,
            phv_regret: regret,
            termination_bound: self.termination(&betas),
            stopped: false,
            band_contains_truth: boxes.contains_truth,
            beta_sqrts: betas.clone(),
            evaluations: self.history.evaluations,
        };

        let stop = if self.method == Method::Proposed && af <= self.problem.epsilon {
            Some(StopReason::Epsilon)
        } else if self.observations >= self.problem.budget {
            Some(StopReason::Budget)
        } else {
            None
        };
        if let Some(reason) = stop {
            record.stopped = true;
            self.history.records.push(record);
            self.finish(reason, Some(boxes))?;
            return Ok(true);
        }

        let (x, w, env_af) = self.choose(x_best, &betas);
        self.observe(JointPoint::new(x, w))?;
        self.observations += 1;
        record.design_index = Some(x);
        record.env_index = Some(w);
        record.env_af_value = env_af;
        record.evaluations = self.history.evaluations;
        let done = self.observations >= self.problem.budget;
        record.stopped = done;
        self.history.records.push(record);
        if done {
            self.finish(StopReason::Budget, None)?;
        }
        Ok(done)
    }

    fn choose(&mut self, x_best: usize, betas: &[f64]) -> (usize, usize, Option<f64>) {
        let problem = self.problem.clone();
        let env = &problem.env_model;
        match self.method {
            Method::Proposed => match problem.mode {
                Mode::Simulator => {
                    let (w, v) = select_env(&self.gps, x_best, betas, &env.for_design(x_best).support);
                    (x_best, w, Some(v))
                }
                Mode::Uncontrollable => (x_best, sample_env_uncontrollable(env, x_best, &mut self.env_rng), None),
            },
            Method::Random => {
                let x = self.baseline_rng.random_range(0..problem.space.n_designs());
                let w = match problem.mode {
                    Mode::Simulator => {
                        let s = &env.for_design(x).support;
                        s[self.baseline_rng.random_range(0..s.len())]
                    }
                    Mode::Uncontrollable => sample_env_uncontrollable(env, x, &mut self.env_rng),
                };
                (x, w, None)
            }
            Method::Us => {
                let score = |x: usize, w: usize| -> f64 {
                    self.gps
                        .iter()
                        .map(|g| g.posterior(JointPoint::new(x, w)).1.powi(2))
                        .sum()
                };
                let per_design: Vec<(usize, f64)> = (0..problem.space.n_designs())
                    .into_par_iter()
                    .map(|x| {
                        let s = &env.for_design(x).support;
                        let scores: Vec<f64> = s.iter().map(|&w| score(x, w)).collect();
                        let (i, v) = argmax(&scores);
                        (s[i], v)
                    })
                    .collect();
                let maxima: Vec<f64> = per_design.iter().map(|p| p.1).collect();
                let (x, _) = argmax(&maxima);
                let w = match problem.mode {
                    Mode::Simulator => per_design[x].0,
                    Mode::Uncontrollable => sample_env_uncontrollable(env, x, &mut self.env_rng),
                };
                (x, w, None)
            }
        }
    }

    /// Records the final estimate; `boxes` is reused when nothing was
    /// observed since it was computed.
    fn finish(&mut self, reason: StopReason, boxes: Option<Boxes>) -> Result<(), OptimizerError> {
        self.history.stop_reason = Some(reason);
        let boxes = match boxes {
            Some(b) => b,
            None => {
                let iter = self.history.records.len();
                let betas = self.problem.beta.beta_sqrts(iter + 1, &self.gps, self.seed);
                self.boxes(&betas, iter)?
            }
        };
        let pi_hat = boxes.table.pareto_set();
        let (disc, regret) = self.metrics(&pi_hat)?;
        self.history.final_lcb = pi_hat.members.iter().map(|&i| boxes.table.lcb(i).to_vec()).collect();
        self.history.final_ucb = pi_hat.members.iter().map(|&i| boxes.table.ucb(i).to_vec()).collect();
        self.history.final_pi_hat = pi_hat.members;
        self.history.final_inference_discrepancy = disc;
        self.history.final_phv_regret = regret;
        self.history.guarantee = guarantee_report(&self.history, self.problem.epsilon, &self.problem.error_params);
        Ok(())
    }

    /// Steps until the run stops.
    pub fn run(mut self) -> Result<RunHistory, OptimizerError> {
        while !self.step()? {}
        Ok(self.history)
    }
}
