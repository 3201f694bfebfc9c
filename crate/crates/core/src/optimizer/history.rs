use serde::{Deserialize, Serialize};

/// Why a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The acquisition value fell to `epsilon` or below.
    Epsilon,
    /// The observation budget was used up.
    Budget,
}

/// One loop iteration. Metrics describe the estimate the selection was based on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub design_index: Option<usize>,
    /// `None` when nothing was observed this iteration.
    pub env_index: Option<usize>,
    pub af_value: f64,
    pub env_af_value: Option<f64>,
    pub pi_hat: Vec<usize>,
    pub inference_discrepancy: Option<f64>,
    pub phv_regret: Option<f64>,
    pub termination_bound: Option<f64>,
    pub stopped: bool,
    /// Whether every band contained the true function (truth runs only).
    pub band_contains_truth: Option<bool>,
    pub beta_sqrts: Vec<f64>,
    /// Cumulative function evaluations after this iteration.
    pub evaluations: usize,
}

/// Final guarantee: `epsilon + eps_lcb + eps_ucb + eps_x` after an epsilon
/// stop, or the last acquisition value plus the same terms (flagged) after a
/// budget stop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GuaranteeReport {
    pub value: f64,
    pub budget_stop: bool,
}

/// Everything a run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHistory {
    pub method: String,
    pub records: Vec<IterationRecord>,
    pub stop_reason: Option<StopReason>,
    pub final_pi_hat: Vec<usize>,
    /// LCB and UCB vectors of the final estimated Pareto set members.
    pub final_lcb: Vec<Vec<f64>>,
    pub final_ucb: Vec<Vec<f64>>,
    pub final_inference_discrepancy: Option<f64>,
    pub final_phv_regret: Option<f64>,
    pub guarantee: Option<GuaranteeReport>,
    pub evaluations: usize,
    /// Decomposition bounds whose lower end was clamped at 0.
    pub clamped_bounds: usize,
    /// Sampling bounds that fell back to clipped paths.
    pub approximate_bounds: usize,
    /// Iterations where some band missed the truth.
    pub containment_violations: usize,
}

impl RunHistory {
    pub fn new(method: impl Into<String>) -> Self {
        Self {
            method: method.into(),
            records: Vec::new(),
            stop_reason: None,
            final_pi_hat: Vec::new(),
            final_lcb: Vec::new(),
            final_ucb: Vec::new(),
            final_inference_discrepancy: None,
            final_phv_regret: None,
            guarantee: None,
            evaluations: 0,
            clamped_bounds: 0,
            approximate_bounds: 0,
            containment_violations: 0,
        }
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    pub fn stopped(&self) -> bool {
        self.stop_reason.is_some()
    }

    /// Inference discrepancy per iteration (empty without truth).
    pub fn discrepancy_curve(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.inference_discrepancy).collect()
    }

    pub fn phv_curve(&self) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.phv_regret).collect()
    }
}
