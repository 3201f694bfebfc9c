use super::history::{GuaranteeReport, RunHistory, StopReason};
use super::problem::{ErrorParams, Mode};
use crate::risk::{q_function, RiskError, RiskSpec};

/// `s_t = sqrt(sum_m C_m beta_m gain_m / (t + 1))` with
/// `C_m = 8 M / ln(1 + 1 / noise_m)`.
///
/// `beta_sqrts` are the band multipliers (squared here), `gains` the realized
/// information gains and `noise_vars` the largest noise variance of each
/// objective including jitter.
pub fn uncertainty_width(beta_sqrts: &[f64], gains: &[f64], noise_vars: &[f64], t: usize) -> f64 {
    let m = beta_sqrts.len() as f64;
    let total: f64 = beta_sqrts
        .iter()
        .zip(gains)
        .zip(noise_vars)
        .map(|((b, g), s2)| {
            let c = 8.0 * m / (1.0 / s2).ln_1p();
            if c.is_finite() {
                c * b * b * g
            } else {
                0.0
            }
        })
        .sum();
    (total / (t as f64 + 1.0)).sqrt()
}

/// `eps_pf + q(eps_omega + s_t)` with `q` the largest width function over the
/// risks; `eps_omega` only applies in simulator mode.
pub fn termination_bound(
    s_t: f64,
    risks: &[RiskSpec],
    params: &ErrorParams,
    mode: Mode,
) -> Result<f64, RiskError> {
    let a = s_t
        + match mode {
            Mode::Simulator => params.eps_omega,
            Mode::Uncontrollable => 0.0,
        };
    let mut q: f64 = 0.0;
    for r in risks {
        q = q.max(q_function(r, a)?);
    }
    Ok(params.eps_pf + q)
}

/// Advertised accuracy of a finished run; `None` while it is still running.
pub fn guarantee_report(history: &RunHistory, epsilon: f64, params: &ErrorParams) -> Option<GuaranteeReport> {
    let slack = params.eps_lcb + params.eps_ucb + params.eps_x;
    match history.stop_reason? {
        StopReason::Epsilon => Some(GuaranteeReport {
            value: epsilon + slack,
            budget_stop: false,
        }),
        StopReason::Budget => Some(GuaranteeReport {
            value: history.last().map_or(f64::INFINITY, |r| r.af_value) + slack,
            budget_stop: true,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::history::IterationRecord;

    fn stopped(reason: StopReason, af: f64) -> RunHistory {
        let mut h = RunHistory::new("proposed");
        h.records.push(IterationRecord {
            iter: 0,
            design_index: Some(0),
            env_index: None,
            af_value: af,
            env_af_value: None,
            pi_hat: vec![0],
            inference_discrepancy: None,
            phv_regret: None,
            termination_bound: None,
            stopped: true,
            band_contains_truth: None,
            beta_sqrts: vec![3.0],
            evaluations: 0,
        });
        h.stop_reason = Some(reason);
        h
    }

    #[test]
    fn guarantee_sums() {
        let zero = ErrorParams::default();
        let g = guarantee_report(&stopped(StopReason::Epsilon, 0.05), 0.1, &zero).unwrap();
        assert_eq!(g.value, 0.1);
        let p = ErrorParams {
            eps_lcb: 0.01,
            eps_ucb: 0.01,
            ..zero
        };
        let g = guarantee_report(&stopped(StopReason::Epsilon, 0.05), 0.1, &p).unwrap();
        assert!((g.value - 0.12).abs() < 1e-15);
        let g = guarantee_report(&stopped(StopReason::Budget, 0.3), 0.1, &p).unwrap();
        assert!(g.budget_stop && (g.value - 0.32).abs() < 1e-15);
        assert!(guarantee_report(&RunHistory::new("x"), 0.1, &p).is_none());
    }

    #[test]
    fn bound_reduces_to_s_for_bayes() {
        let s = uncertainty_width(&[2.0], &[1.5], &[0.5], 3);
        let expect = (8.0 / 3f64.ln() * 4.0 * 1.5 / 4.0).sqrt();
        assert!((s - expect).abs() < 1e-12);
        let risks = [crate::risk::RiskSpec::bayes(0)];
        let b = termination_bound(s, &risks, &ErrorParams::default(), Mode::Simulator).unwrap();
        assert_eq!(b, s);
        assert_eq!(uncertainty_width(&[3.0], &[0.0], &[0.1], 0), 0.0);
    }
}
