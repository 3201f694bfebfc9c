use std::sync::Arc;

use riskfront::benchmarks::{build_truth, zdt1_iu};
use riskfront::optimizer::{run_baseline, BaselineKind, BoundMethod, Method, Mode, Optimizer, ProblemSpec, StopReason};

fn small(budget: usize) -> ProblemSpec {
    zdt1_iu(5, 3, budget).unwrap()
}

fn run(p: ProblemSpec, method: Method, seed: u64) -> riskfront::optimizer::RunHistory {
    let truth = Arc::new(build_truth(&p).unwrap());
    Optimizer::new(Arc::new(p), method, seed, Some(truth)).unwrap().run().unwrap()
}

#[test]
fn infinite_epsilon_stops_before_observing() {
    let mut p = small(20);
    p.epsilon = f64::INFINITY;
    let h = run(p, Method::Proposed, 1);
    assert_eq!(h.records.len(), 1);
    assert_eq!(h.stop_reason, Some(StopReason::Epsilon));
    assert_eq!(h.records[0].env_index, None);
    // Only the initial point was evaluated.
    assert_eq!(h.evaluations, 1);
}

#[test]
fn budget_bounds_rows_and_evaluations() {
    for method in [Method::Proposed, Method::Random, Method::Us] {
        let h = run(small(12), method, 3);
        assert!(h.records.len() <= 12);
        assert!(h.evaluations <= 13);
        let reason = h.stop_reason.unwrap();
        if method != Method::Proposed {
            assert_eq!(reason, StopReason::Budget);
            assert_eq!(h.records.len(), 12);
            assert_eq!(h.evaluations, 13);
        }
        assert!(h.records.last().unwrap().stopped);
        assert!(h.final_inference_discrepancy.is_some() && h.final_phv_regret.is_some());
        for r in &h.records {
            assert!(r.beta_sqrts.iter().all(|b| *b == 3.0));
        }
    }
}

#[test]
fn discrepancy_shrinks_with_budget() {
    let short = run(small(2), Method::Proposed, 5);
    let long = run(small(60), Method::Proposed, 5);
    assert!(long.final_inference_discrepancy.unwrap() <= short.final_inference_discrepancy.unwrap() + 1e-12);
}

#[test]
fn uncontrollable_and_sampling_modes_run() {
    let mut p = small(8);
    p.mode = Mode::Uncontrollable;
    p.bound_method = BoundMethod::Sampling { samples: 64 };
    let h = run(p.clone(), Method::Proposed, 2);
    assert!(!h.records.is_empty());
    assert!(h.records.iter().all(|r| r.env_af_value.is_none()));
    assert_eq!(h, run(p, Method::Proposed, 2));
}

#[test]
fn baselines_share_instrumentation() {
    let p = Arc::new(small(6));
    let truth = Arc::new(build_truth(&p).unwrap());
    for kind in [BaselineKind::Random, BaselineKind::Us, BaselineKind::NaiveRandom, BaselineKind::NaiveUs] {
        let h = run_baseline(kind, p.clone(), 4, Some(truth.clone())).unwrap();
        assert_eq!(h.method, kind.name());
        assert_eq!(h.stop_reason, Some(StopReason::Budget));
        assert!(h.records.iter().all(|r| r.inference_discrepancy.is_some()));
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run(small(15), Method::Proposed, 11));
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run(small(15), Method::Proposed, 11));
    assert_eq!(one, many);
}
