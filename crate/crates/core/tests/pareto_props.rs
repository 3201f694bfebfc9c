mod common;

use proptest::prelude::*;
use rand::Rng;
use riskfront::pareto::{
    boundary_distance, dist_to_dominated, dominates, hypervolume, inference_discrepancy, pareto_front_indices,
    phv_regret, ParetoSet,
};

fn point_set(l: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    // Coarse values so ties and duplicates occur.
    prop::collection::vec(prop::collection::vec((0i32..8).prop_map(|v| v as f64 * 0.25), l), 1..12)
}

/// Exact hypervolume by inclusion-exclusion over subsets.
fn inclusion_exclusion(points: &[Vec<f64>], r: &[f64]) -> f64 {
    let n = points.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let mut vol = 1.0;
        for j in 0..r.len() {
            let m = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| points[i][j])
                .fold(f64::INFINITY, f64::min);
            vol *= (m - r[j]).max(0.0);
        }
        total += if mask.count_ones() % 2 == 1 { vol } else { -vol };
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn front_matches_brute_force(l in 1usize..5, pts in point_set(4)) {
        let pts: Vec<Vec<f64>> = pts.into_iter().map(|p| p[..l].to_vec()).collect();
        prop_assert_eq!(pareto_front_indices(&pts).unwrap(), common::brute_front(&pts));
    }

    #[test]
    fn dominance_matches_componentwise(a in prop::collection::vec(-2.0f64..2.0, 3), b in prop::collection::vec(-2.0f64..2.0, 3)) {
        prop_assert_eq!(dominates(&a, &b).unwrap(), common::weakly_dominates(&a, &b));
        prop_assert!(dominates(&a, &a).unwrap());
    }

    #[test]
    fn distance_matches_grid_oracle(l in 2usize..5, pts in point_set(4), u in prop::collection::vec(-0.5f64..2.5, 4)) {
        let front: Vec<Vec<f64>> = pts.into_iter().map(|p| p[..l].to_vec()).collect();
        let u = &u[..l];
        let d = dist_to_dominated(u, &front).unwrap();
        let g = common::grid_distance(u, &front, 1e-3);
        prop_assert!(d <= g + 1e-12 && g - d <= 1e-3 + 1e-12, "analytic {} grid {}", d, g);
        // Inside the region the boundary distance is how far `u` can move up.
        if d == 0.0 {
            let b = boundary_distance(u, &front).unwrap();
            let mut k = 0u64;
            while front.iter().any(|f| common::weakly_dominates(f, &u.iter().map(|v| v + (k + 1) as f64 * 1e-3).collect::<Vec<_>>())) {
                k += 1;
            }
            prop_assert!((b - k as f64 * 1e-3).abs() <= 1e-3 + 1e-12);
        }
    }

    #[test]
    fn hypervolume_matches_inclusion_exclusion(l in 2usize..5, pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 4), 1..9)) {
        let pts: Vec<Vec<f64>> = pts.into_iter().map(|p| p[..l].to_vec()).collect();
        let r = vec![0.1; l];
        let hv = hypervolume(&pts, &r).unwrap();
        let ie = inclusion_exclusion(&pts, &r);
        prop_assert!((hv - ie).abs() < 1e-10, "{} vs {}", hv, ie);
    }

    #[test]
    fn regret_shrinks_on_nested_sets(pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 2..10), order_seed in 0u64..1000) {
        let r = riskfront::pareto::componentwise_min(&pts).unwrap();
        let mut rng = common::rng(order_seed);
        let mut idx: Vec<usize> = (0..pts.len()).collect();
        for i in (1..idx.len()).rev() {
            idx.swap(i, rng.random_range(0..=i));
        }
        let mut prev = f64::INFINITY;
        for k in 1..=idx.len() {
            let reg = phv_regret(&idx[..k], &pts, &r).unwrap();
            prop_assert!(reg <= prev + 1e-12 && reg >= 0.0);
            prev = reg;
        }
        prop_assert!(prev < 1e-12);
    }

    #[test]
    fn discrepancy_is_zero_for_the_true_front(pts in point_set(3)) {
        let z = pareto_front_indices(&pts).unwrap();
        let d = inference_discrepancy(&ParetoSet::new(z.clone()), &pts).unwrap();
        prop_assert!(d.total() < 1e-12);
        // Any superset has zero recall.
        let all = inference_discrepancy(&ParetoSet::new((0..pts.len()).collect()), &pts).unwrap();
        prop_assert!(all.recall < 1e-12);
    }
}

#[test]
fn hypervolume_2d_matches_monte_carlo() {
    let mut r = common::rng(7);
    for _ in 0..10 {
        let n = r.random_range(1..12);
        let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![r.random::<f64>(), r.random::<f64>()]).collect();
        let reference = [0.0, 0.0];
        let exact = hypervolume(&pts, &reference).unwrap();
        let (mc, sd) = common::mc_hypervolume(&pts, &reference, 100_000, &mut r);
        assert!((exact - mc).abs() <= 3.0 * sd.max(1e-12), "{exact} vs {mc} ± {sd}");
    }
}

#[test]
fn discrepancy_matches_definition() {
    let f = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.4, 0.4], vec![0.9, -0.5]];
    // Estimate {2, 3}: recall is the worst true-front point's gap to Dom({f2, f3}).
    let d = inference_discrepancy(&ParetoSet::new(vec![2, 3]), &f).unwrap();
    let est = [f[2].clone(), f[3].clone()];
    let want_recall = [&f[0], &f[1]]
        .iter()
        .map(|z| common::grid_distance(z, &est, 1e-4))
        .fold(0.0, f64::max);
    assert!((d.recall - want_recall).abs() <= 1e-4);
    // f2 sits 0.1 below the true front boundary; f3 is 0.1 inside too.
    assert!((d.precision - 0.1).abs() < 1e-12);
}
