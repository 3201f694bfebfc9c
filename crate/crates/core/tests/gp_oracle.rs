mod common;

use std::sync::Arc;

use proptest::prelude::*;
use riskfront::gp::{GPState, JointPoint, JointSpace, KernelSpec, NoiseModel, REBUILD_INTERVAL};

fn se(ls: f64, var: f64) -> impl Fn(&[f64], &[f64]) -> f64 {
    move |a, b| {
        let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        var * (-d2 / ls).exp()
    }
}

fn coords(space: &JointSpace, p: JointPoint) -> Vec<f64> {
    space.design(p.design_index).iter().chain(space.env(p.env_index)).copied().collect()
}

fn grid_space(nd: usize, ne: usize) -> Arc<JointSpace> {
    let designs = (0..nd).map(|i| vec![i as f64 * 0.37, (i % 3) as f64 * 0.5]).collect();
    let envs = (0..ne).map(|j| vec![j as f64 * 0.45 - 0.5]).collect();
    Arc::new(JointSpace::new(designs, envs).unwrap())
}

fn check_against_dense(gp: &GPState, obs: &[(JointPoint, f64)], ls: f64, var: f64, noise: &[f64], tol: f64) {
    let space = gp.space().clone();
    let train: Vec<Vec<f64>> = obs.iter().map(|(p, _)| coords(&space, *p)).collect();
    let y: Vec<f64> = obs.iter().map(|o| o.1).collect();
    let test: Vec<Vec<f64>> = (0..space.len()).map(|f| coords(&space, space.point(f))).collect();
    let (m, v) = common::dense_posterior(se(ls, var), &train, &y, noise, &test);
    for f in 0..space.len() {
        let (mu, sd) = gp.posterior(space.point(f));
        assert!((mu - m[f]).abs() < tol, "mean at {f}: {mu} vs {}", m[f]);
        assert!((sd * sd - v[f].max(0.0)).abs() < tol, "var at {f}: {} vs {}", sd * sd, v[f]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn incremental_batch_and_dense_agree(
        nd in 2usize..8,
        ne in 1usize..4,
        ls in 0.3f64..3.0,
        var in 0.5f64..2.0,
        noise in 1e-3f64..0.5,
        picks in prop::collection::vec((0usize..64, -2.0f64..2.0), 1..30),
    ) {
        let space = grid_space(nd, ne);
        let kernel = KernelSpec::gaussian(ls, var);
        let obs: Vec<(JointPoint, f64)> = picks
            .iter()
            .map(|&(i, y)| (space.point(i % space.len()), y))
            .collect();
        let mut inc = GPState::new(space.clone(), kernel, NoiseModel::homoscedastic(noise), 0.0).unwrap();
        for &(p, y) in &obs {
            inc = inc.update(p, y).unwrap();
        }
        let batch = GPState::from_observations(space.clone(), kernel, NoiseModel::homoscedastic(noise), 0.0, &obs).unwrap();
        let cached = batch.clone().with_grid_cache();
        for f in 0..space.len() {
            let p = space.point(f);
            let (a, b, c) = (inc.posterior(p), batch.posterior(p), cached.posterior(p));
            prop_assert!((a.0 - b.0).abs() < 1e-8 && (a.1 - b.1).abs() < 1e-8);
            prop_assert!((a.0 - c.0).abs() < 1e-8 && (a.1 - c.1).abs() < 1e-8);
        }
        check_against_dense(&inc, &obs, ls, var, &vec![noise; obs.len()], 1e-8);
    }
}

#[test]
fn many_updates_cross_rebuilds() {
    let space = grid_space(30, 3);
    let kernel = KernelSpec::gaussian(1.0, 1.0);
    let mut r = common::rng(4);
    let obs: Vec<(JointPoint, f64)> = (0..3 * REBUILD_INTERVAL + 5)
        .map(|i| (space.point((i * 7) % space.len()), (i as f64 * 0.3).sin() + 0.1 * rand::Rng::random::<f64>(&mut r)))
        .collect();
    let mut gp = GPState::new(space.clone(), kernel, NoiseModel::homoscedastic(0.05), 0.0)
        .unwrap()
        .with_grid_cache();
    for &(p, y) in &obs {
        gp = gp.update(p, y).unwrap();
    }
    check_against_dense(&gp, &obs, 1.0, 1.0, &vec![0.05; obs.len()], 1e-8);
}

#[test]
fn heteroscedastic_matches_dense() {
    let space = grid_space(6, 2);
    let variances: Vec<f64> = (0..space.len()).map(|f| 0.01 + 0.02 * (f % 5) as f64).collect();
    let noise = NoiseModel::Heteroscedastic {
        variances: variances.clone(),
        lower: 0.01,
        upper: 0.09,
    };
    let obs: Vec<(JointPoint, f64)> = [0usize, 3, 5, 8, 11, 3]
        .iter()
        .enumerate()
        .map(|(k, &f)| (space.point(f), k as f64 * 0.2 - 0.4))
        .collect();
    let mut gp = GPState::new(space.clone(), KernelSpec::gaussian(0.8, 1.5), noise, 0.0).unwrap();
    for &(p, y) in &obs {
        gp = gp.update(p, y).unwrap();
    }
    let nv: Vec<f64> = obs.iter().map(|(p, _)| variances[space.flat(*p)]).collect();
    check_against_dense(&gp, &obs, 0.8, 1.5, &nv, 1e-8);
}

#[test]
fn information_gain_matches_log_det() {
    let space = grid_space(8, 2);
    let obs: Vec<(JointPoint, f64)> = (0..10).map(|i| (space.point((i * 3) % 16), 0.1 * i as f64)).collect();
    let gp = GPState::from_observations(space.clone(), KernelSpec::gaussian(1.2, 1.0), NoiseModel::homoscedastic(0.1), 0.0, &obs).unwrap();
    let train: Vec<Vec<f64>> = obs.iter().map(|(p, _)| coords(&space, *p)).collect();
    let want = common::dense_gain(se(1.2, 1.0), &train, 0.1);
    assert!((gp.realized_information_gain() - want).abs() < 1e-9, "{} vs {want}", gp.realized_information_gain());
}

#[test]
fn noiseless_interpolation_and_path_marginals() {
    let space = grid_space(10, 1);
    let obs: Vec<(JointPoint, f64)> = [1usize, 4, 6, 9].iter().map(|&f| (space.point(f), (f as f64).cos())).collect();
    let gp = GPState::from_observations(space.clone(), KernelSpec::gaussian(1.0, 1.0), NoiseModel::homoscedastic(0.0), 1e-10, &obs).unwrap();
    for &(p, y) in &obs {
        let (m, s) = gp.posterior(p);
        assert!((m - y).abs() < 1e-4 && s < 1e-3);
    }
    let slice: Vec<JointPoint> = (0..space.len()).map(|f| space.point(f)).collect();
    let n = 10_000;
    let paths = gp.sample_paths(&slice, n, 17).unwrap();
    for (i, &p) in slice.iter().enumerate() {
        let (mu, sd) = gp.posterior(p);
        if sd < 1e-3 {
            continue;
        }
        let mean = paths.iter().map(|r| r[i]).sum::<f64>() / n as f64;
        let var = paths.iter().map(|r| (r[i] - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - mu).abs() < 5.0 * sd / (n as f64).sqrt());
        assert!((var - sd * sd).abs() < 5.0 * sd * sd * (2.0 / (n - 1) as f64).sqrt());
    }
    assert_eq!(paths, gp.sample_paths(&slice, n, 17).unwrap());
}
