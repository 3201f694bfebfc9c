use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rayon::prelude::*;

use crate::gp::{GPState, JointPoint};
use crate::pareto::{dist_to_dominated, BoxTable, ParetoSet};
use crate::risk::EnvModel;

/// Lowest-index argmax.
pub(crate) fn argmax(values: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// Acquisition `a(x) = dist(UCB(x), Dom(LCB(pi_hat)))` for every design.
pub fn acquisition_values(table: &BoxTable, pi_hat: &ParetoSet) -> Vec<f64> {
    let front = table.front_lcbs(pi_hat);
    (0..table.n_designs())
        .into_par_iter()
        .map(|x| dist_to_dominated(table.ucb(x), &front).expect("consistent lengths"))
        .collect()
}

/// Next design: the maximizer of the acquisition (lowest index on ties),
/// with the attained value and the estimated Pareto set it was based on.
pub fn select_design(table: &BoxTable) -> (usize, f64, ParetoSet) {
    let pi_hat = table.pareto_set();
    let (x, a) = argmax(&acquisition_values(table, &pi_hat));
    (x, a, pi_hat)
}

/// Simulator-mode environment choice: the support point maximizing
/// `sum_m 2 beta_m^{1/2} sigma_m(x, w)`.
pub fn select_env(gps: &[GPState], design: usize, beta_sqrts: &[f64], support: &[usize]) -> (usize, f64) {
    let scores: Vec<f64> = support
        .iter()
        .map(|&w| {
            gps.iter()
                .zip(beta_sqrts)
                .map(|(gp, b)| 2.0 * b * gp.posterior(JointPoint::new(design, w)).1)
                .sum()
        })
        .collect();
    let (i, v) = argmax(&scores);
    (support[i], v)
}

/// Draws an environment index from the design's distribution.
pub fn sample_env_uncontrollable<R: Rng + ?Sized>(env: &EnvModel, design: usize, rng: &mut R) -> usize {
    let d = env.for_design(design);
    if d.support.len() == 1 {
        return d.support[0];
    }
    let idx = WeightedIndex::new(&d.weights).expect("validated weights");
    d.support[idx.sample(rng)]
}
