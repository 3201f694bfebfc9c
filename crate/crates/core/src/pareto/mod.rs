//! Dominance, fronts, bounding boxes, the maximin acquisition distance,
//! inference discrepancy and hypervolume. Maximization throughout.

mod dominance;
mod hypervolume;

pub use dominance::{
    boundary_distance, dist_to_dominated, dominates, pareto_front_indices, signed_gap, strictly_dominates,
};
pub use hypervolume::{componentwise_min, hypervolume, phv_regret};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::risk::RiskInterval;

/// One value per risk measure.
pub type ObjectiveVector = Vec<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParetoError {
    #[error("vector length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("design {design}, risk {risk}: lcb {lcb} exceeds ucb {ucb}")]
    Inverted { design: usize, risk: usize, lcb: f64, ucb: f64 },
    #[error("index {index} out of range for {len} entries")]
    OutOfRange { index: usize, len: usize },
}

/// Design indices whose LCB vectors are on the LCB front.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParetoSet {
    pub members: Vec<usize>,
}

impl ParetoSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Per-design LCB/UCB vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxTable {
    lcb: Vec<ObjectiveVector>,
    ucb: Vec<ObjectiveVector>,
}

/// Assembles the box table from `intervals[design][risk]`.
pub fn build_box_table(intervals: &[Vec<RiskInterval>]) -> Result<BoxTable, ParetoError> {
    let first = intervals.first().ok_or(ParetoError::Empty("interval table"))?;
    let l = first.len();
    if l == 0 {
        return Err(ParetoError::Empty("risk list"));
    }
    let mut lcb = Vec::with_capacity(intervals.len());
    let mut ucb = Vec::with_capacity(intervals.len());
    for (design, row) in intervals.iter().enumerate() {
        if row.len() != l {
            return Err(ParetoError::LengthMismatch {
                expected: l,
                found: row.len(),
            });
        }
        for (risk, iv) in row.iter().enumerate() {
            if !(iv.lcb <= iv.ucb) {
                return Err(ParetoError::Inverted {
                    design,
                    risk,
                    lcb: iv.lcb,
                    ucb: iv.ucb,
                });
            }
        }
        lcb.push(row.iter().map(|i| i.lcb).collect());
        ucb.push(row.iter().map(|i| i.ucb).collect());
    }
    Ok(BoxTable { lcb, ucb })
}

impl BoxTable {
    pub fn n_designs(&self) -> usize {
        self.lcb.len()
    }

    pub fn n_risks(&self) -> usize {
        self.lcb[0].len()
    }

    pub fn lcb(&self, design: usize) -> &[f64] {
        &self.lcb[design]
    }

    pub fn ucb(&self, design: usize) -> &[f64] {
        &self.ucb[design]
    }

    pub fn lcbs(&self) -> &[ObjectiveVector] {
        &self.lcb
    }

    pub fn ucbs(&self) -> &[ObjectiveVector] {
        &self.ucb
    }

    /// Estimated Pareto set: designs whose LCB is on the LCB front.
    pub fn pareto_set(&self) -> ParetoSet {
        ParetoSet::new(pareto_front_indices(&self.lcb).expect("nonempty table"))
    }

    pub fn front_lcbs(&self, set: &ParetoSet) -> Vec<ObjectiveVector> {
        set.members.iter().map(|&i| self.lcb[i].clone()).collect()
    }
}

/// Recall-like and precision-like parts of the inference discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    /// Largest distance from a true front point to the estimated front.
    pub recall: f64,
    /// Largest distance from an estimated image to the true front.
    pub precision: f64,
}

impl Discrepancy {
    pub fn total(&self) -> f64 {
        self.recall.max(self.precision)
    }
}

/// Inference discrepancy of `pi_hat` against the true risk vectors of every
/// design. Distances are Chebyshev distances to the boundary of the
/// dominated region of the other set.
pub fn inference_discrepancy(pi_hat: &ParetoSet, true_f: &[ObjectiveVector]) -> Result<Discrepancy, ParetoError> {
    if pi_hat.is_empty() {
        return Err(ParetoError::Empty("estimated Pareto set"));
    }
    let mut est = Vec::with_capacity(pi_hat.len());
    for &i in &pi_hat.members {
        est.push(
            true_f
                .get(i)
                .ok_or(ParetoError::OutOfRange { index: i, len: true_f.len() })?
                .clone(),
        );
    }
    let z_star: Vec<ObjectiveVector> = pareto_front_indices(true_f)?
        .into_iter()
        .map(|i| true_f[i].clone())
        .collect();
    let mut recall: f64 = 0.0;
    for y in &z_star {
        recall = recall.max(boundary_distance(y, &est)?);
    }
    let mut precision: f64 = 0.0;
    for y in &est {
        precision = precision.max(boundary_distance(y, &z_star)?);
    }
    Ok(Discrepancy { recall, precision })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(l: f64, u: f64) -> RiskInterval {
        RiskInterval::new(l, u).unwrap()
    }

    #[test]
    fn box_table_assembly() {
        let t = build_box_table(&[vec![iv(0.0, 1.0), iv(2.0, 3.0)]]).unwrap();
        assert_eq!(t.lcb(0), &[0.0, 2.0]);
        assert_eq!(t.ucb(0), &[1.0, 3.0]);
        let bad = RiskInterval { lcb: 2.0, ucb: 1.0 };
        assert!(matches!(build_box_table(&[vec![bad]]), Err(ParetoError::Inverted { .. })));
        assert!(build_box_table(&[vec![iv(0.0, 1.0)], vec![]]).is_err());
    }

    #[test]
    fn discrepancy_extremes() {
        let f = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.2, 0.2], vec![0.6, 0.6]];
        let all = ParetoSet::new((0..4).collect());
        assert_eq!(inference_discrepancy(&all, &f).unwrap().recall, 0.0);
        let one = ParetoSet::new(vec![3]);
        let d = inference_discrepancy(&one, &f).unwrap();
        assert_eq!(d.precision, 0.0);
        assert!(d.recall > 0.0);
        let exact = ParetoSet::new(vec![0, 1, 3]);
        assert_eq!(inference_discrepancy(&exact, &f).unwrap().total(), 0.0);
    }
}
