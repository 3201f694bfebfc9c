use serde::{Deserialize, Serialize};

use super::BenchmarkError;
use crate::gp::JointPoint;
use crate::optimizer::ProblemSpec;
use crate::pareto::{componentwise_min, pareto_front_indices, ObjectiveVector};
use crate::risk::{evaluate, DistributionKind, EnvDistribution, EnvModel};

/// Exact risk vectors of every design and the resulting true front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthTable {
    pub risk_values: Vec<ObjectiveVector>,
    /// Designs whose risk vectors are on the true front.
    pub z_star: Vec<usize>,
    /// Componentwise minimum of the risk vectors (hypervolume reference).
    pub reference: ObjectiveVector,
}

/// Evaluates every risk of `problem` directly on the tabulated objectives.
pub fn build_truth(problem: &ProblemSpec) -> Result<TruthTable, BenchmarkError> {
    let space = &problem.space;
    let mut risk_values = Vec::with_capacity(space.n_designs());
    for x in 0..space.n_designs() {
        let dist = problem.env_model.for_design(x);
        let values: Vec<Vec<f64>> = (0..problem.n_objectives())
            .map(|m| {
                dist.support
                    .iter()
                    .map(|&w| problem.value(m, JointPoint::new(x, w)))
                    .collect()
            })
            .collect();
        let row = problem
            .risks
            .iter()
            .map(|r| evaluate(r, &values, &dist.weights))
            .collect::<Result<Vec<f64>, _>>()?;
        risk_values.push(row);
    }
    let z_star = pareto_front_indices(&risk_values)?;
    let reference = componentwise_min(&risk_values).expect("nonempty design grid");
    Ok(TruthTable {
        risk_values,
        z_star,
        reference,
    })
}

/// Standard normal density ratios on `support`, normalized, shared by all designs.
pub fn discretized_normal(support: &[Vec<f64>]) -> Result<EnvModel, BenchmarkError> {
    if support.is_empty() {
        return Err(BenchmarkError::Empty("support"));
    }
    let raw: Vec<f64> = support
        .iter()
        .map(|w| (-0.5 * w.iter().map(|v| v * v).sum::<f64>()).exp())
        .collect();
    let dist = EnvDistribution::from_unnormalized((0..support.len()).collect(), &raw)?;
    Ok(EnvModel::shared(DistributionKind::DiscretizedNormal, dist))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discretized_normal_shapes() {
        let m = discretized_normal(&[vec![-1.0], vec![0.0], vec![1.0]]).unwrap();
        let w = &m.distributions[0].weights;
        assert!((w[0] - w[2]).abs() < 1e-15 && w[1] > w[0]);
        let one = discretized_normal(&[vec![0.3]]).unwrap();
        assert_eq!(one.distributions[0].weights, vec![1.0]);
        assert!(discretized_normal(&[]).is_err());
    }
}
