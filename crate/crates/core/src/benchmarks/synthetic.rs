use serde::{Deserialize, Serialize};

use super::BenchmarkError;
use crate::gp::JointSpace;

/// Standardized, sign-flipped test functions (maximization).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticKind {
    Booth,
    Matyas,
    Himmelblau,
    Mccormick,
    Zdt1F1,
    Zdt1F2,
    Rosenbrock6,
}

impl SyntheticKind {
    pub fn input_dim(&self) -> usize {
        match self {
            SyntheticKind::Rosenbrock6 => 6,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SyntheticKind::Booth => "booth",
            SyntheticKind::Matyas => "matyas",
            SyntheticKind::Himmelblau => "himmelblau",
            SyntheticKind::Mccormick => "mccormick",
            SyntheticKind::Zdt1F1 => "zdt1_f1",
            SyntheticKind::Zdt1F2 => "zdt1_f2",
            SyntheticKind::Rosenbrock6 => "rosenbrock6",
        }
    }
}

/// Evaluates `kind` at `a`.
pub fn eval_synthetic(kind: SyntheticKind, a: &[f64]) -> Result<f64, BenchmarkError> {
    if a.len() != kind.input_dim() {
        return Err(BenchmarkError::Dimension {
            kind: kind.name(),
            expected: kind.input_dim(),
            found: a.len(),
        });
    }
    Ok(match kind {
        SyntheticKind::Booth => {
            let (x1, x2) = (a[0], a[1]);
            (-(x1 + 2.0 * x2 - 7.0).powi(2) - (2.0 * x1 + x2 - 5.0).powi(2) + 157.35) / 28896.11f64.sqrt()
        }
        SyntheticKind::Matyas => {
            let (x1, x2) = (a[0], a[1]);
            (-0.26 * (x1 * x1 + x2 * x2) + 0.48 * x1 * x2 + 4.3342) / 23.52052f64.sqrt()
        }
        SyntheticKind::Himmelblau => {
            let (x1, x2) = (a[0], a[1]);
            (-(x1 * x1 + x2 - 11.0).powi(2) - (x1 + x2 * x2 - 7.0).powi(2) + 136.71) / 12503.63f64.sqrt()
        }
        SyntheticKind::Mccormick => {
            let (x1, x2) = (a[0], a[1]);
            (-(x1 + x2).sin() - (x1 - x2).powi(2) + 1.5 * x1 - 2.5 * x2 - 1.0 + 17.67) / 460.573f64.sqrt()
        }
        SyntheticKind::Zdt1F1 => -(a[0] - 0.5) / 0.042f64.sqrt(),
        SyntheticKind::Zdt1F2 => {
            let g1 = a[0];
            let h = 1.0 + 9.0 * a[1];
            let g2 = h - (g1 * h).max(0.0).sqrt();
            -(g2 - 3.9085) / 2.5615f64.sqrt()
        }
        SyntheticKind::Rosenbrock6 => {
            let s: f64 = (0..5)
                .map(|i| 100.0 * (a[i + 1] - a[i] * a[i]).powi(2) + (1.0 - a[i]).powi(2))
                .sum();
            (273.45 - s) / 28153.22f64.sqrt()
        }
    })
}

/// How a joint grid point `(x, w)` becomes the function input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputMap {
    /// `x` alone.
    Design,
    /// `x + w` (equal dimensions).
    Sum,
    /// `(x, w)`.
    Concat,
    /// Entries of `(x, w)` picked by index.
    Select { indices: Vec<usize> },
}

impl InputMap {
    pub fn apply(&self, x: &[f64], w: &[f64]) -> Vec<f64> {
        match self {
            InputMap::Design => x.to_vec(),
            InputMap::Sum => x.iter().zip(w).map(|(a, b)| a + b).collect(),
            InputMap::Concat => x.iter().chain(w).copied().collect(),
            InputMap::Select { indices } => {
                let joined: Vec<f64> = x.iter().chain(w).copied().collect();
                indices.iter().map(|&i| joined[i]).collect()
            }
        }
    }
}

/// Values of `kind` on every joint grid point, design-major.
pub fn tabulate(kind: SyntheticKind, map: &InputMap, space: &JointSpace) -> Result<Vec<f64>, BenchmarkError> {
    if let InputMap::Select { indices } = map {
        let width = space.design(0).len() + space.env(0).len();
        if let Some(i) = indices.iter().find(|&&i| i >= width) {
            return Err(BenchmarkError::Dimension {
                kind: kind.name(),
                expected: width,
                found: *i + 1,
            });
        }
    }
    (0..space.len())
        .map(|f| {
            let p = space.point(f);
            eval_synthetic(kind, &map.apply(space.design(p.design_index), space.env(p.env_index)))
        })
        .collect()
}

/// `n` equally spaced points on `[lo, hi]` (the midpoint when `n == 1`).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Cartesian grid with `n` points per dimension over `[lo, hi]^dim`;
/// the first coordinate varies slowest.
pub fn cube_grid(lo: f64, hi: f64, n: usize, dim: usize) -> Vec<Vec<f64>> {
    let axis = linspace(lo, hi, n);
    let mut out: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optima_values() {
        let b = eval_synthetic(SyntheticKind::Booth, &[1.0, 3.0]).unwrap();
        assert!((b - 157.35 / 28896.11f64.sqrt()).abs() < 1e-12);
        assert!((b - 0.925650).abs() < 1e-6);
        let m = eval_synthetic(SyntheticKind::Matyas, &[0.0, 0.0]).unwrap();
        assert!((m - 0.893687).abs() < 1e-6);
        let r = eval_synthetic(SyntheticKind::Rosenbrock6, &[1.0; 6]).unwrap();
        assert!((r - 1.629723).abs() < 1e-6);
    }

    #[test]
    fn dimension_is_checked() {
        assert!(matches!(
            eval_synthetic(SyntheticKind::Booth, &[1.0]),
            Err(BenchmarkError::Dimension { .. })
        ));
    }

    #[test]
    fn grids_and_maps() {
        assert_eq!(linspace(-1.0, 1.0, 3), vec![-1.0, 0.0, 1.0]);
        let g = cube_grid(0.0, 1.0, 2, 2);
        assert_eq!(g, vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
        let m = InputMap::Select { indices: vec![3, 4, 0, 1, 2, 5] };
        assert_eq!(
            m.apply(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]),
            vec![4.0, 5.0, 1.0, 2.0, 3.0, 6.0]
        );
    }
}
