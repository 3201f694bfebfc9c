//! Python bindings. Risk specs cross the boundary as JSON strings in the
//! same shape as the config file's `risks` entries.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::riskfront::benchmarks::{self, SyntheticKind};
use ::riskfront::cli::{self, RunResult};
use ::riskfront::gp::{GPState, JointPoint, JointSpace, KernelSpec, NoiseModel};
use ::riskfront::pareto::{self, ParetoSet};
use ::riskfront::risk::{self, Band, RiskSpec};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_risk(json: &str) -> PyResult<RiskSpec> {
    let spec: RiskSpec = serde_json::from_str(json).map_err(value_err)?;
    spec.kind.validate().map_err(value_err)?;
    Ok(spec)
}

/// Exact GP posterior over a finite design x environment grid with the
/// Gaussian kernel `variance * exp(-d^2 / length_scale)`.
#[pyclass(name = "GaussianProcess")]
struct PyGaussianProcess {
    state: GPState,
}

#[pymethods]
impl PyGaussianProcess {
    #[new]
    #[pyo3(signature = (designs, envs=None, length_scale=1.0, variance=1.0, noise=1e-6, jitter=1e-10))]
    fn new(
        designs: Vec<Vec<f64>>,
        envs: Option<Vec<Vec<f64>>>,
        length_scale: f64,
        variance: f64,
        noise: f64,
        jitter: f64,
    ) -> PyResult<Self> {
        let space = match envs {
            Some(e) => JointSpace::new(designs, e),
            None => JointSpace::design_only(designs),
        }
        .map_err(value_err)?;
        let state = GPState::new(
            Arc::new(space),
            KernelSpec::gaussian(length_scale, variance),
            NoiseModel::homoscedastic(noise),
            jitter,
        )
        .map_err(value_err)?;
        Ok(Self { state })
    }

    /// Adds the observation `y` at grid point `(design, env)`.
    #[pyo3(signature = (design, y, env=0))]
    fn update(&mut self, design: usize, y: f64, env: usize) -> PyResult<()> {
        self.state = self.state.update(JointPoint::new(design, env), y).map_err(value_err)?;
        Ok(())
    }

    /// Posterior `(mean, std)` at `(design, env)`.
    #[pyo3(signature = (design, env=0))]
    fn posterior(&self, design: usize, env: usize) -> PyResult<(f64, f64)> {
        let p = JointPoint::new(design, env);
        self.state.space().check(p).map_err(value_err)?;
        Ok(self.state.posterior(p))
    }

    /// Posterior means and stds over the whole grid, design-major.
    fn posterior_grid(&self) -> (Vec<f64>, Vec<f64>) {
        self.state.posterior_grid()
    }

    /// `count` joint posterior draws over `points` (list of `(design, env)`).
    fn sample_paths(&self, points: Vec<(usize, usize)>, count: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
        let slice: Vec<JointPoint> = points.into_iter().map(|(d, e)| JointPoint::new(d, e)).collect();
        self.state.sample_paths(&slice, count, seed).map_err(value_err)
    }

    fn information_gain(&self) -> f64 {
        self.state.realized_information_gain()
    }

    #[getter]
    fn n_observations(&self) -> usize {
        self.state.n_observations()
    }
}

/// Credible interval `(lcb, ucb)` of a risk from per-objective bands.
#[pyfunction]
fn bound_decomposition(risk_json: &str, bands: Vec<(Vec<f64>, Vec<f64>)>, weights: Vec<f64>) -> PyResult<(f64, f64)> {
    let spec = parse_risk(risk_json)?;
    let bands = bands
        .into_iter()
        .map(|(l, u)| Band::new(l, u))
        .collect::<Result<Vec<_>, _>>()
        .map_err(value_err)?;
    let r = risk::bound_decomposition(&spec, &bands, &weights).map_err(value_err)?;
    Ok((r.lcb, r.ucb))
}

/// Risk of exact per-objective values under `weights`.
#[pyfunction]
fn evaluate_risk(risk_json: &str, values: Vec<Vec<f64>>, weights: Vec<f64>) -> PyResult<f64> {
    let spec = parse_risk(risk_json)?;
    risk::evaluate(&spec, &values, &weights).map_err(value_err)
}

/// Width function of a risk at uncertainty width `a`.
#[pyfunction]
fn q_function(risk_json: &str, a: f64) -> PyResult<f64> {
    risk::q_function(&parse_risk(risk_json)?, a).map_err(value_err)
}

#[pyfunction]
fn dominates(a: Vec<f64>, b: Vec<f64>) -> PyResult<bool> {
    pareto::dominates(&a, &b).map_err(value_err)
}

#[pyfunction]
fn pareto_front_indices(points: Vec<Vec<f64>>) -> PyResult<Vec<usize>> {
    pareto::pareto_front_indices(&points).map_err(value_err)
}

/// Chebyshev distance from `u` to the region dominated by `front`.
#[pyfunction]
fn dist_to_dominated(u: Vec<f64>, front: Vec<Vec<f64>>) -> PyResult<f64> {
    pareto::dist_to_dominated(&u, &front).map_err(value_err)
}

#[pyfunction]
fn hypervolume(points: Vec<Vec<f64>>, reference: Vec<f64>) -> PyResult<f64> {
    pareto::hypervolume(&points, &reference).map_err(value_err)
}

/// `(recall, precision)` parts of the inference discrepancy; the
/// discrepancy is their maximum.
#[pyfunction]
fn inference_discrepancy(pi_hat: Vec<usize>, true_values: Vec<Vec<f64>>) -> PyResult<(f64, f64)> {
    let d = pareto::inference_discrepancy(&ParetoSet::new(pi_hat), &true_values).map_err(value_err)?;
    Ok((d.recall, d.precision))
}

#[pyfunction]
fn eval_synthetic(kind: &str, x: Vec<f64>) -> PyResult<f64> {
    let kind: SyntheticKind = serde_json::from_value(serde_json::Value::String(kind.to_string())).map_err(value_err)?;
    benchmarks::eval_synthetic(kind, &x).map_err(value_err)
}

/// Normalized standard normal weights on `support`.
#[pyfunction]
fn discretized_normal(support: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    let m = benchmarks::discretized_normal(&support).map_err(value_err)?;
    Ok(m.distributions[0].weights.clone())
}

/// Parses a TOML config and returns its normalized form.
#[pyfunction]
fn validate_config(text: &str) -> PyResult<String> {
    let c = cli::parse_config(text).map_err(value_err)?;
    Ok(cli::to_toml(&c))
}

/// Runs a TOML config in memory and returns the JSON summary.
#[pyfunction]
fn run_config(text: &str) -> PyResult<String> {
    let config = cli::parse_config(text).map_err(value_err)?;
    let result = cli::execute(&config).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(match &result {
        RunResult::Problem { seeds, histories, .. } => {
            cli::to_json(&cli::run_summary(config.method.name(), config.seed, seeds, histories))
        }
        RunResult::Benchmark(r) => cli::to_json(&cli::benchmark_summary(r)),
    })
}

#[pymodule]
#[pyo3(name = "riskfront")]
fn riskfront_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGaussianProcess>()?;
    m.add_function(wrap_pyfunction!(bound_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_risk, m)?)?;
    m.add_function(wrap_pyfunction!(q_function, m)?)?;
    m.add_function(wrap_pyfunction!(dominates, m)?)?;
    m.add_function(wrap_pyfunction!(pareto_front_indices, m)?)?;
    m.add_function(wrap_pyfunction!(dist_to_dominated, m)?)?;
    m.add_function(wrap_pyfunction!(hypervolume, m)?)?;
    m.add_function(wrap_pyfunction!(inference_discrepancy, m)?)?;
    m.add_function(wrap_pyfunction!(eval_synthetic, m)?)?;
    m.add_function(wrap_pyfunction!(discretized_normal, m)?)?;
    m.add_function(wrap_pyfunction!(validate_config, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
