use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::{cholesky_in_place, cholesky_with_jitter};
use super::{GpError, JointPoint, JointSpace, KernelSpec, NoiseModel};
use crate::rng::{stream_rng, Stream};

/// Number of incremental updates between from-scratch refactorizations.
pub const REBUILD_INTERVAL: usize = 64;

/// Jitter escalation ceiling, relative to the prior variance.
const MAX_RELATIVE_JITTER: f64 = 1e-4;

/// Exact GP posterior state for one objective.
///
/// Holds the lower Cholesky factor `L` of `K + Σ + jitter·I` (row `i` stores
/// `i + 1` entries) and the whitened targets `z = L⁻¹ y`, so that for a query
/// with cross-covariance `k`, `v = L⁻¹ k` gives `mean = v·z` and
/// `var = k(q, q) - v·v`.
///
/// When grid tracking is enabled the state also maintains `V = L⁻¹ K(obs, grid)`
/// together with posterior mean and variance over the whole grid, each
/// observation costing `O(n · |grid|)`.
///
/// Rows are reference counted, so `update` returns a new state that shares
/// all existing rows with its parent.
#[derive(Debug, Clone)]
pub struct GPState {
    space: Arc<JointSpace>,
    kernel: KernelSpec,
    noise: Arc<NoiseModel>,
    base_jitter: f64,
    jitter: f64,
    points: Vec<JointPoint>,
    values: Vec<f64>,
    noise_vars: Vec<f64>,
    factor: Vec<Arc<[f64]>>,
    whitened: Vec<f64>,
    since_rebuild: usize,
    grid: Option<GridCache>,
}

#[derive(Debug, Clone)]
struct GridCache {
    rows: Vec<Arc<[f64]>>,
    mean: Arc<Vec<f64>>,
    var: Arc<Vec<f64>>,
}

impl GPState {
    /// Prior state. `relative_jitter` is multiplied by the prior variance.
    pub fn new(
        space: Arc<JointSpace>,
        kernel: KernelSpec,
        noise: NoiseModel,
        relative_jitter: f64,
    ) -> Result<Self, GpError> {
        kernel.validate()?;
        noise.validate(&space)?;
        if !(relative_jitter.is_finite() && relative_jitter >= 0.0) {
            return Err(GpError::InvalidKernel(format!("jitter {relative_jitter} must be >= 0")));
        }
        let jitter = relative_jitter * kernel.prior_variance();
        Ok(Self {
            space,
            kernel,
            noise: Arc::new(noise),
            base_jitter: relative_jitter,
            jitter,
            points: Vec::new(),
            values: Vec::new(),
            noise_vars: Vec::new(),
            factor: Vec::new(),
            whitened: Vec::new(),
            since_rebuild: 0,
            grid: None,
        })
    }

    /// Batch construction from a list of observations.
    pub fn from_observations(
        space: Arc<JointSpace>,
        kernel: KernelSpec,
        noise: NoiseModel,
        relative_jitter: f64,
        observations: &[(JointPoint, f64)],
    ) -> Result<Self, GpError> {
        let mut s = Self::new(space, kernel, noise, relative_jitter)?;
        for &(p, _) in observations {
            s.space.check(p)?;
        }
        s.points = observations.iter().map(|o| o.0).collect();
        s.values = observations.iter().map(|o| o.1).collect();
        s.noise_vars = s
            .points
            .iter()
            .map(|&p| s.noise.variance_at(&s.space, p))
            .collect();
        s.rebuild()?;
        Ok(s)
    }

    /// Enables posterior tracking over the whole grid.
    pub fn with_grid_cache(mut self) -> Self {
        if self.grid.is_none() {
            self.grid = Some(self.build_grid_cache());
        }
        self
    }

    pub fn space(&self) -> &Arc<JointSpace> {
        &self.space
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    /// Absolute jitter currently on the diagonal.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn n_observations(&self) -> usize {
        self.points.len()
    }

    pub fn observations(&self) -> impl Iterator<Item = (JointPoint, f64)> + '_ {
        self.points.iter().copied().zip(self.values.iter().copied())
    }

    pub fn prior_variance(&self) -> f64 {
        self.kernel.prior_variance()
    }

    fn k(&self, a: JointPoint, b: JointPoint) -> f64 {
        self.kernel.eval_sq(self.space.sq_dist(a, b))
    }

    /// Dense lower factor (n x n, row-major).
    pub fn factor_dense(&self) -> Vec<f64> {
        let n = self.points.len();
        let mut m = vec![0.0; n * n];
        for (i, row) in self.factor.iter().enumerate() {
            m[i * n..i * n + row.len()].copy_from_slice(row);
        }
        m
    }

    /// Dense `K + Σ + jitter·I` (n x n, row-major) for the current jitter.
    pub fn system_matrix(&self) -> Vec<f64> {
        let n = self.points.len();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = self.k(self.points[i], self.points[j]);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
            a[i * n + i] += self.noise_vars[i] + self.jitter;
        }
        a
    }

    /// Recomputes the factor (and grid cache) from scratch, escalating the
    /// jitter tenfold on failure.
    fn rebuild(&mut self) -> Result<(), GpError> {
        let n = self.points.len();
        let max = MAX_RELATIVE_JITTER * self.kernel.prior_variance();
        let l = loop {
            let mut a = self.system_matrix();
            if cholesky_in_place(&mut a, n) {
                break a;
            }
            self.jitter = self.escalated_jitter();
            if self.jitter > max * (1.0 + 1e-12) {
                return Err(GpError::Factorization { jitter: max });
            }
        };
        self.factor = (0..n).map(|i| Arc::from(&l[i * n..i * n + i + 1])).collect();
        self.whitened = forward_solve(&self.factor, &self.values);
        self.since_rebuild = 0;
        if self.grid.is_some() {
            self.grid = Some(self.build_grid_cache());
        }
        Ok(())
    }

    fn build_grid_cache(&self) -> GridCache {
        let g = self.space.len();
        let n = self.points.len();
        let prior = self.kernel.prior_variance();
        let mut rows: Vec<Arc<[f64]>> = Vec::with_capacity(n);
        let mut mean = vec![0.0; g];
        let mut var = vec![prior; g];
        for i in 0..n {
            let row = self.next_grid_row(i, &rows);
            for (idx, v) in row.iter().enumerate() {
                mean[idx] += v * self.whitened[i];
                var[idx] -= v * v;
            }
            rows.push(Arc::from(row));
        }
        GridCache {
            rows,
            mean: Arc::new(mean),
            var: Arc::new(var),
        }
    }

    /// Row `i` of `V = L⁻¹ K(obs, grid)` given rows `0..i`.
    fn next_grid_row(&self, i: usize, rows: &[Arc<[f64]>]) -> Vec<f64> {
        let g = self.space.len();
        let li = &self.factor[i];
        let pi = self.points[i];
        let mut row: Vec<f64> = (0..g).map(|f| self.k(pi, self.space.point(f))).collect();
        for (j, rj) in rows.iter().enumerate().take(i) {
            let c = li[j];
            if c != 0.0 {
                for (r, v) in row.iter_mut().zip(rj.iter()) {
                    *r -= c * v;
                }
            }
        }
        let d = li[i];
        for r in row.iter_mut() {
            *r /= d;
        }
        row
    }

    /// `L⁻¹ k(obs, p)`.
    fn whiten_cross(&self, p: JointPoint) -> Vec<f64> {
        if let Some(g) = &self.grid {
            let f = self.space.flat(p);
            return g.rows.iter().map(|r| r[f]).collect();
        }
        let k: Vec<f64> = self.points.iter().map(|&q| self.k(q, p)).collect();
        forward_solve(&self.factor, &k)
    }

    /// Returns a new state with `(point, value)` appended.
    pub fn update(&self, point: JointPoint, value: f64) -> Result<GPState, GpError> {
        self.space.check(point)?;
        let mut next = self.clone();
        next.points.push(point);
        next.values.push(value);
        let nv = self.noise.variance_at(&self.space, point);
        next.noise_vars.push(nv);

        if self.since_rebuild + 1 >= REBUILD_INTERVAL {
            next.rebuild()?;
            return Ok(next);
        }

        let k: Vec<f64> = self.points.iter().map(|&q| self.k(q, point)).collect();
        let l = forward_solve(&self.factor, &k);
        let d2 = self.k(point, point) + nv + self.jitter - dot(&l, &l);
        if !(d2 > 0.0 && d2.is_finite()) {
            // escalate and refactor everything with the larger jitter
            next.jitter = self.escalated_jitter();
            next.rebuild()?;
            return Ok(next);
        }
        let d = d2.sqrt();
        let z = (value - dot(&l, &self.whitened)) / d;
        let mut row = l;
        row.push(d);
        next.factor.push(Arc::from(row));
        next.whitened.push(z);
        next.since_rebuild = self.since_rebuild + 1;

        if let Some(cache) = &self.grid {
            let i = next.points.len() - 1;
            let vrow = next.next_grid_row(i, &cache.rows);
            let mut mean = (*cache.mean).clone();
            let mut var = (*cache.var).clone();
            for (idx, v) in vrow.iter().enumerate() {
                mean[idx] += v * z;
                var[idx] -= v * v;
            }
            let mut rows = cache.rows.clone();
            rows.push(Arc::from(vrow));
            next.grid = Some(GridCache {
                rows,
                mean: Arc::new(mean),
                var: Arc::new(var),
            });
        }
        Ok(next)
    }

    /// Next jitter level: tenfold, starting from `1e-10 · prior` when zero.
    fn escalated_jitter(&self) -> f64 {
        (self.jitter * 10.0).max(1e-10 * self.kernel.prior_variance())
    }

    /// Posterior mean and standard deviation at `p`.
    pub fn posterior(&self, p: JointPoint) -> (f64, f64) {
        let prior = self.kernel.prior_variance();
        if let Some(g) = &self.grid {
            let f = self.space.flat(p);
            return (g.mean[f], g.var[f].clamp(0.0, prior).sqrt());
        }
        let v = self.whiten_cross(p);
        let mean = dot(&v, &self.whitened);
        let var = (prior - dot(&v, &v)).clamp(0.0, prior);
        (mean, var.sqrt())
    }

    /// Posterior mean and standard deviation at every grid point (flat order).
    pub fn posterior_grid(&self) -> (Vec<f64>, Vec<f64>) {
        let prior = self.kernel.prior_variance();
        if let Some(g) = &self.grid {
            let sd = g.var.iter().map(|v| v.clamp(0.0, prior).sqrt()).collect();
            return ((*g.mean).clone(), sd);
        }
        (0..self.space.len())
            .map(|f| self.posterior(self.space.point(f)))
            .unzip()
    }

    /// Joint posterior mean and covariance over `slice` (row-major covariance).
    pub fn posterior_joint(&self, slice: &[JointPoint]) -> (Vec<f64>, Vec<f64>) {
        let s = slice.len();
        let vs: Vec<Vec<f64>> = slice.iter().map(|&p| self.whiten_cross(p)).collect();
        let mean: Vec<f64> = vs.iter().map(|v| dot(v, &self.whitened)).collect();
        let mut cov = vec![0.0; s * s];
        for a in 0..s {
            for b in 0..=a {
                let c = self.k(slice[a], slice[b]) - dot(&vs[a], &vs[b]);
                cov[a * s + b] = c;
                cov[b * s + a] = c;
            }
        }
        (mean, cov)
    }

    /// `count` independent draws from the joint posterior over `slice`,
    /// one row per draw. Deterministic in `seed`.
    pub fn sample_paths(
        &self,
        slice: &[JointPoint],
        count: usize,
        seed: u64,
    ) -> Result<Vec<Vec<f64>>, GpError> {
        if slice.is_empty() || count == 0 {
            return Err(GpError::EmptySample);
        }
        for &p in slice {
            self.space.check(p)?;
        }
        let s = slice.len();
        let (mean, cov) = self.posterior_joint(slice);
        let prior = self.kernel.prior_variance();
        let start = (self.base_jitter * prior).max(1e-12 * prior);
        let (l, _) = cholesky_with_jitter(&cov, s, start, MAX_RELATIVE_JITTER * prior)
            .ok_or(GpError::Factorization {
                jitter: MAX_RELATIVE_JITTER * prior,
            })?;
        let mut rng = stream_rng(seed, Stream::GpSampling, 0);
        let mut out = Vec::with_capacity(count);
        let mut eps = vec![0.0; s];
        for _ in 0..count {
            for e in eps.iter_mut() {
                *e = rng.sample(StandardNormal);
            }
            let path: Vec<f64> = (0..s)
                .map(|i| mean[i] + dot(&l[i * s..i * s + i + 1], &eps[..=i]))
                .collect();
            out.push(path);
        }
        Ok(out)
    }

    /// `½ log det(I + Σ⁻¹ K)` on the executed observation sequence, with the
    /// jitter folded into Σ.
    pub fn realized_information_gain(&self) -> f64 {
        let log_det_a: f64 = self.factor.iter().enumerate().map(|(i, r)| r[i].ln()).sum();
        let log_det_noise: f64 = self
            .noise_vars
            .iter()
            .map(|v| (v + self.jitter).max(f64::MIN_POSITIVE).ln())
            .sum();
        (log_det_a - 0.5 * log_det_noise).max(0.0)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `L x = b` for the ragged lower factor.
fn forward_solve(factor: &[Arc<[f64]>], b: &[f64]) -> Vec<f64> {
    let mut x = Vec::with_capacity(b.len());
    for (i, row) in factor.iter().enumerate() {
        let s = b[i] - dot(&row[..i], &x);
        x.push(s / row[i]);
    }
    x
}
