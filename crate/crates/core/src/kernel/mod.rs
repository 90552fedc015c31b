//! Voting kernels: irreducible, reversible transition matrices with zero trace.

mod analysis;
mod generators;
mod io;

pub use analysis::{analyze, eigenvalues, KernelAnalysis, ReturnProbabilities};
pub use generators::{
    build_complete, build_cycle, build_petersen, build_random_regular, from_weighted_graph,
    RANDOM_REGULAR_RESTARTS,
};
pub use io::{parse_edge_list, read_edge_list, WeightedEdge};

use crate::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;
const BALANCE_TOL: f64 = 1e-9;
const POWER_TOL: f64 = 1e-13;
const POWER_MAX_ITER: usize = 1_000_000;

/// One row of `q` restricted to its support, with a cumulative table for
/// sampling.
#[derive(Debug, Clone)]
pub struct Row {
    pub sites: Vec<usize>,
    pub probs: Vec<f64>,
    cumulative: Vec<f64>,
    uniform: bool,
}

impl Row {
    fn new(sites: Vec<usize>, probs: Vec<f64>) -> Self {
        let mut acc = 0.0;
        let cumulative: Vec<f64> = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let uniform = probs.iter().all(|&p| p == probs[0]);
        Row {
            sites,
            probs,
            cumulative,
            uniform,
        }
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.sites.iter().copied().zip(self.probs.iter().copied())
    }

    /// Maps `u` in `[0, 1)` to a site drawn from this row.
    pub fn sample(&self, u: f64) -> usize {
        let n = self.sites.len();
        if self.uniform {
            return self.sites[((u * n as f64) as usize).min(n - 1)];
        }
        let target = u * self.cumulative[n - 1];
        let idx = self.cumulative.partition_point(|&c| c <= target);
        self.sites[idx.min(n - 1)]
    }
}

/// A finite voting kernel `(E, q)` with its stationary distribution.
///
/// Sites are the indices `0..n`. The kernel is immutable once built.
#[derive(Debug, Clone)]
pub struct VotingKernel {
    n: usize,
    q: Vec<f64>,
    pi: Vec<f64>,
    rows: Vec<Row>,
}

impl VotingKernel {
    /// Validates a dense row-major matrix and computes `pi` by power
    /// iteration.
    pub fn from_matrix(n: usize, q: Vec<f64>) -> Result<Self> {
        Self::check_matrix(n, &q)?;
        let pi = stationary_by_power_iteration(n, &q)?;
        Self::assemble(n, q, pi)
    }

    /// Builds a kernel whose stationary distribution is already known, e.g.
    /// degree-proportional weights on an undirected graph.
    pub(crate) fn with_stationary(n: usize, q: Vec<f64>, pi: Vec<f64>) -> Result<Self> {
        Self::check_matrix(n, &q)?;
        Self::assemble(n, q, pi)
    }

    fn check_matrix(n: usize, q: &[f64]) -> Result<()> {
        if n < 2 {
            return Err(Error::InvalidSize { n, min: 2 });
        }
        if q.len() != n * n {
            return Err(Error::InvalidInput(format!(
                "matrix has {} entries, expected {}",
                q.len(),
                n * n
            )));
        }
        for x in 0..n {
            let row = &q[x * n..(x + 1) * n];
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidInput(format!(
                    "row {x} has a negative or non-finite entry"
                )));
            }
            if row[x] != 0.0 {
                return Err(Error::ZeroTrace {
                    site: x,
                    value: row[x],
                });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::NotStochastic { row: x, sum });
            }
        }
        check_strongly_connected(n, q)
    }

    fn assemble(n: usize, q: Vec<f64>, pi: Vec<f64>) -> Result<Self> {
        let total: f64 = pi.iter().sum();
        if pi.len() != n || pi.iter().any(|p| !(*p > 0.0)) || (total - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::InvalidInput(
                "stationary distribution must be strictly positive and sum to 1".into(),
            ));
        }
        for x in 0..n {
            for y in (x + 1)..n {
                let a = pi[x] * q[x * n + y];
                let b = pi[y] * q[y * n + x];
                let residual = (a - b).abs();
                if residual > BALANCE_TOL * a.max(b) {
                    return Err(Error::DetailedBalance { x, y, residual });
                }
            }
        }
        let rows = (0..n)
            .map(|x| {
                let (sites, probs): (Vec<usize>, Vec<f64>) = (0..n)
                    .filter(|&y| q[x * n + y] > 0.0)
                    .map(|y| (y, q[x * n + y]))
                    .unzip();
                Row::new(sites, probs)
            })
            .collect();
        Ok(VotingKernel { n, q, pi, rows })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sites(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    #[inline]
    pub fn q(&self, x: usize, y: usize) -> f64 {
        self.q[x * self.n + y]
    }

    /// Dense row-major transition matrix.
    pub fn matrix(&self) -> &[f64] {
        &self.q
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    /// Support of `q(x, .)`. Reversibility makes the support symmetric, so
    /// this is also the set of sites `y` with `q(y, x) > 0`.
    #[inline]
    pub fn row(&self, x: usize) -> &Row {
        &self.rows[x]
    }

    /// `(q f)(x) = sum_y q(x,y) f(y)`.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(y, p)| p * f[y]).sum())
            .collect()
    }

    /// `nu(1) = sum_{x,y} pi(x)^2 q(x,y) = sum_x pi(x)^2`.
    pub fn nu_total(&self) -> f64 {
        self.pi.iter().map(|p| p * p).sum()
    }

    /// Maximum over pairs of the relative detailed-balance residual.
    pub fn detailed_balance_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for y in (x + 1)..n {
                let a = self.pi[x] * self.q(x, y);
                let b = self.pi[y] * self.q(y, x);
                let scale = a.max(b);
                if scale > 0.0 {
                    worst = worst.max((a - b).abs() / scale);
                }
            }
        }
        worst
    }

    /// `max_y |(pi q)(y) - pi(y)|`.
    pub fn stationarity_residual(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|y| {
                let s: f64 = (0..n).map(|x| self.pi[x] * self.q(x, y)).sum();
                (s - self.pi[y]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Dense `q^power` as a row-major matrix.
    pub fn matrix_power(&self, power: usize) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for x in 0..n {
            out[x * n + x] = 1.0;
        }
        for _ in 0..power {
            let mut next = vec![0.0; n * n];
            for x in 0..n {
                let src = &out[x * n..(x + 1) * n];
                let dst = &mut next[x * n..(x + 1) * n];
                for (z, &a) in src.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    for (y, p) in self.rows[z].iter() {
                        dst[y] += a * p;
                    }
                }
            }
            out = next;
        }
        out
    }
}

fn check_strongly_connected(n: usize, q: &[f64]) -> Result<()> {
    for forward in [true, false] {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                let w = if forward { q[x * n + y] } else { q[y * n + x] };
                if w > 0.0 && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if let Some(site) = seen.iter().position(|s| !s) {
            return Err(Error::Irreducibility { site });
        }
    }
    Ok(())
}

/// Power iteration on the lazy chain `(I + q) / 2`, which shares `pi` with
/// `q` and is aperiodic even when `q` is not.
fn stationary_by_power_iteration(n: usize, q: &[f64]) -> Result<Vec<f64>> {
    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    for _ in 0..POWER_MAX_ITER {
        next.iter_mut().zip(&pi).for_each(|(v, p)| *v = 0.5 * p);
        for x in 0..n {
            let half = 0.5 * pi[x];
            if half == 0.0 {
                continue;
            }
            for y in 0..n {
                next[y] += half * q[x * n + y];
            }
        }
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        let delta = pi
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut pi, &mut next);
        if delta < POWER_TOL {
            return Ok(pi);
        }
    }
    Err(Error::StationaryDivergence {
        iterations: POWER_MAX_ITER,
    })
}
