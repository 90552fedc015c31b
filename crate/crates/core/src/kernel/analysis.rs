use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::VotingKernel;

/// Values of `q^l(x,x)` that differ by less than this are treated as equal
/// when looking for the modal return probability.
const MODE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct ReturnProbabilities {
    /// `per_site[l][x] = q^l(x,x)` for `l = 0..=L`.
    pub per_site: Vec<Vec<f64>>,
    /// `modal[l]`: the value of `q^l(x,x)` carried by the largest share of
    /// `pi`-mass.
    pub modal: Vec<f64>,
    /// `pi`-mass of the sites attaining `modal[l]`.
    pub modal_mass: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelAnalysis {
    pub pi_min: f64,
    pub pi_max: f64,
    /// Eigenvalues of `q` in decreasing order.
    pub eigenvalues: Vec<f64>,
    /// `1 - lambda_2`.
    pub spectral_gap: f64,
    /// `1 - max_{i >= 2} |lambda_i|`.
    pub absolute_gap: f64,
    /// `absolute_gap^-1 log(2e / pi_min)`; `None` for periodic chains.
    pub mixing_time_bound: Option<f64>,
    /// Row-major `nu(x,y) = pi(x)^2 q(x,y)`.
    pub nu: Vec<f64>,
    pub nu_total: f64,
    pub return_probs: ReturnProbabilities,
}

impl KernelAnalysis {
    /// Modal return probabilities `R_0..=R_L`.
    pub fn r(&self) -> &[f64] {
        &self.return_probs.modal
    }
}

/// Eigenvalues of `q` from the symmetric matrix `D^{1/2} q D^{-1/2}`,
/// `D = diag(pi)`, in decreasing order.
pub fn eigenvalues(kernel: &VotingKernel) -> Vec<f64> {
    let n = kernel.len();
    let sqrt_pi: Vec<f64> = kernel.pi().iter().map(|p| p.sqrt()).collect();
    let s = DMatrix::from_fn(n, n, |x, y| {
        let a = sqrt_pi[x] / sqrt_pi[y] * kernel.q(x, y);
        let b = sqrt_pi[y] / sqrt_pi[x] * kernel.q(y, x);
        0.5 * (a + b)
    });
    let mut values: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

pub fn analyze(kernel: &VotingKernel, max_ell: usize) -> KernelAnalysis {
    let n = kernel.len();
    let pi = kernel.pi();
    let pi_min = pi.iter().copied().fold(f64::INFINITY, f64::min);
    let pi_max = pi.iter().copied().fold(0.0, f64::max);

    let eigenvalues = eigenvalues(kernel);
    let spectral_gap = 1.0 - eigenvalues[1];
    let absolute_gap = 1.0 - eigenvalues[1..].iter().map(|v| v.abs()).fold(0.0, f64::max);
    // a gap below rounding noise means the chain is periodic
    let mixing_time_bound =
        (absolute_gap > 1e-12).then(|| (2.0 * std::f64::consts::E / pi_min).ln() / absolute_gap);

    let mut nu = vec![0.0; n * n];
    for x in 0..n {
        for (y, p) in kernel.row(x).iter() {
            nu[x * n + y] = pi[x] * pi[x] * p;
        }
    }
    let nu_total = nu.iter().sum();

    KernelAnalysis {
        pi_min,
        pi_max,
        eigenvalues,
        spectral_gap,
        absolute_gap,
        mixing_time_bound,
        nu,
        nu_total,
        return_probs: return_probabilities(kernel, max_ell),
    }
}

pub(crate) fn return_probabilities(kernel: &VotingKernel, max_ell: usize) -> ReturnProbabilities {
    let n = kernel.len();
    let pi = kernel.pi();
    let mut per_site = Vec::with_capacity(max_ell + 1);
    let mut power = kernel.matrix_power(0);
    for ell in 0..=max_ell {
        if ell > 0 {
            power = multiply_right(kernel, &power);
        }
        per_site.push(
            (0..n)
                .map(|x| power[x * n + x].clamp(0.0, 1.0))
                .collect::<Vec<_>>(),
        );
    }
    let (mut modal, mut modal_mass): (Vec<f64>, Vec<f64>) =
        per_site.iter().map(|values| pi_mode(values, pi)).unzip();
    // exact by construction: q^0 = I and q has zero trace
    modal[0] = 1.0;
    modal_mass[0] = 1.0;
    if max_ell >= 1 {
        modal[1] = 0.0;
        modal_mass[1] = 1.0;
    }
    ReturnProbabilities {
        per_site,
        modal,
        modal_mass,
    }
}

fn multiply_right(kernel: &VotingKernel, power: &[f64]) -> Vec<f64> {
    let n = kernel.len();
    let mut next = vec![0.0; n * n];
    for x in 0..n {
        let src = &power[x * n..(x + 1) * n];
        let dst = &mut next[x * n..(x + 1) * n];
        for (z, &a) in src.iter().enumerate() {
            if a != 0.0 {
                for (y, p) in kernel.row(z).iter() {
                    dst[y] += a * p;
                }
            }
        }
    }
    next
}

/// Clusters equal values and returns the `pi`-weighted mean of the
/// heaviest cluster together with its mass.
fn pi_mode(values: &[f64], pi: &[f64]) -> (f64, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut best = (values[order[0]], 0.0);
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] - values[order[end - 1]] <= MODE_TOL {
            end += 1;
        }
        let mass: f64 = order[start..end].iter().map(|&i| pi[i]).sum();
        if mass > best.1 {
            let mean = order[start..end]
                .iter()
                .map(|&i| pi[i] * values[i])
                .sum::<f64>()
                / mass;
            best = (mean, mass);
        }
        start = end;
    }
    best
}
