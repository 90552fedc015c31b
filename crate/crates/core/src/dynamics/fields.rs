//! Functions of a single configuration: fitness, the game kernel, the
//! payoff fields `A`, `B`, `R^w` and the density observables.

use serde::Serialize;

use super::{max_selection, Configuration, GameParams, PayoffMatrix};
use crate::{Error, Result, VotingKernel};

/// `sum_y q(x,y) Pi(xi(x), xi(y))`.
#[inline]
pub(crate) fn local_payoff(
    x: usize,
    config: &Configuration,
    kernel: &VotingKernel,
    payoff: &PayoffMatrix,
) -> f64 {
    let sx = config.get(x);
    kernel
        .row(x)
        .iter()
        .map(|(y, p)| p * payoff.get(sx, config.get(y)))
        .sum()
}

/// `f^w(x, xi) = (1 - w) + w sum_y q(x,y) Pi(xi(x), xi(y))`.
pub fn fitness(
    x: usize,
    config: &Configuration,
    kernel: &VotingKernel,
    params: &GameParams,
) -> Result<f64> {
    params.validate()?;
    Ok((1.0 - params.w) + params.w * local_payoff(x, config, kernel, &params.payoff))
}

/// `q^w(x, ., xi)`: the parent distribution of a dying individual at `x`.
pub fn game_kernel(
    x: usize,
    config: &Configuration,
    kernel: &VotingKernel,
    params: &GameParams,
) -> Result<Vec<f64>> {
    params.validate()?;
    let mut out = vec![0.0; kernel.len()];
    let mut total = 0.0;
    for (y, p) in kernel.row(x).iter() {
        let f = (1.0 - params.w) + params.w * local_payoff(y, config, kernel, &params.payoff);
        out[y] = p * f;
        total += p * f;
    }
    out.iter_mut().for_each(|v| *v /= total);
    Ok(out)
}

/// The payoff fields entering `q^w / q = 1 + w (A - B) + w^2 R^w`.
#[derive(Debug, Clone, Serialize)]
pub struct PayoffFields {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// `(x, y, R^w(x,y))` for every ordered edge with `q(x,y) > 0`.
    pub rw: Vec<(usize, usize, f64)>,
}

pub fn payoff_fields(
    config: &Configuration,
    kernel: &VotingKernel,
    payoff: &PayoffMatrix,
    w: f64,
) -> Result<PayoffFields> {
    let max = max_selection(payoff);
    if !(0.0..=max).contains(&w) {
        return Err(Error::SelectionOutOfRange { w, max });
    }
    let (a, b) = a_and_b(config, kernel, payoff);
    let mut rw = Vec::new();
    for x in kernel.sites() {
        let denom = 1.0 - w * a[x];
        if denom <= 0.0 {
            return Err(Error::ExpansionSingularity {
                site: x,
                value: denom,
            });
        }
        for (y, _) in kernel.row(x).iter() {
            rw.push((x, y, a[x] * (a[x] - b[y]) / denom));
        }
    }
    Ok(PayoffFields { a, b, rw })
}

fn a_and_b(
    config: &Configuration,
    kernel: &VotingKernel,
    payoff: &PayoffMatrix,
) -> (Vec<f64>, Vec<f64>) {
    let local: Vec<f64> = kernel
        .sites()
        .map(|z| local_payoff(z, config, kernel, payoff))
        .collect();
    let b = local.iter().map(|v| 1.0 - v).collect();
    let a = kernel.apply(&local).iter().map(|v| 1.0 - v).collect();
    (a, b)
}

/// Densities and weighted two-point densities of a configuration.
#[derive(Debug, Clone, Serialize)]
pub struct Observables {
    pub p1: f64,
    /// `w[l - 1] = W_l` for `l = 1..=max_ell`.
    pub w: Vec<f64>,
    /// `pair[tau][sigma] = p_{tau sigma}`.
    pub pair: [[f64; 2]; 2],
    /// `cond[tau][sigma] = p_{tau | sigma}` with `0/0 = 0`.
    pub cond: [[f64; 2]; 2],
}

impl Observables {
    /// `W_l` for `l >= 1`.
    pub fn w(&self, ell: usize) -> f64 {
        self.w[ell - 1]
    }
}

/// `W_l = sum_x pi(x) xi(x) (q^l xi_hat)(x)` for `l = 1..=max_ell`.
pub(crate) fn two_point_densities(
    config: &Configuration,
    kernel: &VotingKernel,
    max_ell: usize,
) -> Vec<f64> {
    let pi = kernel.pi();
    let mut v: Vec<f64> = (0..config.len())
        .map(|x| 1.0 - config.get(x) as f64)
        .collect();
    let mut out = Vec::with_capacity(max_ell);
    for _ in 0..max_ell {
        v = kernel.apply(&v);
        let s = kernel
            .sites()
            .filter(|&x| config.get(x) == 1)
            .map(|x| pi[x] * v[x])
            .sum();
        out.push(s);
    }
    out
}

pub fn observables(config: &Configuration, kernel: &VotingKernel, max_ell: usize) -> Observables {
    let pi = kernel.pi();
    let mut p = [0.0; 2];
    let mut pair = [[0.0; 2]; 2];
    for x in kernel.sites() {
        let tau = config.get(x) as usize;
        p[tau] += pi[x];
        for (y, q) in kernel.row(x).iter() {
            pair[tau][config.get(y) as usize] += pi[x] * q;
        }
    }
    let mut cond = [[0.0; 2]; 2];
    for tau in 0..2 {
        for sigma in 0..2 {
            cond[tau][sigma] = if p[sigma] == 0.0 {
                0.0
            } else {
                pair[tau][sigma] / p[sigma]
            };
        }
    }
    Observables {
        // rounding in sum(pi) can overshoot 1
        p1: p[1].min(1.0),
        w: two_point_densities(config, kernel, max_ell.max(1)),
        pair,
        cond,
    }
}

/// `D_bar(xi) = sum_{x,y} pi(x) q(x,y) [xi(y) - xi(x)] [A(x,xi) - B(y,xi)]`.
pub fn dbar(config: &Configuration, kernel: &VotingKernel, payoff: &PayoffMatrix) -> f64 {
    let (a, b) = a_and_b(config, kernel, payoff);
    let pi = kernel.pi();
    let mut s = 0.0;
    for x in kernel.sites() {
        let sx = config.get(x) as f64;
        for (y, q) in kernel.row(x).iter() {
            s += pi[x] * q * (config.get(y) as f64 - sx) * (a[x] - b[y]);
        }
    }
    s
}

/// `sum_{x,y} pi(x) q(x,y) [A(x,xi) - B(y,xi)]^2`.
pub fn dbar_second(config: &Configuration, kernel: &VotingKernel, payoff: &PayoffMatrix) -> f64 {
    let (a, b) = a_and_b(config, kernel, payoff);
    let pi = kernel.pi();
    let mut s = 0.0;
    for x in kernel.sites() {
        for (y, q) in kernel.row(x).iter() {
            let d = a[x] - b[y];
            s += pi[x] * q * d * d;
        }
    }
    s
}

/// Donation-game form `b (W_3 - W_1) - c W_2`; `w` holds `W_1..W_3`.
pub fn dbar_donation(w: &[f64], b: f64, c: f64) -> f64 {
    b * (w[2] - w[0]) - c * w[1]
}

/// Donation-game form `b^2 (W_4 - W_2) - 2bc (W_3 - W_1) + c^2 W_2`; `w`
/// holds `W_1..W_4`.
pub fn dbar_second_donation(w: &[f64], b: f64, c: f64) -> f64 {
    b * b * (w[3] - w[1]) - 2.0 * b * c * (w[2] - w[0]) + c * c * w[1]
}
