//! Wright-Fisher limits of the density process.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dynamics::{Boundary, PayoffMatrix};
use crate::{Error, Result};

const R_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KConstants {
    pub k1: f64,
    pub k2: f64,
}

/// `K1 = [b(R2 + R1) - c(R1 + R0)] / 2` and
/// `K2 = [b^2 (R3 + R2) - 2bc (R2 + R1) + c^2 (R1 + R0)] / 2`
/// from return probabilities `R_0..R_3` (extra entries are ignored).
pub fn k_constants(r: &[f64], b: f64, c: f64) -> Result<KConstants> {
    if r.len() < 4 {
        return Err(Error::InvalidInput(format!(
            "need R_0..R_3, got {} values",
            r.len()
        )));
    }
    if (r[0] - 1.0).abs() > R_TOL || r[1].abs() > R_TOL {
        return Err(Error::InvalidInput(format!(
            "return probabilities must start with R_0 = 1, R_1 = 0 (got {}, {})",
            r[0], r[1]
        )));
    }
    if let Some(bad) = r[..4].iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidInput(format!(
            "return probability {bad} outside [0,1]"
        )));
    }
    Ok(KConstants {
        k1: (b * (r[2] + r[1]) - c * (r[1] + r[0])) / 2.0,
        k2: (b * b * (r[3] + r[2]) - 2.0 * b * c * (r[2] + r[1]) + c * c * (r[1] + r[0])) / 2.0,
    })
}

/// Idealized return probabilities of a large random `k`-regular graph:
/// `(1, 0, 1/k, 0)`.
pub fn regular_return_probabilities(k: usize) -> [f64; 4] {
    [1.0, 0.0, 1.0 / k as f64, 0.0]
}

/// Probability that `dY = a Y(1-Y) dt + sqrt(Y(1-Y)) dW` started at `y0`
/// hits 1 before 0: `(1 - e^{-2a y0}) / (1 - e^{-2a})`.
pub fn fixation_probability(a: f64, y0: f64) -> f64 {
    let y0 = y0.clamp(0.0, 1.0);
    if a == 0.0 || y0 == 0.0 || y0 == 1.0 {
        return y0;
    }
    let phi = if a > 0.0 {
        (-2.0 * a * y0).exp_m1() / (-2.0 * a).exp_m1()
    } else {
        // factor out e^{A} with A = -2a > 0 to avoid overflow
        let big = -2.0 * a;
        (big * (y0 - 1.0)).exp() * (-big * y0).exp_m1() / (-big).exp_m1()
    };
    phi.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WFParams {
    /// Drift coefficient `a = w_inf K1`.
    pub a: f64,
    pub mu1: f64,
    pub mu0: f64,
    pub y0: f64,
}

impl WFParams {
    pub fn new(a: f64, mu1: f64, mu0: f64, y0: f64) -> Result<Self> {
        let p = WFParams { a, mu1, mu0, y0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.a.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "drift a = {} is not finite",
                self.a
            )));
        }
        if !(self.mu1 >= 0.0 && self.mu0 >= 0.0 && self.mu1.is_finite() && self.mu0.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "mutation rates must be finite and nonnegative (mu1 = {}, mu0 = {})",
                self.mu1, self.mu0
            )));
        }
        if !(0.0..=1.0).contains(&self.y0) {
            return Err(Error::InvalidParameters(format!(
                "y0 = {} outside [0,1]",
                self.y0
            )));
        }
        Ok(())
    }

    pub fn drift(&self, y: f64) -> f64 {
        self.a * y * (1.0 - y) + self.mu1 * (1.0 - y) - self.mu0 * y
    }

    fn absorbing(&self) -> bool {
        self.mu1 == 0.0 && self.mu0 == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WfPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub absorption: Option<(Boundary, f64)>,
}

impl WfPath {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,Y\n");
        for (t, y) in self.times.iter().zip(&self.values) {
            out.push_str(&format!("{t},{y}\n"));
        }
        out
    }
}

#[inline]
fn euler_step<R: Rng + ?Sized>(
    params: &WFParams,
    y: f64,
    dt: f64,
    sqrt_dt: f64,
    rng: &mut R,
) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    (y + params.drift(y) * dt + (y * (1.0 - y)).sqrt() * sqrt_dt * z).clamp(0.0, 1.0)
}

fn boundary_of(y: f64) -> Option<Boundary> {
    if y == 1.0 {
        Some(Boundary::AllOnes)
    } else if y == 0.0 {
        Some(Boundary::AllZeros)
    } else {
        None
    }
}

fn check_step(dt: f64, horizon: f64) -> Result<()> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidInput(format!(
            "time step must be positive, got {dt}"
        )));
    }
    if !(horizon >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "horizon must be nonnegative, got {horizon}"
        )));
    }
    Ok(())
}

/// Euler-Maruyama path on `[0, horizon]`, clamped to `[0,1]` after every
/// step. Without mutation the path stops on hitting 0 or 1.
pub fn simulate_wf<R: Rng + ?Sized>(
    params: &WFParams,
    dt: f64,
    horizon: f64,
    rng: &mut R,
) -> Result<WfPath> {
    params.validate()?;
    check_step(dt, horizon)?;
    let sqrt_dt = dt.sqrt();
    let mut y = params.y0;
    let mut path = WfPath {
        times: vec![0.0],
        values: vec![y],
        absorption: None,
    };
    if params.absorbing() {
        if let Some(b) = boundary_of(y) {
            path.absorption = Some((b, 0.0));
            return Ok(path);
        }
    }
    let steps = (horizon / dt).ceil() as u64;
    for i in 1..=steps {
        let t = (i as f64 * dt).min(horizon);
        y = euler_step(
            params,
            y,
            t - path.times[path.times.len() - 1],
            sqrt_dt,
            rng,
        );
        path.times.push(t);
        path.values.push(y);
        if params.absorbing() {
            if let Some(b) = boundary_of(y) {
                path.absorption = Some((b, t));
                break;
            }
        }
    }
    Ok(path)
}

/// Runs a path without storing it until absorption or `max_time`.
pub fn wf_absorption<R: Rng + ?Sized>(
    params: &WFParams,
    dt: f64,
    max_time: f64,
    rng: &mut R,
) -> Result<Option<(Boundary, f64)>> {
    params.validate()?;
    check_step(dt, max_time)?;
    if !params.absorbing() {
        return Err(Error::InvalidInput("absorption needs zero mutation".into()));
    }
    let sqrt_dt = dt.sqrt();
    let mut y = params.y0;
    let mut t = 0.0;
    loop {
        if let Some(b) = boundary_of(y) {
            return Ok(Some((b, t)));
        }
        if t >= max_time {
            return Ok(None);
        }
        y = euler_step(params, y, dt, sqrt_dt, rng);
        t += dt;
    }
}

/// Pair-approximation coefficients on a `k`-regular graph of `N` sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairApproxCoeffs {
    pub k: usize,
    pub n: usize,
    pub w: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PairApproxCoeffs {
    /// `w (k-2) / (k^2 (k-1)) p(1-p) (alpha p + beta)`
    pub fn drift(&self, p: f64) -> f64 {
        let k = self.k as f64;
        self.w * (k - 2.0) / (k * k * (k - 1.0)) * p * (1.0 - p) * (self.alpha * p + self.beta)
    }

    /// `2(k-2) / (N(k-1)) p(1-p)`
    pub fn noise_squared(&self, p: f64) -> f64 {
        let k = self.k as f64;
        2.0 * (k - 2.0) / (self.n as f64 * (k - 1.0)) * p * (1.0 - p)
    }

    /// Time change `N(k-1) / (2(k-2))` that gives unit Wright-Fisher noise.
    pub fn time_change(&self) -> f64 {
        pair_approx_time_scale(self.n, self.k)
    }
}

/// `N(k-1) / (2(k-2))`.
pub fn pair_approx_time_scale(n: usize, k: usize) -> f64 {
    n as f64 * (k as f64 - 1.0) / (2.0 * (k as f64 - 2.0))
}

pub fn pair_approx(k: usize, payoff: &PayoffMatrix, n: usize, w: f64) -> Result<PairApproxCoeffs> {
    if k < 3 {
        return Err(Error::InvalidInput(format!(
            "pair approximation needs k >= 3, got {k}"
        )));
    }
    if n <= k {
        return Err(Error::InvalidInput(format!(
            "pair approximation needs N > k, got N = {n}, k = {k}"
        )));
    }
    let kf = k as f64;
    let (p11, p10, p01, p00) = (payoff.p11, payoff.p10, payoff.p01, payoff.p00);
    Ok(PairApproxCoeffs {
        k,
        n,
        w,
        alpha: (kf + 1.0) * (kf - 2.0) * (p11 - p10 - p01 + p00),
        beta: (kf + 1.0) * p11 + (kf * kf - kf - 1.0) * p10 - p01 - (kf * kf - 1.0) * p00,
    })
}

/// Max over `p in {0, 0.01, ..., 1}` of the distance between the
/// time-changed pair-approximation coefficients at `w = w_inf / N` and the
/// random-regular limit `w_inf (b - ck) / (2k) p(1-p)`, `p(1-p)`.
pub fn equivalence_check(k: usize, b: f64, c: f64, n: usize, w_inf: f64) -> Result<f64> {
    let coeffs = pair_approx(k, &PayoffMatrix::donation(b, c), n, w_inf / n as f64)?;
    let scale = coeffs.time_change();
    let kf = k as f64;
    let mut worst: f64 = 0.0;
    for i in 0..=100 {
        let p = i as f64 / 100.0;
        let v = p * (1.0 - p);
        let drift = (scale * coeffs.drift(p) - w_inf * (b - c * kf) / (2.0 * kf) * v).abs();
        let noise = (scale * coeffs.noise_squared(p) - v).abs();
        worst = worst.max(drift).max(noise);
    }
    Ok(worst)
}
