//! Ensemble summaries, occupation integrals and one-dimensional distances.

use serde::{Deserialize, Serialize};

use crate::dynamics::TrajectoryRecord;
use crate::{Error, Result};

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub n: usize,
    pub mean: f64,
    pub std_error: f64,
    pub ci95: (f64, f64),
    /// `(sum w)^2 / sum w^2`; equals `n` for unweighted data.
    pub ess: f64,
}

impl EnsembleSummary {
    /// `(self.mean - other.mean) / sqrt(se_a^2 + se_b^2)`, or 0 when both
    /// errors vanish and the means agree.
    pub fn z_score(&self, other: &EnsembleSummary) -> f64 {
        z_score(self.mean, self.std_error, other.mean, other.std_error)
    }
}

pub fn z_score(a: f64, se_a: f64, b: f64, se_b: f64) -> f64 {
    let se = (se_a * se_a + se_b * se_b).sqrt();
    let d = a - b;
    if se == 0.0 {
        if d == 0.0 {
            0.0
        } else {
            d.signum() * f64::INFINITY
        }
    } else {
        d / se
    }
}

fn wilson(p: f64, n: f64) -> (f64, f64) {
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    (
        (center - half).max(0.0).min(p),
        (center + half).min(1.0).max(p),
    )
}

/// Mean, standard error and 95% interval of an ensemble.
///
/// With weights the mean is the self-normalized importance estimate
/// `sum w v / sum w` and the error is the delta-method value
/// `sqrt(sum w^2 (v - mean)^2) / sum w`. Unweighted data use the same
/// formulas with unit weights. Intervals are Wilson intervals when the
/// values are 0/1 and the weights are equal, normal intervals otherwise.
pub fn summarize(values: &[f64], weights: Option<&[f64]>) -> Result<EnsembleSummary> {
    let n = values.len();
    if n == 0 {
        return Err(Error::InvalidInput(
            "cannot summarize an empty ensemble".into(),
        ));
    }
    if let Some(w) = weights {
        if w.len() != n {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} values",
                w.len(),
                n
            )));
        }
        if let Some(bad) = w.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::DegenerateWeights(format!(
                "weight {bad} is not a finite nonnegative number"
            )));
        }
    }
    let weight = |i: usize| weights.map_or(1.0, |w| w[i]);
    let sum_w: f64 = (0..n).map(weight).sum();
    if !(sum_w > 0.0) {
        return Err(Error::DegenerateWeights("weights sum to zero".into()));
    }
    let sum_w2: f64 = (0..n).map(|i| weight(i) * weight(i)).sum();
    let mean = (0..n).map(|i| weight(i) * values[i]).sum::<f64>() / sum_w;
    let spread: f64 = (0..n)
        .map(|i| (weight(i) * (values[i] - mean)).powi(2))
        .sum();
    let std_error = spread.sqrt() / sum_w;
    let ess = sum_w * sum_w / sum_w2;

    let bernoulli = values.iter().all(|&v| v == 0.0 || v == 1.0);
    let equal_weights = weights.is_none_or(|w| w.iter().all(|&v| v == w[0]));
    let ci95 = if bernoulli && equal_weights {
        wilson(mean, n as f64)
    } else {
        (mean - Z95 * std_error, mean + Z95 * std_error)
    };
    Ok(EnsembleSummary {
        n,
        mean,
        std_error,
        ci95,
        ess,
    })
}

/// Wasserstein-1 distance between two empirical measures,
/// `int |F_a(t) - F_b(t)| dt`. Inputs need not be sorted.
pub fn wasserstein1(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput(
            "Wasserstein distance needs two nonempty samples".into(),
        ));
    }
    let sorted = |s: &[f64]| {
        let mut v = s.to_vec();
        v.sort_by(f64::total_cmp);
        v
    };
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut t = a[0].min(b[0]);
    let mut total = 0.0;
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        total += (i as f64 / na - j as f64 / nb).abs() * (next - t);
        t = next;
        while i < a.len() && a[i] == t {
            i += 1;
        }
        while j < b.len() && b[j] == t {
            j += 1;
        }
    }
    Ok(total)
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput(
            "KS statistic needs two nonempty samples".into(),
        ));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] == t {
            i += 1;
        }
        while j < b.len() && b[j] == t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// A function on `[0,1]` given by values on a uniform grid and linear
/// interpolation between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedFunction {
    values: Vec<f64>,
}

impl TabulatedFunction {
    /// `values[i] = f(i / (len - 1))`; at least two points.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidInput(
                "a tabulated function needs at least two grid points".into(),
            ));
        }
        Ok(TabulatedFunction { values })
    }

    pub fn from_fn(points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let last = points.saturating_sub(1).max(1) as f64;
        Self::new((0..points).map(|i| f(i as f64 / last)).collect())
    }

    pub fn eval(&self, y: f64) -> f64 {
        let last = self.values.len() - 1;
        let s = y.clamp(0.0, 1.0) * last as f64;
        let i = (s.floor() as usize).min(last - 1);
        let frac = s - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// `int f(Y_t) dt` over a step path: value `values[i]` held on
/// `[times[i], times[i+1])`, the last one until `end`.
pub fn occupation_integral_path(
    times: &[f64],
    values: &[f64],
    end: f64,
    f: impl Fn(f64) -> f64,
) -> f64 {
    let mut total = 0.0;
    for (i, (&t, &v)) in times.iter().zip(values).enumerate() {
        let next = times.get(i + 1).copied().unwrap_or(end).min(end);
        if next > t {
            total += f(v) * (next - t);
        }
    }
    total
}

/// `int_0^T f(Y_t) dt` along the sampled density of a trajectory, stopped
/// at absorption.
pub fn occupation_integral(traj: &TrajectoryRecord, f: &TabulatedFunction) -> f64 {
    let (times, values, end) = traj.density_path();
    occupation_integral_path(&times, &values, end, |y| f.eval(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Absorption, Boundary, Configuration, Sample};

    #[test]
    fn wasserstein_examples() {
        assert_eq!(wasserstein1(&[0.3, 0.7], &[0.7, 0.3]).unwrap(), 0.0);
        assert_eq!(wasserstein1(&[0.0], &[1.0]).unwrap(), 1.0);
        assert!((wasserstein1(&[0.0, 1.0], &[0.5, 0.5]).unwrap() - 0.5).abs() < 1e-15);
        assert!(wasserstein1(&[], &[1.0]).is_err());
    }

    #[test]
    fn wasserstein_unequal_sizes() {
        // F_a jumps to 1 at 0; F_b is 1/3 on [0,1), 2/3 on [1,2)
        let d = wasserstein1(&[0.0], &[0.0, 1.0, 2.0]).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[0.0], &[1.0]).unwrap(), 1.0);
    }

    #[test]
    fn summarize_examples() {
        let s = summarize(&[0.0, 1.0], Some(&[1.0, 3.0])).unwrap();
        assert!((s.mean - 0.75).abs() < 1e-15);
        assert!((s.ess - 1.6).abs() < 1e-15);
        let ones = summarize(&[1.0; 5], None).unwrap();
        assert_eq!((ones.mean, ones.std_error), (1.0, 0.0));
        assert!(ones.ci95.0 <= 1.0 && ones.ci95.1 == 1.0);
        let eq = summarize(&[1.0, 2.0, 4.0], Some(&[2.0; 3])).unwrap();
        assert!((eq.ess - 3.0).abs() < 1e-12);
        assert!(matches!(
            summarize(&[1.0], Some(&[0.0])),
            Err(Error::DegenerateWeights(_))
        ));
    }

    #[test]
    fn wilson_interval_for_fixation_counts() {
        let mut v = vec![0.0; 80];
        v.extend([1.0; 20]);
        let s = summarize(&v, None).unwrap();
        assert!((s.ci95.0 - 0.1333).abs() < 1e-3 && (s.ci95.1 - 0.2888).abs() < 1e-3);
    }

    #[test]
    fn occupation_examples() {
        assert!((occupation_integral_path(&[0.0], &[0.4], 2.5, |y| y) - 1.0).abs() < 1e-15);
        let two = occupation_integral_path(&[0.0, 1.0], &[0.5, 0.25], 3.0, |y| y);
        assert!((two - 1.0).abs() < 1e-15);
    }

    #[test]
    fn occupation_stops_at_absorption() {
        let sample = |p1| Sample {
            p1,
            w: vec![],
            log_weight: None,
        };
        let make = |horizon: f64| TrajectoryRecord {
            sample_times: vec![0.0, 1.0, 2.0, horizon],
            samples: vec![sample(0.5), sample(0.25), sample(0.0), sample(0.0)],
            absorption: Some(Absorption {
                boundary: Boundary::AllZeros,
                time: 2.0,
            }),
            final_config: Configuration::zeros(4),
            end_time: horizon,
            log_weight: None,
            events: 4,
        };
        let f = TabulatedFunction::from_fn(11, |y| y).unwrap();
        let a = occupation_integral(&make(5.0), &f);
        let b = occupation_integral(&make(50.0), &f);
        assert!((a - 0.75).abs() < 1e-12);
        assert_eq!(a, b);
    }

    #[test]
    fn tabulated_interpolation() {
        let f = TabulatedFunction::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(f.eval(0.25), 0.5);
        assert_eq!(f.eval(1.0), 0.0);
        assert_eq!(f.eval(0.5), 1.0);
    }
}
