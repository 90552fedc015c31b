use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use super::simulate_coalescing;
use crate::ensemble::run_replicas;
use crate::stats::{ks_two_sample, summarize};
use crate::{Error, Result, VotingKernel};

/// `sum_{m > ell} 2 / (m (m - 1)) = 2 / ell`, the Kingman mean of `C_ell`.
pub fn kingman_reference_mean(ell: usize) -> f64 {
    assert!(ell >= 1, "C_ell is defined for ell >= 1");
    2.0 / ell as f64
}

/// Rescaled coalescence times from all-sites starts.
#[derive(Debug, Clone, Serialize)]
pub struct KingmanSpectrum {
    pub gamma: f64,
    /// `samples[ell - 1][r] = C_ell / gamma` in replica `r`.
    pub samples: Vec<Vec<f64>>,
    pub means: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub reference_means: Vec<f64>,
    /// KS distance to an equally sized sample of the Kingman functional
    /// `sum_{m > ell}^{N} E_m / binom(m, 2)`.
    pub ks: Vec<f64>,
}

impl KingmanSpectrum {
    /// One-column CSV of the `C_ell / gamma` samples with a JSON header line.
    pub fn samples_csv(&self, ell: usize, seed: u64) -> String {
        let header = serde_json::json!({
            "statistic": format!("C{ell}/gamma"),
            "gamma": self.gamma,
            "replicas": self.samples[ell - 1].len(),
            "seed": seed,
        });
        let mut out = header.to_string();
        out.push_str(&format!("\nC{ell}_over_gamma\n"));
        for v in &self.samples[ell - 1] {
            out.push_str(&format!("{v}\n"));
        }
        out
    }
}

fn kingman_sample<R: Rng + ?Sized>(n: usize, max_ell: usize, rng: &mut R) -> Vec<f64> {
    let mut c = vec![0.0; max_ell];
    let mut t = 0.0;
    for m in (2..=n).rev() {
        t += rng.sample::<f64, _>(Exp1) * 2.0 / (m * (m - 1)) as f64;
        // after this merge m - 1 blocks remain
        if m - 1 <= max_ell {
            c[m - 2] = t;
        }
    }
    // C_ell for ell >= n is 0; entries already default to 0
    c
}

pub fn coalescent_spectrum(
    kernel: &VotingKernel,
    gamma: f64,
    max_ell: usize,
    replicas: usize,
    seed: u64,
) -> Result<KingmanSpectrum> {
    if max_ell == 0 || replicas == 0 {
        return Err(Error::InvalidInput(
            "need max_ell >= 1 and at least one replica".into(),
        ));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let n = kernel.len();
    let start: Vec<usize> = kernel.sites().collect();
    let runs: Result<Vec<Vec<f64>>> = run_replicas(seed, replicas, |_, rng| {
        let run = simulate_coalescing(kernel, &start, f64::INFINITY, rng)?;
        Ok((1..=max_ell)
            .map(|ell| run.c(ell).unwrap_or(f64::NAN) / gamma)
            .collect())
    })
    .into_iter()
    .collect();
    let runs = runs?;
    let reference = run_replicas(seed.wrapping_add(1), replicas, |_, rng| {
        kingman_sample(n, max_ell, rng)
    });

    let mut spectrum = KingmanSpectrum {
        gamma,
        samples: Vec::with_capacity(max_ell),
        means: Vec::new(),
        std_errors: Vec::new(),
        reference_means: Vec::new(),
        ks: Vec::new(),
    };
    for ell in 1..=max_ell {
        let column: Vec<f64> = runs.iter().map(|r| r[ell - 1]).collect();
        let reference_column: Vec<f64> = reference.iter().map(|r| r[ell - 1]).collect();
        let s = summarize(&column, None)?;
        spectrum.means.push(s.mean);
        spectrum.std_errors.push(s.std_error);
        spectrum.reference_means.push(kingman_reference_mean(ell));
        spectrum.ks.push(ks_two_sample(&column, &reference_column)?);
        spectrum.samples.push(column);
    }
    Ok(spectrum)
}
