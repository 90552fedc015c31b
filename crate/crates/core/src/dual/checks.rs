//! Monte Carlo cross-checks of the voter/coalescent dualities.

use serde::Serialize;

use super::simulate_coalescing;
use crate::dynamics::{
    simulate_game, Configuration, GameParams, PayoffMatrix, SamplingSchedule, StopRule,
};
use crate::ensemble::run_replicas;
use crate::stats::{summarize, z_score};
use crate::{Error, Result, VotingKernel};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DualityEstimate {
    pub voter_estimate: f64,
    pub voter_se: f64,
    pub dual_estimate: f64,
    pub dual_se: f64,
    pub z_score: f64,
}

impl DualityEstimate {
    fn from_samples(voter: &[f64], dual: &[f64]) -> Result<Self> {
        let v = summarize(voter, None)?;
        let d = summarize(dual, None)?;
        Ok(DualityEstimate {
            voter_estimate: v.mean,
            voter_se: v.std_error,
            dual_estimate: d.mean,
            dual_se: d.std_error,
            z_score: z_score(v.mean, v.std_error, d.mean, d.std_error),
        })
    }
}

fn check_common(
    kernel: &VotingKernel,
    initial: &Configuration,
    sites: &[usize],
    t: f64,
    replicas: usize,
) -> Result<()> {
    if initial.len() != kernel.len() {
        return Err(Error::InvalidInput(
            "initial configuration has the wrong size".into(),
        ));
    }
    if let Some(&bad) = sites.iter().find(|&&s| s >= kernel.len()) {
        return Err(Error::InvalidInput(format!(
            "site {bad} outside the kernel"
        )));
    }
    if !(t >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    if replicas == 0 {
        return Err(Error::InvalidInput(
            "at least one replica is required".into(),
        ));
    }
    Ok(())
}

/// Estimates `E_xi[prod_{x in A} xi_t(x)]` from the voter model and
/// `E[prod_{x in A} xi(B^x_t)]` from coalescing walks, each with
/// `replicas` independent runs. The two ensembles use disjoint streams of
/// `seed`.
pub fn duality_check_moment(
    kernel: &VotingKernel,
    initial: &Configuration,
    sites: &[usize],
    t: f64,
    replicas: usize,
    seed: u64,
) -> Result<DualityEstimate> {
    if sites.is_empty() {
        return Err(Error::InvalidInput(
            "the site set A must be nonempty".into(),
        ));
    }
    check_common(kernel, initial, sites, t, replicas)?;
    let params = GameParams::neutral();
    let product = |c: &Configuration, at: &[usize]| at.iter().all(|&x| c.get(x) == 1) as u8 as f64;

    let voter: Result<Vec<f64>> = run_replicas(seed, replicas, |_, rng| {
        let rec = simulate_game(
            kernel,
            &params,
            initial.clone(),
            StopRule::Horizon(t),
            &SamplingSchedule::none(),
            rng,
        )?;
        Ok(product(&rec.final_config, sites))
    })
    .into_iter()
    .collect();
    let dual: Result<Vec<f64>> = run_replicas(seed.wrapping_add(1), replicas, |_, rng| {
        let run = simulate_coalescing(kernel, sites, t, rng)?;
        Ok(product(initial, &run.final_state.block_sites))
    })
    .into_iter()
    .collect();
    DualityEstimate::from_samples(&voter?, &dual?)
}

/// `H(xi; x, y) = [xi(x) - mu_bar(1)] [xi_hat(y) - mu_bar(0)]`.
pub fn h_function(config: &Configuration, x: usize, y: usize, mu_bar1: f64, mu_bar0: f64) -> f64 {
    (config.get(x) as f64 - mu_bar1) * ((1 - config.get(y)) as f64 - mu_bar0)
}

/// Compares `E_xi[H(xi_t; x, y)]` under the voter model with mutation
/// against the two-particle Feynman-Kac representation
///
/// `E[H(xi; B^x_t, B^y_t) e^{-mu int_0^t |B_s| ds}]
///   - mu mu_bar(1) mu_bar(0) E[int_0^t 1{B^x_s = B^y_s} e^{-mu int_0^s |B_r| dr} ds]`.
///
/// The integrals along each coalescent path are evaluated in closed form
/// from the meeting time.
#[allow(clippy::too_many_arguments)]
pub fn duality_check_fk(
    kernel: &VotingKernel,
    mu1: f64,
    mu0: f64,
    initial: &Configuration,
    x: usize,
    y: usize,
    t: f64,
    replicas: usize,
    seed: u64,
) -> Result<DualityEstimate> {
    check_common(kernel, initial, &[x, y], t, replicas)?;
    let params = GameParams::new(PayoffMatrix::zero(), 0.0, mu1, mu0)?;
    let mu = params.total_mutation();
    if mu == 0.0 {
        return Err(Error::InvalidInput(
            "Feynman-Kac check needs mu1 + mu0 > 0; use the moment check without mutation".into(),
        ));
    }
    let (mb1, mb0) = params.normalized_mutation();

    let voter: Result<Vec<f64>> = run_replicas(seed, replicas, |_, rng| {
        let rec = simulate_game(
            kernel,
            &params,
            initial.clone(),
            StopRule::Horizon(t),
            &SamplingSchedule::none(),
            rng,
        )?;
        Ok(h_function(&rec.final_config, x, y, mb1, mb0))
    })
    .into_iter()
    .collect();
    let dual: Result<Vec<f64>> = run_replicas(seed.wrapping_add(1), replicas, |_, rng| {
        let run = simulate_coalescing(kernel, &[x, y], t, rng)?;
        let state = &run.final_state;
        let (bx, by) = (state.site_of(0), state.site_of(1));
        let met = run.c(1).filter(|&m| m <= t);
        let (discount, diagonal) = match met {
            None => ((-2.0 * mu * t).exp(), 0.0),
            Some(m) => (
                (-mu * (m + t)).exp(),
                ((-2.0 * mu * m).exp() - (-mu * (m + t)).exp()) / mu,
            ),
        };
        Ok(h_function(initial, bx, by, mb1, mb0) * discount - mu * mb1 * mb0 * diagonal)
    })
    .into_iter()
    .collect();
    DualityEstimate::from_samples(&voter?, &dual?)
}
