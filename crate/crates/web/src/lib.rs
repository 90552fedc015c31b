//! Browser demo: fixation curves, Wright-Fisher paths and game density
//! paths. Each export returns a flat `Float64Array`.

use wasm_bindgen::prelude::*;
use wfgame_core::diffusion::{fixation_probability, simulate_wf, WFParams};
use wfgame_core::dual::{gamma, meeting_times_exact};
use wfgame_core::dynamics::{
    simulate_game, Configuration, GameParams, PayoffMatrix, SamplingSchedule, StopRule,
};
use wfgame_core::kernel::{build_complete, build_cycle, build_random_regular};
use wfgame_core::rng::seeded;
use wfgame_core::VotingKernel;

/// Largest graph the page will build; keeps the meeting-time solve short.
pub const MAX_SITES: usize = 200;
const MAX_POINTS: usize = 1000;

/// `phi_a(y)` at `points` evenly spaced `y` in `[0,1]`.
pub fn fixation_curve_values(a: f64, points: usize) -> Vec<f64> {
    let last = points.max(2) - 1;
    (0..=last)
        .map(|i| fixation_probability(a, i as f64 / last as f64))
        .collect()
}

/// Keeps at most `MAX_POINTS` of the `(t, y)` pairs, always including the
/// last one, and flattens them.
fn thin(times: &[f64], values: &[f64]) -> Vec<f64> {
    let stride = times.len().div_ceil(MAX_POINTS).max(1);
    let mut out = Vec::with_capacity(2 * MAX_POINTS + 2);
    for i in (0..times.len()).step_by(stride) {
        out.extend([times[i], values[i]]);
    }
    if let (Some(&t), Some(&y)) = (times.last(), values.last()) {
        if !(times.len() - 1).is_multiple_of(stride) {
            out.extend([t, y]);
        }
    }
    out
}

/// Euler-Maruyama path of the Wright-Fisher diffusion as `[t0, y0, t1, y1, ...]`.
pub fn wf_path_values(
    a: f64,
    mu1: f64,
    mu0: f64,
    y0: f64,
    dt: f64,
    horizon: f64,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let params = WFParams::new(a, mu1, mu0, y0).map_err(|e| e.to_string())?;
    let path = simulate_wf(&params, dt, horizon, &mut seeded(seed)).map_err(|e| e.to_string())?;
    Ok(thin(&path.times, &path.values))
}

fn demo_kernel(graph: &str, n: usize, seed: u64) -> Result<VotingKernel, String> {
    if n > MAX_SITES {
        return Err(format!("at most {MAX_SITES} sites in the browser"));
    }
    match graph {
        "complete" => build_complete(n),
        "cycle" => build_cycle(n),
        "rr3" => build_random_regular(n, 3, seed),
        other => return Err(format!("unknown graph {other:?}")),
    }
    .map_err(|e| e.to_string())
}

/// Density of type 1 in the donation game from `m` random ones, as
/// `[s0, p0, s1, p1, ...]` with time `s` in units of `gamma`.
/// `w = w_inf nu(1)`.
#[allow(clippy::too_many_arguments)]
pub fn game_density_values(
    graph: &str,
    n: usize,
    b: f64,
    c: f64,
    w_inf: f64,
    m: usize,
    horizon: f64,
    seed: u64,
) -> Result<Vec<f64>, String> {
    let kernel = demo_kernel(graph, n, seed)?;
    if m > n {
        return Err(format!("m = {m} exceeds the {n} sites"));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(format!("horizon must be positive, got {horizon}"));
    }
    let g = gamma(
        &kernel,
        &meeting_times_exact(&kernel).map_err(|e| e.to_string())?,
    );
    let w = w_inf * kernel.nu_total();
    let params =
        GameParams::new(PayoffMatrix::donation(b, c), w, 0.0, 0.0).map_err(|e| e.to_string())?;
    let mut rng = seeded(seed);
    let xi = Configuration::uniform_with_ones(n, m, &mut rng);
    let end = horizon * g;
    let schedule = SamplingSchedule::grid(end / 400.0, end);
    let rec = simulate_game(
        &kernel,
        &params,
        xi,
        StopRule::Horizon(end),
        &schedule,
        &mut rng,
    )
    .map_err(|e| e.to_string())?;
    let times: Vec<f64> = rec.sample_times.iter().map(|t| t / g).collect();
    let values: Vec<f64> = rec.samples.iter().map(|s| s.p1).collect();
    Ok(thin(&times, &values))
}

#[wasm_bindgen]
pub fn fixation_curve(a: f64, points: usize) -> Vec<f64> {
    fixation_curve_values(a, points)
}

#[wasm_bindgen]
pub fn wf_path(
    a: f64,
    mu1: f64,
    mu0: f64,
    y0: f64,
    dt: f64,
    horizon: f64,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    wf_path_values(a, mu1, mu0, y0, dt, horizon, seed as u64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn game_density(
    graph: &str,
    n: usize,
    b: f64,
    c: f64,
    w_inf: f64,
    m: usize,
    horizon: f64,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    game_density_values(graph, n, b, c, w_inf, m, horizon, seed as u64)
        .map_err(|e| JsError::new(&e))
}
