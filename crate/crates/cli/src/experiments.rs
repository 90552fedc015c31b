use serde_json::{json, Value};
use wfgame_core::diffusion::{
    fixation_probability, k_constants, pair_approx_time_scale, wf_absorption, WFParams,
};
use wfgame_core::dual::{
    coalescent_spectrum, duality_check_fk, duality_check_moment, first_order_closed_form,
    first_order_coefficient, gamma, identity_check, meeting_times_exact, pair_green,
    DualityEstimate, InitialLaw,
};
use wfgame_core::dynamics::{
    simulate_game, simulate_voter_weighted, Boundary, Configuration, GameParams, SamplingSchedule,
    StopRule,
};
use wfgame_core::ensemble::run_replicas;
use wfgame_core::kernel::analyze;
use wfgame_core::rng::{seeded, split_seed, SimRng};
use wfgame_core::stats::{ks_two_sample, summarize, wasserstein1, z_score, EnsembleSummary};
use wfgame_core::Result;

use crate::config::{Experiment, Resolved};

const DEFAULT_DT: f64 = 1e-3;
const DEFAULT_WF_HORIZON: f64 = 1e3;

/// Tabular results plus a JSON summary and a one-line report.
pub struct Outcome {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub results: Value,
    pub line: String,
}

fn scalar_rows(pairs: &[(&str, f64)]) -> Vec<Vec<String>> {
    pairs
        .iter()
        .map(|(k, v)| vec![k.to_string(), v.to_string()])
        .collect()
}

pub fn run(r: &Resolved) -> Result<Outcome> {
    match r.config.experiment {
        Experiment::Identity => identity(r),
        Experiment::Gamma => gamma_report(r),
        Experiment::FirstOrder => first_order(r),
        Experiment::Duality => duality(r),
        Experiment::FixationCompare => fixation_compare(r),
        Experiment::Kingman => kingman(r),
        Experiment::AbsorptionWasserstein => absorption_wasserstein(r),
    }
}

fn identity(r: &Resolved) -> Result<Outcome> {
    let table = meeting_times_exact(&r.kernel)?;
    let id = identity_check(&r.kernel, &table);
    Ok(Outcome {
        columns: vec!["quantity", "value"],
        rows: scalar_rows(&[
            ("lhs", id.lhs),
            ("rhs", id.rhs),
            ("residual", id.residual),
            ("solver_residual", table.residual),
        ]),
        results: json!({
            "lhs": id.lhs,
            "rhs": id.rhs,
            "residual": id.residual,
            "solver_residual": table.residual,
        }),
        line: format!(
            "identity: lhs = {} rhs = {} residual = {:.3e}",
            id.lhs, id.rhs, id.residual
        ),
    })
}

fn gamma_report(r: &Resolved) -> Result<Outcome> {
    let n = r.kernel.len();
    let g = gamma(&r.kernel, &meeting_times_exact(&r.kernel)?);
    let mut pairs = vec![
        ("gamma", g),
        ("sites", n as f64),
        ("gamma_over_n", g / n as f64),
    ];
    let mut results =
        json!({ "gamma": g, "gamma_over_n": g / n as f64, "nu_total": r.kernel.nu_total() });
    if let Some(k) = r.degree.filter(|&k| k >= 3) {
        let scale = pair_approx_time_scale(n, k);
        pairs.push(("pair_approx_scale", scale));
        pairs.push(("gamma_over_pair_approx_scale", g / scale));
        results["pair_approx_scale"] = json!(scale);
        results["gamma_over_pair_approx_scale"] = json!(g / scale);
    }
    Ok(Outcome {
        columns: vec!["quantity", "value"],
        rows: scalar_rows(&pairs),
        results,
        line: format!("gamma: gamma = {g} gamma/N = {}", g / n as f64),
    })
}

fn first_order(r: &Resolved) -> Result<Outcome> {
    let green = pair_green(&r.kernel)?;
    let fixed = r.fixed_initial();
    let m = r.initial_m();
    let law = match &fixed {
        Some(c) => InitialLaw::Point(c.clone()),
        None => InitialLaw::UniformOnes(m),
    };
    let exact = first_order_coefficient(&r.kernel, &green, &r.payoff, &law)?;
    let mut pairs = vec![("coefficient", exact), ("m", m as f64)];
    let mut results = json!({ "coefficient": exact, "m": m });
    let mut line = format!("first-order: coefficient = {exact}");
    // the printed closed form is for u_m on regular graphs
    if let (Some(k), None, Some((b, c))) = (r.degree, &fixed, r.payoff.additive_form()) {
        let closed = first_order_closed_form(r.kernel.len(), k, m, b, c);
        pairs.push(("closed_form", closed));
        pairs.push(("closed_form_over_coefficient", closed / exact));
        results["closed_form"] = json!(closed);
        results["closed_form_over_coefficient"] = json!(closed / exact);
        line.push_str(&format!(
            " closed form = {closed} ratio = {}",
            closed / exact
        ));
    }
    Ok(Outcome {
        columns: vec!["quantity", "value"],
        rows: scalar_rows(&pairs),
        results,
        line,
    })
}

fn estimate_row(check: &str, sites: &str, t: f64, e: &DualityEstimate) -> Vec<String> {
    vec![
        check.to_string(),
        sites.to_string(),
        t.to_string(),
        e.voter_estimate.to_string(),
        e.voter_se.to_string(),
        e.dual_estimate.to_string(),
        e.dual_se.to_string(),
        e.z_score.to_string(),
    ]
}

fn duality(r: &Resolved) -> Result<Outcome> {
    let root = r.config.root_seed;
    let initial = r.fixed_initial().unwrap_or_else(|| {
        Configuration::uniform_with_ones(r.kernel.len(), r.initial_m(), &mut seeded(root))
    });
    let times = r
        .config
        .sampling_grid
        .clone()
        .unwrap_or_else(|| vec![r.config.horizon.unwrap_or(1.0)]);
    let replicas = r.config.replicas;
    let mutation = r.params.total_mutation() > 0.0;

    let mut rows = Vec::new();
    let mut max_z: f64 = 0.0;
    let mut index = 1;
    for &t in &times {
        if mutation {
            let e = duality_check_fk(
                &r.kernel,
                r.params.mu1,
                r.params.mu0,
                &initial,
                0,
                1,
                t,
                replicas,
                split_seed(root, index),
            )?;
            index += 1;
            max_z = max_z.max(e.z_score.abs());
            rows.push(estimate_row("feynman-kac", "0 1", t, &e));
        } else {
            for sites in [&[0][..], &[0, 1][..]] {
                let e = duality_check_moment(
                    &r.kernel,
                    &initial,
                    sites,
                    t,
                    replicas,
                    split_seed(root, index),
                )?;
                index += 1;
                max_z = max_z.max(e.z_score.abs());
                let label = sites
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                rows.push(estimate_row("moment", &label, t, &e));
            }
        }
    }
    Ok(Outcome {
        columns: vec![
            "check", "sites", "t", "voter", "voter_se", "dual", "dual_se", "z",
        ],
        line: format!("duality: {} checks, max |z| = {max_z:.3}", rows.len()),
        results: json!({ "checks": rows.len(), "max_abs_z": max_z, "initial_ones": initial.ones_count() }),
        rows,
    })
}

fn draw_initial(r: &Resolved, rng: &mut SimRng) -> Configuration {
    r.fixed_initial()
        .unwrap_or_else(|| Configuration::uniform_with_ones(r.kernel.len(), r.initial_m(), rng))
}

fn summary_row(name: &str, s: &EnsembleSummary) -> Vec<String> {
    vec![
        name.to_string(),
        s.mean.to_string(),
        s.std_error.to_string(),
        s.ci95.0.to_string(),
        s.ci95.1.to_string(),
        s.n.to_string(),
    ]
}

fn fixation_compare(r: &Resolved) -> Result<Outcome> {
    let root = r.config.root_seed;
    let replicas = r.config.replicas;
    let none = SamplingSchedule::none();
    let game: Vec<f64> = run_replicas(split_seed(root, 1), replicas, |_, rng| {
        let xi = draw_initial(r, rng);
        simulate_game(&r.kernel, &r.params, xi, StopRule::absorption(), &none, rng)
            .map(|rec| rec.fixed_at_ones() as u8 as f64)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let weighted: Vec<(f64, f64)> = run_replicas(split_seed(root, 2), replicas, |_, rng| {
        let xi = draw_initial(r, rng);
        simulate_voter_weighted(&r.kernel, &r.params, xi, StopRule::absorption(), &none, rng)
            .map(|rec| (rec.weight(), rec.fixed_at_ones() as u8 as f64))
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let (weights, fixed): (Vec<f64>, Vec<f64>) = weighted.into_iter().unzip();

    let game_s = summarize(&game, None)?;
    let weighted_s = summarize(&fixed, Some(&weights))?;
    let mut rows = vec![
        summary_row("game", &game_s),
        summary_row("weighted-voter", &weighted_s),
    ];
    let mut results = json!({
        "game": game_s,
        "weighted_voter": weighted_s,
        "z_game_vs_weighted": game_s.z_score(&weighted_s),
    });
    let mut line = format!(
        "fixation-compare: game {:.5} +- {:.5}, weighted voter {:.5} +- {:.5}",
        game_s.mean, game_s.std_error, weighted_s.mean, weighted_s.std_error
    );

    if let Some((b, c)) = r.payoff.additive_form() {
        let n = r.kernel.len();
        let k1 = k_constants(analyze(&r.kernel, 3).r(), b, c)?.k1;
        let w_inf = r.params.w / r.kernel.nu_total();
        let a = w_inf * k1;
        let y0 = r.initial_m() as f64 / n as f64;
        let phi = fixation_probability(a, y0);
        rows.push(vec![
            "wright-fisher".into(),
            phi.to_string(),
            "0".into(),
            phi.to_string(),
            phi.to_string(),
            "0".into(),
        ]);

        let wf = WFParams::new(a, 0.0, 0.0, y0)?;
        let dt = r.config.dt.unwrap_or(DEFAULT_DT);
        let max_time = r.config.horizon.unwrap_or(DEFAULT_WF_HORIZON);
        let em: Vec<Option<f64>> = run_replicas(split_seed(root, 3), replicas, |_, rng| {
            wf_absorption(&wf, dt, max_time, rng)
                .map(|hit| hit.map(|(b, _)| (b == Boundary::AllOnes) as u8 as f64))
        })
        .into_iter()
        .collect::<Result<_>>()?;
        let absorbed: Vec<f64> = em.iter().flatten().copied().collect();
        if !absorbed.is_empty() {
            let em_s = summarize(&absorbed, None)?;
            rows.push(summary_row("wright-fisher-em", &em_s));
            results["wright_fisher_em"] = json!(em_s);
        }
        let sigma = (phi * (1.0 - phi) / replicas as f64).sqrt();
        results["k1"] = json!(k1);
        results["w_inf"] = json!(w_inf);
        results["a"] = json!(a);
        results["wright_fisher"] = json!(phi);
        results["wright_fisher_em_unabsorbed"] = json!(em.len() - absorbed.len());
        results["z_game_vs_wright_fisher"] = json!(z_score(game_s.mean, 0.0, phi, sigma));
        line.push_str(&format!(", Wright-Fisher {phi:.5} (a = {a:.4})"));
    }
    Ok(Outcome {
        columns: vec![
            "estimator",
            "fixation",
            "std_error",
            "ci_low",
            "ci_high",
            "samples",
        ],
        rows,
        results,
        line,
    })
}

fn kingman(r: &Resolved) -> Result<Outcome> {
    let g = gamma(&r.kernel, &meeting_times_exact(&r.kernel)?);
    let max_ell = r.config.max_ell.unwrap_or(2);
    let s = coalescent_spectrum(&r.kernel, g, max_ell, r.config.replicas, r.config.root_seed)?;
    let rows = (0..max_ell)
        .map(|i| {
            vec![
                (i + 1).to_string(),
                s.means[i].to_string(),
                s.std_errors[i].to_string(),
                s.reference_means[i].to_string(),
                ((s.means[i] - s.reference_means[i]) / s.std_errors[i]).to_string(),
                s.ks[i].to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        columns: vec![
            "ell",
            "mean_c_over_gamma",
            "std_error",
            "kingman_mean",
            "z",
            "ks",
        ],
        rows,
        line: format!(
            "kingman: gamma = {g} C1/gamma = {:.5} +- {:.5} (reference 2)",
            s.means[0], s.std_errors[0]
        ),
        results: json!({
            "gamma": g,
            "means": s.means,
            "std_errors": s.std_errors,
            "reference_means": s.reference_means,
            "ks": s.ks,
        }),
    })
}

fn absorption_times(r: &Resolved, params: &GameParams, seed: u64) -> Result<Vec<f64>> {
    let none = SamplingSchedule::none();
    run_replicas(seed, r.config.replicas, |_, rng| {
        let xi = draw_initial(r, rng);
        let rec = simulate_game(&r.kernel, params, xi, StopRule::absorption(), &none, rng)?;
        Ok(rec.absorption_time().unwrap_or(rec.end_time))
    })
    .into_iter()
    .collect()
}

fn absorption_wasserstein(r: &Resolved) -> Result<Outcome> {
    let root = r.config.root_seed;
    let g = gamma(&r.kernel, &meeting_times_exact(&r.kernel)?);
    let rescale = |v: Vec<f64>| v.into_iter().map(|t| t / g).collect::<Vec<_>>();
    let game = rescale(absorption_times(r, &r.params, split_seed(root, 1))?);
    let voter = rescale(absorption_times(
        r,
        &GameParams::neutral(),
        split_seed(root, 2),
    )?);
    let w1 = wasserstein1(&game, &voter)?;
    let ks = ks_two_sample(&game, &voter)?;
    let game_s = summarize(&game, None)?;
    let voter_s = summarize(&voter, None)?;
    let rows = game
        .iter()
        .zip(&voter)
        .enumerate()
        .map(|(i, (a, b))| vec![i.to_string(), a.to_string(), b.to_string()])
        .collect();
    Ok(Outcome {
        columns: vec!["replica", "game_t_over_gamma", "voter_t_over_gamma"],
        rows,
        line: format!(
            "absorption-wasserstein: W1 = {w1:.5}, mean T/gamma game {:.4} voter {:.4}",
            game_s.mean, voter_s.mean
        ),
        results: json!({
            "gamma": g,
            "wasserstein1": w1,
            "ks": ks,
            "game": game_s,
            "voter": voter_s,
        }),
    })
}
