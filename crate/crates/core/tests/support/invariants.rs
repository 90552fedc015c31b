use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::Rng;

use wfgame_core::diffusion::{
    equivalence_check, fixation_probability, k_constants, regular_return_probabilities,
    simulate_wf, WFParams,
};
use wfgame_core::dual::{
    first_order_closed_form, first_order_coefficient, identity_check, meeting_system_residual,
    meeting_times_exact, pair_green, simulate_coalescing, InitialLaw,
};
use wfgame_core::dynamics::{
    dbar, dbar_donation, dbar_second, dbar_second_donation, fitness, game_kernel, max_selection,
    observables, payoff_fields, simulate_game, simulate_voter_weighted, Configuration, GameParams,
    PayoffMatrix, SamplingSchedule, StopRule,
};
use wfgame_core::kernel::{
    analyze, build_random_regular, eigenvalues, from_weighted_graph, WeightedEdge,
};
use wfgame_core::rng::seeded;
use wfgame_core::stats::{occupation_integral_path, summarize, wasserstein1};
use wfgame_core::VotingKernel;

const MANY: u32 = 1000;

/// A connected weighted graph: a random spanning tree plus extra edges.
fn weighted_graph(max_n: usize) -> impl Strategy<Value = VotingKernel> {
    (2..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                vec(0.0..1.0f64, n - 1),
                vec(0.1..5.0f64, n - 1),
                vec((0..n, 0..n, 0.1..5.0f64), 0..2 * n),
            )
        })
        .prop_map(|(n, parents, weights, extra)| {
            let mut edges: Vec<WeightedEdge> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for i in 1..n {
                let p = ((parents[i - 1] * i as f64) as usize).min(i - 1);
                seen.insert((p.min(i), p.max(i)));
                edges.push(WeightedEdge {
                    x: p,
                    y: i,
                    weight: weights[i - 1],
                });
            }
            for (x, y, w) in extra {
                if x != y && seen.insert((x.min(y), x.max(y))) {
                    edges.push(WeightedEdge { x, y, weight: w });
                }
            }
            from_weighted_graph(n, &edges).expect("connected graph")
        })
}

fn config_for(n: usize) -> impl Strategy<Value = Configuration> {
    vec(any::<bool>(), n).prop_map(|bits| {
        let ones: Vec<usize> = bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(i, _)| i)
            .collect();
        Configuration::with_ones(bits.len(), &ones)
    })
}

fn kernel_and_config(max_n: usize) -> impl Strategy<Value = (VotingKernel, Configuration)> {
    weighted_graph(max_n).prop_flat_map(|k| {
        let n = k.len();
        (Just(k), config_for(n))
    })
}

fn payoff() -> impl Strategy<Value = PayoffMatrix> {
    (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
        .prop_map(|(a, b, c, d)| PayoffMatrix::new(a, b, c, d))
}

pub type Outcome = Result<(), String>;

/// Runs `test` on `cases` inputs drawn from `strategy` with a fixed stream,
/// so every run sees the same inputs.
fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    TestRunner::new_with_rng(config, rng)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

pub fn kernels_are_stationary_and_reversible() -> Outcome {
    check(MANY, weighted_graph(12), |k| {
        prop_assert!(k.stationarity_residual() <= 1e-10);
        prop_assert!(k.detailed_balance_residual() <= 1e-9);
        for x in k.sites() {
            prop_assert_eq!(k.q(x, x), 0.0);
            let s: f64 = k.row(x).iter().map(|(_, p)| p).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
        Ok(())
    })
}

pub fn random_regular_graphs_are_regular() -> Outcome {
    check(
        MANY,
        (4usize..40, 1usize..5, any::<u64>()),
        |(n, k, seed)| {
            prop_assume!(k < n && (n * k) % 2 == 0 && (k > 1 || n == 2));
            let g = build_random_regular(n, k, seed).unwrap();
            let again = build_random_regular(n, k, seed).unwrap();
            prop_assert_eq!(g.matrix(), again.matrix());
            for x in g.sites() {
                prop_assert_eq!(g.row(x).len(), k);
                prop_assert!(g.row(x).iter().all(|(y, _)| y != x));
            }
            Ok(())
        },
    )
}

pub fn return_probabilities_are_probabilities() -> Outcome {
    check(MANY, weighted_graph(10), |k| {
        let a = analyze(&k, 4);
        let r = a.r();
        prop_assert_eq!(r[0], 1.0);
        prop_assert_eq!(r[1], 0.0);
        prop_assert!(r.iter().all(|v| (0.0..=1.0 + 1e-12).contains(v)));
        for per_site in &a.return_probs.per_site {
            prop_assert!(per_site.iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(v)));
        }
        Ok(())
    })
}

pub fn spectral_gap_bounds_rayleigh_quotients() -> Outcome {
    check(
        MANY,
        weighted_graph(10).prop_flat_map(|k| {
            let n = k.len();
            (Just(k), vec(-1.0..1.0f64, n))
        }),
        |(k, f)| {
            let ev = eigenvalues(&k);
            let gap = 1.0 - ev[1];
            let lambda_min = *ev.last().unwrap();
            let pi = k.pi();
            let mean: f64 = f.iter().zip(pi).map(|(v, p)| v * p).sum();
            let g: Vec<f64> = f.iter().map(|v| v - mean).collect();
            let var: f64 = g.iter().zip(pi).map(|(v, p)| p * v * v).sum();
            prop_assume!(var > 1e-9);
            let qg = k.apply(&g);
            let energy: f64 = (0..k.len()).map(|x| pi[x] * g[x] * (g[x] - qg[x])).sum();
            let ratio = energy / var;
            prop_assert!(ratio >= gap - 1e-9, "ratio {} below gap {}", ratio, gap);
            prop_assert!(ratio <= 1.0 - lambda_min + 1e-9);
            Ok(())
        },
    )
}

pub fn game_kernel_rows_and_fitness() -> Outcome {
    check(
        MANY,
        (kernel_and_config(10), payoff(), 0.0..=1.0f64),
        |((k, xi), pay, frac)| {
            let params = GameParams::new(pay, frac * max_selection(&pay), 0.0, 0.0).unwrap();
            for x in k.sites() {
                prop_assert!(fitness(x, &xi, &k, &params).unwrap() > 0.0);
                let row = game_kernel(x, &xi, &k, &params).unwrap();
                prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            Ok(())
        },
    )
}

pub fn expansion_identity_on_every_edge() -> Outcome {
    check(
        MANY,
        (kernel_and_config(10), payoff(), 0.0..=1.0f64),
        |((k, xi), pay, frac)| {
            let w = frac * max_selection(&pay);
            let params = GameParams::new(pay, w, 0.0, 0.0).unwrap();
            let fields = payoff_fields(&xi, &k, &pay, w).unwrap();
            for &(x, y, r) in &fields.rw {
                let qw = game_kernel(x, &xi, &k, &params).unwrap()[y];
                let lhs = qw / k.q(x, y);
                let rhs = 1.0 + w * (fields.a[x] - fields.b[y]) + w * w * r;
                prop_assert!((lhs - rhs).abs() < 1e-12, "{} vs {}", lhs, rhs);
            }
            Ok(())
        },
    )
}

pub fn observables_stay_in_range() -> Outcome {
    check(MANY, kernel_and_config(12), |(k, xi)| {
        let o = observables(&xi, &k, 4);
        prop_assert!((0.0..=1.0).contains(&o.p1));
        prop_assert!(o.w.iter().all(|v| (-1e-15..=0.5 + 1e-12).contains(v)));
        for sigma in 0..2 {
            let p_sigma = o.pair[0][sigma] + o.pair[1][sigma];
            if p_sigma > 0.0 {
                prop_assert!((o.cond[0][sigma] + o.cond[1][sigma] - 1.0).abs() < 1e-12);
            }
        }
        let n = k.len();
        for c in [Configuration::ones(n), Configuration::zeros(n)] {
            prop_assert!(observables(&c, &k, 4).w.iter().all(|v| *v == 0.0));
        }
        Ok(())
    })
}

pub fn dbar_matches_donation_combination() -> Outcome {
    check(
        MANY,
        (kernel_and_config(10), -5.0..5.0f64, -5.0..5.0f64),
        |((k, xi), b, c)| {
            let pay = PayoffMatrix::donation(b, c);
            let w = observables(&xi, &k, 4).w;
            prop_assert!((dbar(&xi, &k, &pay) - dbar_donation(&w, b, c)).abs() < 1e-11);
            prop_assert!(
                (dbar_second(&xi, &k, &pay) - dbar_second_donation(&w, b, c)).abs() < 1e-10
            );
            Ok(())
        },
    )
}

pub fn wasserstein_triangle_inequality() -> Outcome {
    check(
        MANY,
        (
            vec(-10.0..10.0f64, 1..20),
            vec(-10.0..10.0f64, 1..20),
            vec(-10.0..10.0f64, 1..20),
        ),
        |(a, b, c)| {
            let ab = wasserstein1(&a, &b).unwrap();
            let bc = wasserstein1(&b, &c).unwrap();
            let ac = wasserstein1(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-9);
            prop_assert!((ab - wasserstein1(&b, &a).unwrap()).abs() < 1e-12);
            prop_assert!(ab >= 0.0);
            Ok(())
        },
    )
}

pub fn wasserstein_of_a_shift_is_the_shift() -> Outcome {
    check(
        MANY,
        (vec(-10.0..10.0f64, 1..30), 0.0..5.0f64),
        |(a, delta)| {
            let shifted: Vec<f64> = a.iter().map(|v| v + delta).collect();
            prop_assert!((wasserstein1(&a, &shifted).unwrap() - delta).abs() < 1e-9);
            Ok(())
        },
    )
}

pub fn wasserstein_equal_sizes_is_order_statistic_gap() -> Outcome {
    check(
        MANY,
        (vec(-10.0..10.0f64, 1..20), any::<u64>()),
        |(a, seed)| {
            let mut rng = seeded(seed);
            let b: Vec<f64> = a.iter().map(|_| rng.random_range(-10.0..10.0)).collect();
            let (mut sa, mut sb) = (a.clone(), b.clone());
            sa.sort_by(f64::total_cmp);
            sb.sort_by(f64::total_cmp);
            let direct =
                sa.iter().zip(&sb).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64;
            prop_assert!((wasserstein1(&a, &b).unwrap() - direct).abs() < 1e-9);
            Ok(())
        },
    )
}

pub fn occupation_integral_is_additive() -> Outcome {
    check(
        MANY,
        (
            vec((0.01..2.0f64, 0.0..=1.0f64), 1..10),
            vec((0.01..2.0f64, 0.0..=1.0f64), 1..10),
        ),
        |(first, second)| {
            let build = |segs: &[(f64, f64)], start: f64| {
                let mut t = start;
                let mut times = Vec::new();
                let mut values = Vec::new();
                for &(dt, v) in segs {
                    times.push(t);
                    values.push(v);
                    t += dt;
                }
                (times, values, t)
            };
            let f = |y: f64| y * y + 0.5;
            let (t1, v1, end1) = build(&first, 0.0);
            let (t2, v2, end2) = build(&second, end1);
            let whole_t: Vec<f64> = t1.iter().chain(&t2).copied().collect();
            let whole_v: Vec<f64> = v1.iter().chain(&v2).copied().collect();
            let sum = occupation_integral_path(&t1, &v1, end1, f)
                + occupation_integral_path(&t2, &v2, end2, f);
            prop_assert!(
                (occupation_integral_path(&whole_t, &whole_v, end2, f) - sum).abs() < 1e-9
            );
            Ok(())
        },
    )
}

pub fn unit_weights_match_unweighted_summary() -> Outcome {
    check(
        MANY,
        (vec(-5.0..5.0f64, 1..50), any::<bool>()),
        |(values, bernoulli)| {
            let values: Vec<f64> = if bernoulli {
                values.iter().map(|v| (*v > 0.0) as u8 as f64).collect()
            } else {
                values
            };
            let plain = summarize(&values, None).unwrap();
            let weighted = summarize(&values, Some(&vec![1.0; values.len()])).unwrap();
            prop_assert_eq!(plain, weighted);
            prop_assert!(plain.ci95.0 <= plain.mean && plain.mean <= plain.ci95.1);
            prop_assert!(plain.std_error >= 0.0);
            Ok(())
        },
    )
}

pub fn weighted_summary_bounds() -> Outcome {
    check(MANY, vec((-5.0..5.0f64, 0.0..3.0f64), 1..50), |pairs| {
        let (values, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        prop_assume!(weights.iter().sum::<f64>() > 0.0);
        let s = summarize(&values, Some(&weights)).unwrap();
        prop_assert!(s.ess <= s.n as f64 + 1e-9);
        prop_assert!(s.ci95.0 <= s.mean && s.mean <= s.ci95.1);
        Ok(())
    })
}

pub fn fixation_is_monotone() -> Outcome {
    check(
        MANY,
        (-10.0..10.0f64, 0.01..0.98f64, 0.001..0.01f64, 0.01..1.0f64),
        |(a, y, dy, da)| {
            prop_assert!(fixation_probability(a, y + dy) > fixation_probability(a, y));
            prop_assert!(fixation_probability(a + da, y) > fixation_probability(a, y));
            let phi = fixation_probability(a, y);
            prop_assert!((0.0..=1.0).contains(&phi));
            Ok(())
        },
    )
}

pub fn fixation_is_continuous_at_zero() -> Outcome {
    check(MANY, 0.0..=1.0f64, |y| {
        prop_assert!((fixation_probability(1e-8, y) - y).abs() < 1e-7);
        prop_assert!((fixation_probability(-1e-8, y) - y).abs() < 1e-7);
        Ok(())
    })
}

pub fn k1_sign_rule() -> Outcome {
    check(
        MANY,
        (3usize..20, 0.0..20.0f64, 0.01..5.0f64),
        |(k, b, c)| {
            let kc = k_constants(&regular_return_probabilities(k), b, c).unwrap();
            let critical = b - c * k as f64;
            prop_assume!(critical.abs() > 1e-9);
            prop_assert_eq!(kc.k1 > 0.0, critical > 0.0);
            Ok(())
        },
    )
}

pub fn pair_approximation_equivalence() -> Outcome {
    check(
        MANY,
        (
            3usize..12,
            0.0..10.0f64,
            0.0..5.0f64,
            20usize..2000,
            0.0..5.0f64,
        ),
        |(k, b, c, n, w_inf)| {
            prop_assume!(n > k);
            prop_assert!(equivalence_check(k, b, c, n, w_inf).unwrap() < 1e-12);
            Ok(())
        },
    )
}

pub fn meeting_tables_and_identity() -> Outcome {
    check(MANY, weighted_graph(9), |k| {
        let t = meeting_times_exact(&k).unwrap();
        prop_assert!(t.residual < 1e-10);
        prop_assert!((meeting_system_residual(&k, &t) - t.residual).abs() < 1e-15);
        for x in k.sites() {
            prop_assert_eq!(t.get(x, x), 0.0);
            for y in k.sites() {
                prop_assert!((t.get(x, y) - t.get(y, x)).abs() < 1e-9 * (1.0 + t.get(x, y)));
                if x != y {
                    prop_assert!(t.get(x, y) > 0.0);
                }
            }
        }
        prop_assert!(identity_check(&k, &t).residual < 1e-10);
        Ok(())
    })
}

pub fn green_rows_sum_to_meeting_times() -> Outcome {
    check(MANY, weighted_graph(7), |k| {
        let g = pair_green(&k).unwrap();
        let t = meeting_times_exact(&k).unwrap();
        prop_assert!(g.min_entry() >= -1e-12);
        for (x, y) in g.pairs().collect::<Vec<_>>() {
            prop_assert!((g.row_sum(x, y) - t.get(x, y)).abs() < 1e-8);
        }
        Ok(())
    })
}

pub fn coalescent_paths_are_consistent() -> Outcome {
    check(
        MANY,
        (
            weighted_graph(12).prop_flat_map(|k| {
                let n = k.len();
                (Just(k), vec(0..n, 1..10))
            }),
            0.0..5.0f64,
            any::<u64>(),
        ),
        |((k, starts), horizon, seed)| {
            let run = simulate_coalescing(&k, &starts, horizon, &mut seeded(seed)).unwrap();
            let mut labels: Vec<usize> = run.final_state.blocks.iter().flatten().copied().collect();
            labels.sort_unstable();
            prop_assert_eq!(labels, (0..starts.len()).collect::<Vec<_>>());
            let mut last = run.initial_blocks;
            for m in &run.merges {
                prop_assert!(m.blocks_after < last);
                last = m.blocks_after;
            }
            let mut sites = run.final_state.block_sites.clone();
            sites.sort_unstable();
            sites.dedup();
            prop_assert_eq!(sites.len(), run.final_state.len());
            Ok(())
        },
    )
}

pub fn neutral_first_order_is_zero() -> Outcome {
    check(200, (weighted_graph(7), 0usize..8), |(k, m)| {
        let g = pair_green(&k).unwrap();
        let m = m.min(k.len());
        let v = first_order_coefficient(
            &k,
            &g,
            &PayoffMatrix::donation(0.0, 0.0),
            &InitialLaw::UniformOnes(m),
        )
        .unwrap();
        prop_assert_eq!(v, 0.0);
        Ok(())
    })
}

pub fn regular_closed_form_up_to_degree() -> Outcome {
    check(
        200,
        (
            4usize..11,
            3usize..5,
            any::<u64>(),
            0.0..10.0f64,
            0.0..3.0f64,
        ),
        |(n, k, seed, b, c)| {
            prop_assume!(k < n && (n * k) % 2 == 0);
            let g = build_random_regular(n, k, seed).unwrap();
            let green = pair_green(&g).unwrap();
            let pay = PayoffMatrix::donation(b, c);
            for m in 1..n {
                let v =
                    first_order_coefficient(&g, &green, &pay, &InitialLaw::UniformOnes(m)).unwrap();
                let cf = first_order_closed_form(n, k, m, b, c);
                prop_assert!(
                    (k as f64 * v - cf).abs() < 1e-8,
                    "m = {}: {} vs {}",
                    m,
                    v,
                    cf
                );
            }
            Ok(())
        },
    )
}

pub fn boundaries_absorb_without_mutation() -> Outcome {
    check(
        200,
        (weighted_graph(10), payoff(), 0.0..=1.0f64, any::<u64>()),
        |(k, pay, frac, seed)| {
            let params = GameParams::new(pay, frac * max_selection(&pay), 0.0, 0.0).unwrap();
            for start in [Configuration::ones(k.len()), Configuration::zeros(k.len())] {
                let rec = simulate_game(
                    &k,
                    &params,
                    start.clone(),
                    StopRule::Horizon(5.0),
                    &SamplingSchedule::grid(1.0, 5.0),
                    &mut seeded(seed),
                )
                .unwrap();
                prop_assert_eq!(&rec.final_config, &start);
                prop_assert!(rec.samples.iter().all(|s| s.p1 == rec.samples[0].p1));
            }
            Ok(())
        },
    )
}

pub fn weights_replay_bit_exactly() -> Outcome {
    check(
        200,
        (kernel_and_config(10), payoff(), 0.0..=1.0f64, any::<u64>()),
        |((k, xi), pay, frac, seed)| {
            let params = GameParams::new(pay, frac * max_selection(&pay), 0.0, 0.0).unwrap();
            let run = |s| {
                simulate_voter_weighted(
                    &k,
                    &params,
                    xi.clone(),
                    StopRule::Horizon(3.0),
                    &SamplingSchedule::grid(0.5, 3.0),
                    &mut seeded(s),
                )
                .unwrap()
            };
            let (a, b) = (run(seed), run(seed));
            prop_assert_eq!(
                a.log_weight.unwrap().to_bits(),
                b.log_weight.unwrap().to_bits()
            );
            prop_assert!(a.samples.iter().all(|s| (0.0..=1.0).contains(&s.p1)));
            Ok(())
        },
    )
}

pub fn wf_paths_stay_in_unit_interval() -> Outcome {
    check(
        200,
        (
            -5.0..5.0f64,
            0.0..2.0f64,
            0.0..2.0f64,
            0.0..=1.0f64,
            any::<u64>(),
        ),
        |(a, mu1, mu0, y0, seed)| {
            let p = WFParams::new(a, mu1, mu0, y0).unwrap();
            let path = simulate_wf(&p, 0.01, 5.0, &mut seeded(seed)).unwrap();
            prop_assert!(path.values.iter().all(|y| (0.0..=1.0).contains(y)));
            Ok(())
        },
    )
}

pub fn neutral_density_is_a_martingale() -> Outcome {
    let k = build_random_regular(20, 3, 4).unwrap();
    let xi = Configuration::with_ones(20, &[0, 1, 2, 3, 4, 5, 6]);
    let p0 = observables(&xi, &k, 1).p1;
    let params = GameParams::neutral();
    let finals: Vec<f64> = wfgame_core::ensemble::run_replicas(12, 4000, |_, rng| {
        let rec = simulate_game(
            &k,
            &params,
            xi.clone(),
            StopRule::Horizon(3.0),
            &SamplingSchedule::at(vec![3.0]),
            rng,
        )
        .unwrap();
        rec.samples[0].p1
    });
    let s = summarize(&finals, None).unwrap();
    if (s.mean - p0).abs() < 3.0 * s.std_error {
        Ok(())
    } else {
        Err(format!(
            "mean density {} +- {} vs initial {p0}",
            s.mean, s.std_error
        ))
    }
}

pub type Invariant = (&'static str, fn() -> Outcome);

pub const ALL: &[Invariant] = &[
    (
        "kernels_are_stationary_and_reversible",
        kernels_are_stationary_and_reversible,
    ),
    (
        "random_regular_graphs_are_regular",
        random_regular_graphs_are_regular,
    ),
    (
        "return_probabilities_are_probabilities",
        return_probabilities_are_probabilities,
    ),
    (
        "spectral_gap_bounds_rayleigh_quotients",
        spectral_gap_bounds_rayleigh_quotients,
    ),
    ("game_kernel_rows_and_fitness", game_kernel_rows_and_fitness),
    (
        "expansion_identity_on_every_edge",
        expansion_identity_on_every_edge,
    ),
    ("observables_stay_in_range", observables_stay_in_range),
    (
        "dbar_matches_donation_combination",
        dbar_matches_donation_combination,
    ),
    (
        "wasserstein_triangle_inequality",
        wasserstein_triangle_inequality,
    ),
    (
        "wasserstein_of_a_shift_is_the_shift",
        wasserstein_of_a_shift_is_the_shift,
    ),
    (
        "wasserstein_equal_sizes_is_order_statistic_gap",
        wasserstein_equal_sizes_is_order_statistic_gap,
    ),
    (
        "occupation_integral_is_additive",
        occupation_integral_is_additive,
    ),
    (
        "unit_weights_match_unweighted_summary",
        unit_weights_match_unweighted_summary,
    ),
    ("weighted_summary_bounds", weighted_summary_bounds),
    ("fixation_is_monotone", fixation_is_monotone),
    (
        "fixation_is_continuous_at_zero",
        fixation_is_continuous_at_zero,
    ),
    ("k1_sign_rule", k1_sign_rule),
    (
        "pair_approximation_equivalence",
        pair_approximation_equivalence,
    ),
    ("meeting_tables_and_identity", meeting_tables_and_identity),
    (
        "green_rows_sum_to_meeting_times",
        green_rows_sum_to_meeting_times,
    ),
    (
        "coalescent_paths_are_consistent",
        coalescent_paths_are_consistent,
    ),
    ("neutral_first_order_is_zero", neutral_first_order_is_zero),
    (
        "regular_closed_form_up_to_degree",
        regular_closed_form_up_to_degree,
    ),
    (
        "boundaries_absorb_without_mutation",
        boundaries_absorb_without_mutation,
    ),
    ("weights_replay_bit_exactly", weights_replay_bit_exactly),
    (
        "wf_paths_stay_in_unit_interval",
        wf_paths_stay_in_unit_interval,
    ),
    (
        "neutral_density_is_a_martingale",
        neutral_density_is_a_martingale,
    ),
];
