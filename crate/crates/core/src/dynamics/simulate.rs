//! Uniformized simulation of the game and of the weighted voter model.
//!
//! Every site carries an exponential clock of rate `1 + mu(1) + mu(0)`.
//! A ring is a death with probability `1 / (1 + mu(1) + mu(0))` and a
//! mutation otherwise. Deaths whose replacement has the same type are null
//! events; they are kept because the weighted voter model must see every
//! ordered-pair event `(x, y)`, flipping or not.

use rand::Rng;
use rand_distr::Exp1;

use super::fields::two_point_densities;
use super::{Absorption, Boundary, Configuration, GameParams, Sample, TrajectoryRecord, Type};
use crate::{Error, Result, VotingKernel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Run until this time.
    Horizon(f64),
    /// Run until consensus; requires zero mutation. `max_time` caps runaway
    /// runs.
    Absorption { max_time: f64 },
}

impl StopRule {
    pub fn absorption() -> Self {
        StopRule::Absorption {
            max_time: f64::INFINITY,
        }
    }

    fn limit(&self) -> f64 {
        match *self {
            StopRule::Horizon(t) => t,
            StopRule::Absorption { max_time } => max_time,
        }
    }
}

/// When to record observables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SamplingSchedule {
    /// Increasing sample times.
    pub times: Vec<f64>,
    /// Also record after every change of configuration (event-exact path).
    pub on_change: bool,
    /// Record `W_1..W_max_ell` with each sample.
    pub max_ell: usize,
}

impl SamplingSchedule {
    pub fn none() -> Self {
        Self::default()
    }

    /// `0, dt, 2 dt, ...` up to and including `horizon`.
    pub fn grid(dt: f64, horizon: f64) -> Self {
        assert!(dt > 0.0, "grid spacing must be positive");
        let steps = (horizon / dt + 1e-9).floor() as usize;
        SamplingSchedule {
            times: (0..=steps).map(|i| i as f64 * dt).collect(),
            ..Self::default()
        }
    }

    pub fn at(times: Vec<f64>) -> Self {
        SamplingSchedule {
            times,
            ..Self::default()
        }
    }

    pub fn on_change() -> Self {
        SamplingSchedule {
            times: vec![0.0],
            on_change: true,
            max_ell: 0,
        }
    }

    pub fn with_w(mut self, max_ell: usize) -> Self {
        self.max_ell = max_ell;
        self
    }
}

/// Mutable state shared by both simulators: the configuration plus the
/// neighbour one-densities `s1(x) = sum_y q(x,y) xi(y)`, which give every
/// fitness in O(1).
struct Engine<'a> {
    kernel: &'a VotingKernel,
    params: &'a GameParams,
    config: Configuration,
    s1: Vec<f64>,
}

impl<'a> Engine<'a> {
    fn new(kernel: &'a VotingKernel, params: &'a GameParams, config: Configuration) -> Self {
        let s1 = kernel.apply(&config.as_f64());
        Engine {
            kernel,
            params,
            config,
            s1,
        }
    }

    #[inline]
    fn fitness(&self, y: usize) -> f64 {
        let t = self.config.get(y);
        let s = self.s1[y].clamp(0.0, 1.0);
        let pay = &self.params.payoff;
        (1.0 - self.params.w) + self.params.w * (pay.get(t, 1) * s + pay.get(t, 0) * (1.0 - s))
    }

    /// Probability that the replacement at `x` has type 1 under `q^w`.
    #[inline]
    fn parent_one_probability(&self, x: usize) -> f64 {
        if self.params.w == 0.0 {
            return self.s1[x];
        }
        let (mut ones, mut total) = (0.0, 0.0);
        for (y, p) in self.kernel.row(x).iter() {
            let f = p * self.fitness(y);
            total += f;
            if self.config.get(y) == 1 {
                ones += f;
            }
        }
        ones / total
    }

    /// `log q^w(x,y,xi) / q(x,y)`.
    #[inline]
    fn log_ratio(&self, x: usize, y: usize) -> f64 {
        if self.params.w == 0.0 {
            return 0.0;
        }
        let total: f64 = self
            .kernel
            .row(x)
            .iter()
            .map(|(z, p)| p * self.fitness(z))
            .sum();
        self.fitness(y).ln() - total.ln()
    }

    #[inline]
    fn set(&mut self, x: usize, t: Type) -> bool {
        if !self.config.set(x, t) {
            return false;
        }
        let delta = if t == 1 { 1.0 } else { -1.0 };
        for &y in &self.kernel.row(x).sites {
            self.s1[y] += delta * self.kernel.q(y, x);
        }
        true
    }

    fn absorbed(&self) -> Option<Boundary> {
        if self.config.is_all_ones() && self.params.mu0 == 0.0 {
            Some(Boundary::AllOnes)
        } else if self.config.is_all_zeros() && self.params.mu1 == 0.0 {
            Some(Boundary::AllZeros)
        } else {
            None
        }
    }
}

struct Recorder<'s> {
    schedule: &'s SamplingSchedule,
    next: usize,
    times: Vec<f64>,
    samples: Vec<Sample>,
}

impl<'s> Recorder<'s> {
    fn new(schedule: &'s SamplingSchedule) -> Self {
        Recorder {
            schedule,
            next: 0,
            times: Vec::new(),
            samples: Vec::new(),
        }
    }

    fn push(&mut self, t: f64, engine: &Engine, log_weight: Option<f64>) {
        let kernel = engine.kernel;
        let pi = kernel.pi();
        let p1 = kernel
            .sites()
            .filter(|&x| engine.config.get(x) == 1)
            .map(|x| pi[x])
            .sum::<f64>()
            .min(1.0);
        let w = if self.schedule.max_ell > 0 {
            two_point_densities(&engine.config, kernel, self.schedule.max_ell)
        } else {
            Vec::new()
        };
        self.times.push(t);
        self.samples.push(Sample { p1, w, log_weight });
    }

    /// Records every scheduled time `<= upto`.
    fn catch_up(&mut self, upto: f64, engine: &Engine, log_weight: Option<f64>) {
        while self.next < self.schedule.times.len() && self.schedule.times[self.next] <= upto {
            let t = self.schedule.times[self.next];
            self.next += 1;
            // on-change records already cover the initial state
            if self.times.last() == Some(&t) {
                continue;
            }
            self.push(t, engine, log_weight);
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Game,
    WeightedVoter,
}

fn check_inputs(
    kernel: &VotingKernel,
    params: &GameParams,
    initial: &Configuration,
    stop: &StopRule,
) -> Result<()> {
    params.validate()?;
    if initial.len() != kernel.len() {
        return Err(Error::InvalidInput(format!(
            "configuration has {} sites, kernel has {}",
            initial.len(),
            kernel.len()
        )));
    }
    match *stop {
        StopRule::Absorption { .. } if params.total_mutation() > 0.0 => Err(Error::InvalidStop {
            mu1: params.mu1,
            mu0: params.mu0,
        }),
        StopRule::Horizon(t) if !(t >= 0.0) => Err(Error::InvalidInput(format!(
            "horizon must be nonnegative, got {t}"
        ))),
        _ => Ok(()),
    }
}

fn run<R: Rng + ?Sized>(
    mode: Mode,
    kernel: &VotingKernel,
    params: &GameParams,
    initial: Configuration,
    stop: StopRule,
    sampling: &SamplingSchedule,
    rng: &mut R,
) -> Result<TrajectoryRecord> {
    check_inputs(kernel, params, &initial, &stop)?;
    let n = kernel.len();
    let clock = 1.0 + params.total_mutation();
    let total_rate = n as f64 * clock;
    let limit = stop.limit();
    let weighted = mode == Mode::WeightedVoter;

    let mut engine = Engine::new(kernel, params, initial);
    let mut rec = Recorder::new(sampling);
    let mut log_w = 0.0;
    let lw = |v: f64| weighted.then_some(v);
    let mut t = 0.0;
    let mut events = 0u64;
    let mut absorption = None;

    if sampling.on_change {
        rec.push(0.0, &engine, lw(0.0));
    }
    rec.catch_up(0.0, &engine, lw(0.0));

    if let Some(boundary) = engine.absorbed() {
        absorption = Some(Absorption {
            boundary,
            time: 0.0,
        });
    } else {
        loop {
            let dt: f64 = rng.sample::<f64, _>(Exp1) / total_rate;
            let t_next = t + dt;
            rec.catch_up(t_next.min(limit), &engine, lw(log_w));
            if t_next > limit {
                t = limit;
                break;
            }
            t = t_next;
            events += 1;
            let x = rng.random_range(0..n);
            let u = rng.random::<f64>() * clock;
            let new_type = if u < 1.0 {
                match mode {
                    Mode::Game => (rng.random::<f64>() < engine.parent_one_probability(x)) as Type,
                    Mode::WeightedVoter => {
                        let y = kernel.row(x).sample(rng.random::<f64>());
                        log_w += engine.log_ratio(x, y);
                        engine.config.get(y)
                    }
                }
            } else if u < 1.0 + params.mu1 {
                1
            } else {
                0
            };
            if engine.set(x, new_type) {
                if sampling.on_change {
                    rec.push(t, &engine, lw(log_w));
                }
                if let Some(boundary) = engine.absorbed() {
                    absorption = Some(Absorption { boundary, time: t });
                    break;
                }
            }
        }
    }

    let end_time = match (stop, absorption) {
        (StopRule::Horizon(h), _) => h,
        (StopRule::Absorption { .. }, Some(a)) => a.time,
        (StopRule::Absorption { .. }, None) => t,
    };
    if let Some(a) = absorption {
        if rec.times.last() != Some(&a.time) {
            rec.push(a.time, &engine, lw(log_w));
        }
        // the state is frozen from here on
        if let StopRule::Horizon(h) = stop {
            rec.catch_up(h, &engine, lw(log_w));
        }
    }
    Ok(TrajectoryRecord {
        sample_times: rec.times,
        samples: rec.samples,
        absorption,
        final_config: engine.config,
        end_time,
        log_weight: lw(log_w),
        events,
    })
}

/// Simulates the evolutionary game with generator `L^{w,mu}`.
pub fn simulate_game<R: Rng + ?Sized>(
    kernel: &VotingKernel,
    params: &GameParams,
    initial: Configuration,
    stop: StopRule,
    sampling: &SamplingSchedule,
    rng: &mut R,
) -> Result<TrajectoryRecord> {
    run(Mode::Game, kernel, params, initial, stop, sampling, rng)
}

/// Simulates the neutral voter model (with the mutation rates of
/// `params`) while accumulating `log D^w` for the game at selection
/// strength `params.w`.
///
/// Each death at `x` is an event of the pair process `(x, y)` with `y`
/// drawn from `q(x, .)`; it contributes `log q^w(x,y,xi_-) / q(x,y)`
/// whether or not `xi(x)` changes. The compensator vanishes because `q^w`
/// and `q` have the same row sums.
pub fn simulate_voter_weighted<R: Rng + ?Sized>(
    kernel: &VotingKernel,
    params: &GameParams,
    initial: Configuration,
    stop: StopRule,
    sampling: &SamplingSchedule,
    rng: &mut R,
) -> Result<TrajectoryRecord> {
    run(
        Mode::WeightedVoter,
        kernel,
        params,
        initial,
        stop,
        sampling,
        rng,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::PayoffMatrix;
    use crate::kernel::{build_complete, build_cycle};
    use crate::rng::seeded;

    #[test]
    fn starts_absorbed_at_all_ones() {
        let k = build_cycle(5).unwrap();
        let params = GameParams::new(PayoffMatrix::donation(2.0, 1.0), 0.1, 0.0, 0.0).unwrap();
        let rec = simulate_game(
            &k,
            &params,
            Configuration::ones(5),
            StopRule::absorption(),
            &SamplingSchedule::none(),
            &mut seeded(1),
        )
        .unwrap();
        assert_eq!(
            rec.absorption,
            Some(Absorption {
                boundary: Boundary::AllOnes,
                time: 0.0
            })
        );
        assert_eq!(rec.events, 0);
    }

    #[test]
    fn absorption_stop_rejects_mutation() {
        let k = build_cycle(5).unwrap();
        let params = GameParams::new(PayoffMatrix::zero(), 0.0, 0.5, 0.0).unwrap();
        let err = simulate_game(
            &k,
            &params,
            Configuration::zeros(5),
            StopRule::absorption(),
            &SamplingSchedule::none(),
            &mut seeded(1),
        );
        assert!(matches!(err, Err(Error::InvalidStop { .. })));
    }

    #[test]
    fn one_way_mutation_drives_to_ones() {
        let k = build_cycle(8).unwrap();
        let params = GameParams::new(PayoffMatrix::zero(), 0.0, 1.0, 0.0).unwrap();
        let rec = simulate_game(
            &k,
            &params,
            Configuration::zeros(8),
            StopRule::Horizon(50.0),
            &SamplingSchedule::none(),
            &mut seeded(4),
        )
        .unwrap();
        assert!(rec.final_config.is_all_ones());
        assert_eq!(rec.absorption.map(|a| a.boundary), Some(Boundary::AllOnes));
    }

    #[test]
    fn neutral_weight_is_one() {
        let k = build_complete(6).unwrap();
        let params = GameParams::new(PayoffMatrix::donation(2.0, 1.0), 0.0, 0.0, 0.0).unwrap();
        let rec = simulate_voter_weighted(
            &k,
            &params,
            Configuration::with_ones(6, &[0, 1, 2]),
            StopRule::Horizon(3.0),
            &SamplingSchedule::grid(0.5, 3.0),
            &mut seeded(2),
        )
        .unwrap();
        assert_eq!(rec.log_weight, Some(0.0));
        assert!(rec.samples.iter().all(|s| s.log_weight == Some(0.0)));
        assert_eq!(rec.sample_times.len(), 7);
    }

    #[test]
    fn replay_is_bit_exact() {
        let k = build_cycle(7).unwrap();
        let params = GameParams::new(PayoffMatrix::donation(2.0, 1.0), 0.1, 0.0, 0.0).unwrap();
        let go = || {
            simulate_voter_weighted(
                &k,
                &params,
                Configuration::with_ones(7, &[0, 3]),
                StopRule::Horizon(4.0),
                &SamplingSchedule::grid(1.0, 4.0),
                &mut seeded(77),
            )
            .unwrap()
        };
        let (a, b) = (go(), go());
        assert_eq!(
            a.log_weight.unwrap().to_bits(),
            b.log_weight.unwrap().to_bits()
        );
        assert_eq!(a.samples, b.samples);
    }

    #[test]
    fn grid_samples_fill_after_absorption() {
        let k = build_complete(3).unwrap();
        let rec = simulate_game(
            &k,
            &GameParams::neutral(),
            Configuration::with_ones(3, &[0]),
            StopRule::Horizon(100.0),
            &SamplingSchedule::grid(10.0, 100.0),
            &mut seeded(5),
        )
        .unwrap();
        assert!(rec.absorption.is_some());
        let (times, _, end) = rec.density_path();
        assert_eq!(end, rec.absorption.unwrap().time);
        assert!(times.iter().all(|&t| t <= end));
        // grid points plus one forced absorption sample
        assert_eq!(rec.sample_times.len(), 12);
        assert!(rec.sample_times.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn on_change_path_is_event_exact() {
        let k = build_cycle(6).unwrap();
        let rec = simulate_game(
            &k,
            &GameParams::neutral(),
            Configuration::with_ones(6, &[0, 1, 2]),
            StopRule::absorption(),
            &SamplingSchedule::on_change(),
            &mut seeded(8),
        )
        .unwrap();
        let a = rec.absorption.unwrap();
        assert_eq!(*rec.sample_times.last().unwrap(), a.time);
        let last = rec.samples.last().unwrap().p1;
        assert_eq!(
            last,
            if a.boundary == Boundary::AllOnes {
                1.0
            } else {
                0.0
            }
        );
        // consecutive samples differ by one site
        for w in rec.samples.windows(2) {
            assert!(((w[1].p1 - w[0].p1).abs() - 1.0 / 6.0).abs() < 1e-12);
        }
    }
}
