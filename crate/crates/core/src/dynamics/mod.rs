//! The evolutionary game with death-birth updating and its neutral voter
//! representation.

mod config;
mod fields;
mod payoff;
mod simulate;
mod trajectory;

pub use config::{Configuration, Type};
pub use fields::{
    dbar, dbar_donation, dbar_second, dbar_second_donation, fitness, game_kernel, observables,
    payoff_fields, Observables, PayoffFields,
};
pub use payoff::{max_selection, GameParams, PayoffMatrix};
pub use simulate::{simulate_game, simulate_voter_weighted, SamplingSchedule, StopRule};
pub use trajectory::{Absorption, Boundary, Sample, TrajectoryHeader, TrajectoryRecord};
