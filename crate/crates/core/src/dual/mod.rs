//! Coalescing random-walk duals of the voter model.

mod checks;
mod coalescing;
mod exact;
mod kingman;

pub use checks::{duality_check_fk, duality_check_moment, DualityEstimate};
pub use coalescing::{simulate_coalescing, CoalescentRun, CoalescentState, Merge};
pub use exact::{
    first_order_closed_form, first_order_coefficient, gamma, identity_check,
    meeting_system_residual, meeting_times_exact, pair_green, IdentityCheck, InitialLaw,
    MeetingTable, PairGreen,
};
pub use kingman::{coalescent_spectrum, kingman_reference_mean, KingmanSpectrum};
