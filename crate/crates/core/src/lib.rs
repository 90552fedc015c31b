//! Evolutionary games with death-birth updating on finite reversible kernels.
//!
//! The crate is organised around five layers:
//!
//! - [`kernel`]: voting kernels `(E, q)`, their stationary and spectral data,
//!   and graph generators.
//! - [`dynamics`]: configurations, payoffs, fitness, the game kernel `q^w`,
//!   configuration observables, and the two simulators (the game itself and
//!   the neutral voter model carrying the likelihood-ratio weight `D^w`).
//! - [`dual`]: coalescing random walks, exact meeting-time and Green-function
//!   solvers, first-order fixation coefficients and duality cross-checks.
//! - [`diffusion`]: Wright-Fisher limits, fixation probabilities and the
//!   pair-approximation coefficients.
//! - [`stats`]: ensemble summaries, Wasserstein-1 and occupation integrals.

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffusion;
pub mod dual;
pub mod dynamics;
pub mod ensemble;
mod error;
pub mod kernel;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use kernel::VotingKernel;
