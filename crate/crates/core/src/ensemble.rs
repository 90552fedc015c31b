//! Independent replicas over a shared read-only model.

use crate::rng::{replica_rng, SimRng};

/// Runs `f(index, rng)` for `index in 0..replicas`, each with its own
/// derived stream, and returns the results ordered by index.
pub fn run_replicas<T, F>(root_seed: u64, replicas: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut SimRng) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..replicas)
            .into_par_iter()
            .map(|i| f(i, &mut replica_rng(root_seed, i as u64)))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..replicas)
            .map(|i| f(i, &mut replica_rng(root_seed, i as u64)))
            .collect()
    }
}
