use rand::Rng;
use rand_distr::Exp1;

use crate::{Error, Result, VotingKernel};

const EMPTY: usize = usize::MAX;

/// A partition of the start labels into blocks, each sitting on its own
/// site.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalescentState {
    /// Labels (indices into the start list) carried by each block.
    pub blocks: Vec<Vec<usize>>,
    pub block_sites: Vec<usize>,
    pub time: f64,
}

impl CoalescentState {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Current site of the walker started as `label`.
    pub fn site_of(&self, label: usize) -> usize {
        let b = self
            .blocks
            .iter()
            .position(|labels| labels.contains(&label))
            .expect("label belongs to some block");
        self.block_sites[b]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub time: f64,
    pub site: usize,
    /// Block count just after the merge.
    pub blocks_after: usize,
}

#[derive(Debug, Clone)]
pub struct CoalescentRun {
    pub initial_blocks: usize,
    pub merges: Vec<Merge>,
    /// `coalescence_times[k - 1] = C_k`, the first time at most `k` blocks
    /// remain; `None` if that did not happen before the horizon.
    pub coalescence_times: Vec<Option<f64>>,
    pub final_state: CoalescentState,
}

impl CoalescentRun {
    /// `C_k` for `k >= 1`.
    pub fn c(&self, k: usize) -> Option<f64> {
        if k >= self.initial_blocks {
            Some(0.0)
        } else {
            self.coalescence_times[k - 1]
        }
    }

    /// Block count at time `t` (within the simulated horizon).
    pub fn blocks_at(&self, t: f64) -> usize {
        self.initial_blocks - self.merges.iter().take_while(|m| m.time <= t).count()
    }
}

/// Coalescing rate-1 `q`-walks started from `start_sites`, run until
/// `horizon`. With an infinite horizon the run stops once a single block
/// remains.
///
/// Repeated start sites share a block from time 0. Each block jumps at
/// rate 1 along `q`; a block landing on an occupied site merges into the
/// block already there.
pub fn simulate_coalescing<R: Rng + ?Sized>(
    kernel: &VotingKernel,
    start_sites: &[usize],
    horizon: f64,
    rng: &mut R,
) -> Result<CoalescentRun> {
    if start_sites.is_empty() {
        return Err(Error::InvalidInput(
            "coalescing walks need at least one start site".into(),
        ));
    }
    if let Some(&bad) = start_sites.iter().find(|&&s| s >= kernel.len()) {
        return Err(Error::InvalidInput(format!(
            "start site {bad} outside the kernel"
        )));
    }
    if !(horizon >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "horizon must be nonnegative, got {horizon}"
        )));
    }
    let mut occupant = vec![EMPTY; kernel.len()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_sites: Vec<usize> = Vec::new();
    for (label, &site) in start_sites.iter().enumerate() {
        match occupant[site] {
            EMPTY => {
                occupant[site] = blocks.len();
                blocks.push(vec![label]);
                block_sites.push(site);
            }
            b => blocks[b].push(label),
        }
    }
    let initial_blocks = blocks.len();
    let mut coalescence_times = vec![None; initial_blocks.saturating_sub(1)];
    let mut merges = Vec::new();
    let mut t = 0.0;

    loop {
        let live = blocks.len();
        if live == 1 && horizon.is_infinite() {
            break;
        }
        let t_next = t + rng.sample::<f64, _>(Exp1) / live as f64;
        if t_next > horizon {
            t = horizon;
            break;
        }
        t = t_next;
        let b = rng.random_range(0..live);
        let from = block_sites[b];
        let to = kernel.row(from).sample(rng.random::<f64>());
        occupant[from] = EMPTY;
        match occupant[to] {
            EMPTY => {
                occupant[to] = b;
                block_sites[b] = to;
            }
            host => {
                let mut moved = std::mem::take(&mut blocks[b]);
                if blocks[host].len() < moved.len() {
                    std::mem::swap(&mut blocks[host], &mut moved);
                }
                blocks[host].extend(moved);
                // swap-remove b and repoint the block that took its slot
                blocks.swap_remove(b);
                block_sites.swap_remove(b);
                if b < blocks.len() {
                    occupant[block_sites[b]] = b;
                }
                let remaining = blocks.len();
                merges.push(Merge {
                    time: t,
                    site: to,
                    blocks_after: remaining,
                });
                if remaining >= 1 && remaining < initial_blocks {
                    let slot = &mut coalescence_times[remaining - 1];
                    if slot.is_none() {
                        *slot = Some(t);
                    }
                }
            }
        }
    }

    Ok(CoalescentRun {
        initial_blocks,
        merges,
        coalescence_times,
        final_state: CoalescentState {
            blocks,
            block_sites,
            time: t,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{build_complete, build_cycle};
    use crate::rng::seeded;

    #[test]
    fn single_particle_is_coalesced() {
        let k = build_cycle(5).unwrap();
        let run = simulate_coalescing(&k, &[2], f64::INFINITY, &mut seeded(1)).unwrap();
        assert_eq!(run.c(1), Some(0.0));
        assert!(run.merges.is_empty());
    }

    #[test]
    fn duplicates_merge_at_time_zero() {
        let k = build_cycle(5).unwrap();
        let run = simulate_coalescing(&k, &[1, 1, 3], 0.0, &mut seeded(1)).unwrap();
        assert_eq!(run.initial_blocks, 2);
        assert_eq!(run.final_state.site_of(0), 1);
        assert_eq!(run.final_state.site_of(1), 1);
        assert_eq!(run.final_state.site_of(2), 3);
    }

    #[test]
    fn empty_start_is_an_error() {
        let k = build_cycle(5).unwrap();
        assert!(simulate_coalescing(&k, &[], 1.0, &mut seeded(1)).is_err());
    }

    #[test]
    fn full_start_preserves_labels_and_monotone_counts() {
        let k = build_complete(30).unwrap();
        let start: Vec<usize> = (0..30).collect();
        let run = simulate_coalescing(&k, &start, f64::INFINITY, &mut seeded(9)).unwrap();
        assert_eq!(run.final_state.len(), 1);
        let mut labels = run.final_state.blocks[0].clone();
        labels.sort_unstable();
        assert_eq!(labels, start);
        assert!(run
            .merges
            .windows(2)
            .all(|w| w[0].time <= w[1].time && w[0].blocks_after > w[1].blocks_after));
        let cs: Vec<f64> = (1..30).map(|k| run.c(k).unwrap()).collect();
        assert!(cs.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn blocks_never_share_a_site() {
        let k = build_cycle(12).unwrap();
        let start: Vec<usize> = (0..12).step_by(2).collect();
        for seed in 0..20 {
            let run = simulate_coalescing(&k, &start, 3.0, &mut seeded(seed)).unwrap();
            let mut sites = run.final_state.block_sites.clone();
            sites.sort_unstable();
            sites.dedup();
            assert_eq!(sites.len(), run.final_state.len());
            assert_eq!(run.blocks_at(3.0), run.final_state.len());
        }
    }
}
