use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;

use super::{VotingKernel, WeightedEdge};
use crate::rng::seeded;
use crate::{Error, Result};

/// Restart budget for the pairing model.
pub const RANDOM_REGULAR_RESTARTS: usize = 10_000;

/// Complete graph `K_n`: `q(x,y) = 1/(n-1)` off the diagonal.
pub fn build_complete(n: usize) -> Result<VotingKernel> {
    if n < 2 {
        return Err(Error::InvalidSize { n, min: 2 });
    }
    let p = 1.0 / (n - 1) as f64;
    let mut q = vec![p; n * n];
    for x in 0..n {
        q[x * n + x] = 0.0;
    }
    VotingKernel::with_stationary(n, q, vec![1.0 / n as f64; n])
}

/// Cycle `C_n`: `q(x, x +- 1 mod n) = 1/2`.
pub fn build_cycle(n: usize) -> Result<VotingKernel> {
    if n < 3 {
        return Err(Error::InvalidSize { n, min: 3 });
    }
    let mut q = vec![0.0; n * n];
    for x in 0..n {
        q[x * n + (x + 1) % n] += 0.5;
        q[x * n + (x + n - 1) % n] += 0.5;
    }
    VotingKernel::with_stationary(n, q, vec![1.0 / n as f64; n])
}

/// The Petersen graph (10 vertices, 3-regular, girth 5).
pub fn build_petersen() -> Result<VotingKernel> {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push(WeightedEdge::unit(i, (i + 1) % 5));
        edges.push(WeightedEdge::unit(i, i + 5));
        edges.push(WeightedEdge::unit(5 + i, 5 + (i + 2) % 5));
    }
    from_weighted_graph(10, &edges)
}

/// Uniform-ish random simple `k`-regular graph from the pairing model.
///
/// Stubs are shuffled and paired consecutively; any pairing with a
/// self-loop or repeated edge is discarded and the whole pairing is
/// redrawn. Disconnected samples are discarded the same way. The result is
/// a deterministic function of `(n, k, seed)`.
pub fn build_random_regular(n: usize, k: usize, seed: u64) -> Result<VotingKernel> {
    if k < 1 || k >= n || (n * k) % 2 == 1 {
        return Err(Error::InvalidParameters(format!(
            "random regular graph needs 1 <= k < n and n*k even (n = {n}, k = {k})"
        )));
    }
    let mut rng = seeded(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|x| std::iter::repeat_n(x, k)).collect();
    'restart: for _ in 0..RANDOM_REGULAR_RESTARTS {
        stubs.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'restart;
            }
        }
        let edges: Vec<WeightedEdge> = seen
            .iter()
            .map(|&(a, b)| WeightedEdge::unit(a, b))
            .collect();
        match from_weighted_graph(n, &edges) {
            Ok(kernel) => return Ok(kernel),
            Err(Error::Irreducibility { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailure {
        restarts: RANDOM_REGULAR_RESTARTS,
    })
}

/// Random walk on an undirected weighted graph: `q(x,y) = w(x,y)/deg(x)`
/// and `pi(x) = deg(x) / sum deg`.
///
/// Each edge is undirected. An edge may be listed in both orientations as
/// long as the weights agree.
pub fn from_weighted_graph(n: usize, edges: &[WeightedEdge]) -> Result<VotingKernel> {
    if n < 2 {
        return Err(Error::InvalidSize { n, min: 2 });
    }
    let mut weights: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for e in edges {
        if e.x >= n || e.y >= n {
            return Err(Error::InvalidInput(format!(
                "edge ({}, {}) references a site outside 0..{n}",
                e.x, e.y
            )));
        }
        if e.x == e.y {
            return Err(Error::ZeroTrace {
                site: e.x,
                value: e.weight,
            });
        }
        if !(e.weight.is_finite() && e.weight > 0.0) {
            return Err(Error::InvalidInput(format!(
                "edge ({}, {}) has non-positive weight {}",
                e.x, e.y, e.weight
            )));
        }
        let key = (e.x.min(e.y), e.x.max(e.y));
        match weights.get(&key) {
            Some(&w) if w != e.weight => {
                return Err(Error::InvalidInput(format!(
                    "edge ({}, {}) listed with conflicting weights {w} and {}",
                    key.0, key.1, e.weight
                )))
            }
            Some(_) => {}
            None => {
                weights.insert(key, e.weight);
            }
        }
    }
    let mut deg = vec![0.0; n];
    for (&(a, b), &w) in &weights {
        deg[a] += w;
        deg[b] += w;
    }
    if let Some(site) = deg.iter().position(|&d| d == 0.0) {
        return Err(Error::Irreducibility { site });
    }
    let mut q = vec![0.0; n * n];
    for (&(a, b), &w) in &weights {
        q[a * n + b] = w / deg[a];
        q[b * n + a] = w / deg[b];
    }
    // exact renormalisation keeps row sums within rounding of 1
    for x in 0..n {
        let s: f64 = q[x * n..(x + 1) * n].iter().sum();
        q[x * n..(x + 1) * n].iter_mut().for_each(|v| *v /= s);
    }
    let total: f64 = deg.iter().sum();
    let pi = deg.iter().map(|d| d / total).collect();
    VotingKernel::with_stationary(n, q, pi)
}
