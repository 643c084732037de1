//! Monte-Carlo probes: greedy matchings, degree census, sampled connected
//! sets and the coordinate-split certificate.
//!
//! Connected sets are grown by picking a uniformly random frontier vertex at
//! each step. The sampler is not uniform over connected sets, so its maxima
//! and minima are observations, never the true extremes.

use std::collections::HashSet;

use rand::Rng;

use crate::analytic::{binary_entropy, inverse_binary_entropy};
use crate::graph::{bfs_distances, Graph, LocalGraph};
use crate::hypercube::{EdgeId, VertexId};
use crate::seed;
use crate::{Error, Result};

/// Keeps each edge of `f` independently with probability `p` and returns the
/// size of the greedy maximal matching, scanning edges by canonical index.
pub fn greedy_matching_experiment(f: &[EdgeId], d: u32, p: f64, seed: u64) -> Result<usize> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability { name: "p", value: p });
    }
    let mut edges: Vec<(u64, EdgeId)> = f.iter().map(|&e| (e.index(d), e)).collect();
    edges.sort_unstable_by_key(|&(i, _)| i);
    edges.dedup_by_key(|&mut (i, _)| i);
    let mut rng = seed::rng(seed);
    let mut used = HashSet::new();
    let mut size = 0;
    for (_, e) in edges {
        if rng.gen::<f64>() >= p {
            continue;
        }
        let (u, v) = (e.endpoint.0, e.other().0);
        if !used.contains(&u) && !used.contains(&v) {
            used.insert(u);
            used.insert(v);
            size += 1;
        }
    }
    Ok(size)
}

/// Number of vertices of degree at least `threshold`.
pub fn degree_census<G: Graph>(g: &G, threshold: f64) -> usize {
    (0..g.order()).filter(|&v| g.degree(v) as f64 >= threshold).count()
}

/// The default degree threshold `ln d`.
pub fn default_degree_threshold(d: u32) -> f64 {
    (d as f64).ln()
}

/// Vertices lying in components of order at least `k`.
fn eligible_starts(g: &LocalGraph, k: usize) -> Vec<usize> {
    let mut comp = vec![usize::MAX; g.order()];
    let mut starts = Vec::new();
    for v in 0..g.order() {
        if comp[v] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = bfs_distances(g, v)
            .iter()
            .enumerate()
            .filter_map(|(u, dist)| dist.map(|_| u))
            .collect();
        for &u in &members {
            comp[u] = v;
        }
        if members.len() >= k {
            starts.extend(members);
        }
    }
    starts.sort_unstable();
    starts
}

/// Grows a connected set of `k` vertices from `start`. The caller guarantees
/// the component of `start` has at least `k` vertices.
fn grow<R: Rng>(g: &LocalGraph, start: usize, k: usize, rng: &mut R, mark: &mut [u8]) -> Vec<usize> {
    const INSIDE: u8 = 1;
    const FRONTIER: u8 = 2;
    let mut set = vec![start];
    mark[start] = INSIDE;
    let mut frontier = Vec::new();
    let push = |v: usize, mark: &mut [u8], frontier: &mut Vec<usize>| {
        for u in g.neighbors(v) {
            if mark[u] == 0 {
                mark[u] = FRONTIER;
                frontier.push(u);
            }
        }
    };
    push(start, mark, &mut frontier);
    while set.len() < k {
        let i = rng.gen_range(0..frontier.len());
        let v = frontier.swap_remove(i);
        mark[v] = INSIDE;
        set.push(v);
        push(v, mark, &mut frontier);
    }
    for &v in set.iter().chain(&frontier) {
        mark[v] = 0;
    }
    set
}

fn sampler_setup(g: &LocalGraph, k: usize, samples: usize) -> Result<Vec<usize>> {
    if k == 0 || samples == 0 {
        return Err(Error::InvalidArgument("set size and sample count must be positive".into()));
    }
    if k > g.order() {
        return Err(Error::InvalidArgument(format!("size {k} exceeds component order {}", g.order())));
    }
    let starts = eligible_starts(g, k);
    if starts.is_empty() {
        return Err(Error::InvalidArgument(format!("no component of order ≥ {k}")));
    }
    Ok(starts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExcessSample {
    pub k: usize,
    pub samples: usize,
    /// Largest observed `e(S)/|S|`.
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub witness: Vec<usize>,
}

/// Samples connected `k`-sets and records the densest one seen.
pub fn connected_excess_sample(g: &LocalGraph, k: usize, samples: usize, seed: u64) -> Result<ExcessSample> {
    let starts = sampler_setup(g, k, samples)?;
    let mut rng = seed::rng(seed);
    let mut mark = vec![0u8; g.order()];
    let mut inside = vec![false; g.order()];
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut total = 0.0;
    for _ in 0..samples {
        let start = starts[rng.gen_range(0..starts.len())];
        let set = grow(g, start, k, &mut rng, &mut mark);
        set.iter().for_each(|&v| inside[v] = true);
        let twice: usize = set.iter().map(|&v| g.neighbors(v).filter(|&u| inside[u]).count()).sum();
        set.iter().for_each(|&v| inside[v] = false);
        let ratio = (twice / 2) as f64 / k as f64;
        total += ratio;
        if ratio > best.0 {
            best = (ratio, set);
        }
    }
    let mut witness = best.1;
    witness.sort_unstable();
    Ok(ExcessSample {
        k,
        samples,
        max_ratio: best.0,
        mean_ratio: total / samples as f64,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePoint {
    pub size: usize,
    pub samples: usize,
    /// Smallest observed `|N(S)|/|S|`; an upper bound on the true minimum.
    pub min_observed: f64,
    pub witness: Vec<usize>,
}

/// Sampled vertex-expansion profile over connected sets of each size.
pub fn expansion_profile(g: &LocalGraph, sizes: &[usize], samples: usize, seed: u64) -> Result<Vec<ProfilePoint>> {
    let mut rng = seed::rng(seed);
    let mut mark = vec![0u8; g.order()];
    let mut stamp = vec![0u32; g.order()];
    let mut epoch = 0u32;
    let mut out = Vec::with_capacity(sizes.len());
    for &k in sizes {
        let starts = sampler_setup(g, k, samples)?;
        let mut best = (f64::INFINITY, Vec::new());
        for _ in 0..samples {
            let start = starts[rng.gen_range(0..starts.len())];
            let set = grow(g, start, k, &mut rng, &mut mark);
            // Stamps: epoch marks S, epoch + 1 marks counted neighbours.
            epoch += 2;
            set.iter().for_each(|&v| stamp[v] = epoch);
            let mut boundary = 0usize;
            for &v in &set {
                for u in g.neighbors(v) {
                    if stamp[u] != epoch && stamp[u] != epoch + 1 {
                        stamp[u] = epoch + 1;
                        boundary += 1;
                    }
                }
            }
            let ratio = boundary as f64 / k as f64;
            if ratio < best.0 {
                best = (ratio, set);
            }
        }
        let mut witness = best.1;
        witness.sort_unstable();
        out.push(ProfilePoint {
            size: k,
            samples,
            min_observed: best.0,
            witness,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSplit {
    /// Coordinate maximizing `h(p_i)`; the smallest such index on ties.
    pub best: u32,
    /// Fraction of `W` with bit `i` set.
    pub p: Vec<f64>,
    /// `h⁻¹(log2|W| / d)`, the guaranteed minority fraction along `best`.
    pub beta: Option<f64>,
}

impl DirectionSplit {
    /// `min(p_best, 1 − p_best)`.
    pub fn minority(&self) -> f64 {
        let p = self.p[self.best as usize];
        p.min(1.0 - p)
    }
}

pub fn direction_split(w: &[VertexId], d: u32) -> Result<DirectionSplit> {
    if d == 0 || d > 31 {
        return Err(Error::DimensionOutOfRange(d));
    }
    let mut set: Vec<u32> = w.iter().map(|v| v.0).collect();
    set.sort_unstable();
    set.dedup();
    if set.is_empty() {
        return Err(Error::InvalidArgument("W must be nonempty".into()));
    }
    if set.iter().any(|&v| v >> d != 0) {
        return Err(Error::InvalidArgument(format!("W not contained in Q^{d}")));
    }
    let size = set.len() as f64;
    let p: Vec<f64> = (0..d)
        .map(|i| set.iter().filter(|&&v| v >> i & 1 == 1).count() as f64 / size)
        .collect();
    let mut best = 0;
    let mut best_h = -1.0;
    for (i, &pi) in p.iter().enumerate() {
        let h = binary_entropy(pi)?;
        if h > best_h {
            best = i as u32;
            best_h = h;
        }
    }
    let y = size.log2() / d as f64;
    let beta = if y <= d as f64 * best_h + 1e-12 {
        Some(inverse_binary_entropy(y.min(1.0))?)
    } else {
        None
    };
    Ok(DirectionSplit { best, p, beta })
}
