//! Lazy random walks on a component: exact evolution of `P^t(v, ·)`, mixing
//! times, and a sampled estimator for components too large to evolve.
//!
//! The walk stays put with probability 1/2 and otherwise moves to a uniform
//! open neighbour. Its stationary law is `π(v) = deg(v) / 2|E|`.

use rand::Rng;
use rayon::prelude::*;

use crate::expansion::{spectral_summary, SpectralOptions};
use crate::graph::{bfs_distances, Graph, LocalGraph};
use crate::seed;
use crate::{Error, Result};

/// Largest component accepted by [`mixing_time_exact`].
pub const EXACT_MIXING_CAP: usize = 1 << 12;
/// Above this order only heuristic starts are evolved.
pub const ALL_STARTS_LIMIT: usize = 1 << 9;
const HEURISTIC_RANDOM_STARTS: usize = 8;

/// A probability vector over the vertices of a component.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionVector {
    /// Labels of the component's vertices, in local order.
    pub support: Vec<u32>,
    pub mass: Vec<f64>,
}

impl DistributionVector {
    pub fn point(g: &LocalGraph, v: usize) -> Self {
        let mut mass = vec![0.0; g.order()];
        mass[v] = 1.0;
        DistributionVector {
            support: g.labels().to_vec(),
            mass,
        }
    }

    pub fn total(&self) -> f64 {
        kahan_sum(self.mass.iter().copied())
    }
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in values {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

fn check_support(g: &LocalGraph, dist: &DistributionVector) -> Result<()> {
    if dist.support != g.labels() || dist.mass.len() != g.order() {
        return Err(Error::InvalidArgument("distribution not supported on this component".into()));
    }
    Ok(())
}

fn step_into(g: &LocalGraph, from: &[f64], to: &mut [f64]) {
    for v in 0..from.len() {
        let mut acc = 0.0;
        for u in g.neighbors(v) {
            acc += from[u] / g.degree(u) as f64;
        }
        to[v] = 0.5 * from[v] + 0.5 * acc;
    }
}

/// One step of the lazy walk: `dist · P`.
pub fn lazy_step(g: &LocalGraph, dist: &DistributionVector) -> Result<DistributionVector> {
    check_support(g, dist)?;
    if let Some(v) = (0..g.order()).find(|&v| dist.mass[v] > 0.0 && g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let mut mass = vec![0.0; g.order()];
    step_into(g, &dist.mass, &mut mass);
    Ok(DistributionVector {
        support: dist.support.clone(),
        mass,
    })
}

pub fn stationary(g: &LocalGraph) -> Result<DistributionVector> {
    let total = 2 * g.edge_count();
    if total == 0 {
        return Err(Error::InvalidArgument("component has no edges".into()));
    }
    Ok(DistributionVector {
        support: g.labels().to_vec(),
        mass: (0..g.order()).map(|v| g.degree(v) as f64 / total as f64).collect(),
    })
}

/// `½ Σ |d1 − d2|`.
pub fn tv_distance(d1: &DistributionVector, d2: &DistributionVector) -> Result<f64> {
    if d1.support != d2.support || d1.mass.len() != d2.mass.len() {
        return Err(Error::InvalidArgument("distributions have different supports".into()));
    }
    Ok(tv_raw(&d1.mass, &d2.mass))
}

fn tv_raw(a: &[f64], b: &[f64]) -> f64 {
    0.5 * kahan_sum(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
}

/// Smallest stationary mass, `min deg / 2|E|`.
pub fn pi_min_exact(g: &LocalGraph) -> Result<f64> {
    let pi = stationary(g)?;
    Ok(pi.mass.iter().copied().fold(f64::INFINITY, f64::min))
}

/// The simplification `π_min ≥ 1/(2n)`, valid when `|E| ≤ n`.
pub fn pi_min_simplified(n: usize) -> f64 {
    1.0 / (2.0 * n as f64)
}

/// `(2/Φ²) ln(4/π_min)`.
pub fn mixing_bound_cheeger(phi: f64, pi_min: f64) -> Result<f64> {
    if !(phi > 0.0 && phi <= 0.5) {
        return Err(Error::InvalidArgument(format!("bottleneck ratio {phi} outside (0, 1/2]")));
    }
    if !(pi_min > 0.0 && pi_min <= 1.0) {
        return Err(Error::InvalidArgument(format!("π_min {pi_min} outside (0, 1]")));
    }
    Ok(2.0 / (phi * phi) * (4.0 / pi_min).ln())
}

/// Relaxation-time bounds `(t_rel − 1) ln(1/2ε) ≤ t_mix(ε) ≤ t_rel ln(1/(ε π_min))`
/// with `t_rel = 1/gap`.
pub fn spectral_mixing_bounds(gap: f64, pi_min: f64, eps: f64) -> Result<(f64, f64)> {
    if !(gap > 0.0 && gap <= 1.0) || !(pi_min > 0.0) || !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidArgument("need gap ∈ (0,1], π_min > 0, ε ∈ (0,1/2)".into()));
    }
    let t_rel = 1.0 / gap;
    Ok((
        (t_rel - 1.0) * (1.0 / (2.0 * eps)).ln(),
        t_rel * (1.0 / (eps * pi_min)).ln(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingMethod {
    /// Every start vertex evolved exactly.
    Exact,
    /// Exact evolution from heuristic worst starts only: a lower bound.
    ExactHeuristicStarts,
    SpectralBound,
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    /// `None` when the walk did not mix within the horizon.
    pub t_mix: Option<u64>,
    /// `d(t)` for `t = 0, 1, …`.
    pub tv_curve: Vec<f64>,
    pub method: MixingMethod,
    /// Labels of the start vertices used.
    pub starts: Vec<u32>,
}

/// Endpoints of a double BFS sweep from local vertex 0.
fn sweep_endpoints(g: &LocalGraph) -> (usize, usize) {
    let far = |s: usize| {
        bfs_distances(g, s)
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|d| (d, std::cmp::Reverse(v))))
            .max()
            .map(|(_, std::cmp::Reverse(v))| v)
            .unwrap_or(s)
    };
    let a = far(0);
    (a, far(a))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactMixingOptions {
    pub eps: f64,
    /// Stop after this many steps per start.
    pub horizon: u64,
    /// Seed for the random starts used above [`ALL_STARTS_LIMIT`].
    pub seed: u64,
}

impl Default for ExactMixingOptions {
    fn default() -> Self {
        ExactMixingOptions {
            eps: 0.25,
            horizon: 1_000_000,
            seed: 0,
        }
    }
}

/// `t_mix(ε) = min { t : max_v ‖P^t(v,·) − π‖_TV ≤ ε }`.
///
/// Each start is evolved until its own distance drops to `ε`; distances are
/// non-increasing in `t`, so the reported curve is exact before `t_mix` and
/// an upper bound not exceeding `ε` at `t_mix`.
pub fn mixing_time_exact(g: &LocalGraph, opts: &ExactMixingOptions) -> Result<MixingReport> {
    let n = g.order();
    if n > EXACT_MIXING_CAP {
        return Err(Error::CapExceeded {
            what: "exact mixing",
            size: n,
            cap: EXACT_MIXING_CAP,
        });
    }
    if !(opts.eps > 0.0) {
        return Err(Error::InvalidArgument("ε must be positive".into()));
    }
    let pi = stationary(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (starts, method) = if n <= ALL_STARTS_LIMIT {
        ((0..n).collect::<Vec<_>>(), MixingMethod::Exact)
    } else {
        let (a, b) = sweep_endpoints(g);
        let mut rng = seed::rng(opts.seed);
        let mut s = vec![a, b];
        s.extend((0..HEURISTIC_RANDOM_STARTS).map(|_| rng.gen_range(0..n)));
        s.sort_unstable();
        s.dedup();
        (s, MixingMethod::ExactHeuristicStarts)
    };
    let curves: Vec<Vec<f64>> = starts
        .par_iter()
        .map(|&v| {
            let mut cur = vec![0.0; n];
            let mut next = vec![0.0; n];
            cur[v] = 1.0;
            let mut curve = vec![tv_raw(&cur, &pi.mass)];
            while *curve.last().unwrap() > opts.eps && (curve.len() as u64) <= opts.horizon {
                step_into(g, &cur, &mut next);
                std::mem::swap(&mut cur, &mut next);
                curve.push(tv_raw(&cur, &pi.mass));
            }
            curve
        })
        .collect();
    let len = curves.iter().map(Vec::len).max().unwrap_or(1);
    let tv_curve: Vec<f64> = (0..len)
        .map(|t| {
            curves
                .iter()
                .map(|c| c[t.min(c.len() - 1)])
                .fold(0.0, f64::max)
        })
        .collect();
    let last = *tv_curve.last().unwrap();
    Ok(MixingReport {
        t_mix: (last <= opts.eps).then_some(len as u64 - 1),
        tv_curve,
        method,
        starts: starts.iter().map(|&v| g.label(v)).collect(),
    })
}

/// Sampled mixing estimate from two projections of the walk.
///
/// Independent lazy walks run from two starts: the vertex of least Hamming
/// weight (smallest label on ties) and the vertex where the second
/// eigenfunction `f` of the walk has the largest magnitude. At each step two
/// distances lower-bound the true one up to sampling noise: the distance
/// between the empirical and stationary Hamming-weight laws, and
/// `|E_t f − E_π f| / (max f − min f)`. The first catches drift across
/// layers of the cube, the second the slowest mode of the component.
/// Each start's estimate is the first `t` where the larger of the two falls
/// below `1/4` minus a noise allowance; the report keeps the later start.
pub fn sampled_mixing(g: &LocalGraph, d: u32, walkers: usize, horizon: u64, seed: u64) -> Result<MixingReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let f = if g.order() >= 2 {
        spectral_summary(g, &SpectralOptions::default())?.eigenfunction
    } else {
        vec![0.0; g.order()]
    };
    let light = (0..g.order()).min_by_key(|&v| (g.label(v).count_ones(), g.label(v))).unwrap_or(0);
    let extreme = (0..g.order()).fold(0, |best, v| if f[v].abs() > f[best].abs() { v } else { best });
    let first = sampled_mixing_from(g, d, light, Some(&f), walkers, horizon, seed)?;
    if extreme == light {
        return Ok(first);
    }
    let second = sampled_mixing_from(g, d, extreme, Some(&f), walkers, horizon, seed::substream(seed, u64::MAX))?;
    let later = match (first.t_mix, second.t_mix) {
        (Some(a), Some(b)) if a >= b => first.clone(),
        (None, _) => first.clone(),
        _ => second.clone(),
    };
    Ok(MixingReport {
        starts: vec![g.label(light), g.label(extreme)],
        ..later
    })
}

/// Sampled estimate from one start. `test_fn`, when given, adds the
/// projection onto that function to the Hamming-weight projection.
pub fn sampled_mixing_from(
    g: &LocalGraph,
    d: u32,
    start: usize,
    test_fn: Option<&[f64]>,
    walkers: usize,
    horizon: u64,
    seed: u64,
) -> Result<MixingReport> {
    let n = g.order();
    if walkers == 0 {
        return Err(Error::InvalidArgument("need at least one walker".into()));
    }
    if start >= n {
        return Err(Error::InvalidArgument(format!("start {start} out of range")));
    }
    let pi = stationary(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let classes = d as usize + 1;
    let weight: Vec<usize> = g.labels().iter().map(|l| l.count_ones() as usize).collect();
    if weight.iter().any(|&w| w >= classes) {
        return Err(Error::InvalidArgument(format!("labels exceed dimension {d}")));
    }
    let mut target = vec![0.0; classes];
    for v in 0..n {
        target[weight[v]] += pi.mass[v];
    }
    let f = match test_fn {
        Some(f) if f.len() != n => return Err(Error::InvalidArgument("test function length differs from order".into())),
        Some(f) => f.to_vec(),
        None => vec![0.0; n],
    };
    let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
    let range = hi - lo;
    // Fixed-point values make the per-step sums independent of reduction order.
    let scale = if range > 0.0 { (1u64 << 40) as f64 / range } else { 0.0 };
    let fixed: Vec<i64> = f.iter().map(|&x| ((x - lo) * scale).round() as i64).collect();
    let f_mean = kahan_sum((0..n).map(|v| pi.mass[v] * fixed[v] as f64)) / (1u64 << 40) as f64;
    let f_sd = kahan_sum((0..n).map(|v| pi.mass[v] * (fixed[v] as f64 / (1u64 << 40) as f64 - f_mean).powi(2))).sqrt();
    let steps = horizon as usize;
    let width = (steps + 1) * classes;
    let (histogram, sums) = (0..walkers as u64)
        .into_par_iter()
        .fold(
            || (vec![0u32; width], vec![0i64; steps + 1]),
            |(mut counts, mut sums), w| {
                let mut rng = seed::rng(seed::substream(seed, w));
                let mut v = start;
                counts[weight[v]] += 1;
                sums[0] += fixed[v];
                for t in 1..=steps {
                    if rng.gen::<bool>() {
                        let adj = g.adjacency(v);
                        v = adj[rng.gen_range(0..adj.len())] as usize;
                    }
                    counts[t * classes + weight[v]] += 1;
                    sums[t] += fixed[v];
                }
                (counts, sums)
            },
        )
        .reduce(
            || (vec![0u32; width], vec![0i64; steps + 1]),
            |(mut a, mut s), (b, r)| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                s.iter_mut().zip(r).for_each(|(x, y)| *x += y);
                (a, s)
            },
        );
    let noise = (0.5 * (classes as f64 / walkers as f64).sqrt()).max(2.0 * f_sd / (walkers as f64).sqrt());
    let threshold = 0.25 - noise;
    let mut tv_curve = Vec::with_capacity(steps + 1);
    let mut t_mix = None;
    for t in 0..=steps {
        let row = &histogram[t * classes..(t + 1) * classes];
        let layers = 0.5 * kahan_sum(row.iter().zip(&target).map(|(&c, &p)| (c as f64 / walkers as f64 - p).abs()));
        let mode = (sums[t] as f64 / walkers as f64 / (1u64 << 40) as f64 - f_mean).abs();
        let tv = layers.max(mode);
        tv_curve.push(tv);
        if tv <= threshold {
            t_mix = Some(t as u64);
            break;
        }
    }
    Ok(MixingReport {
        t_mix,
        tv_curve,
        method: MixingMethod::Sampled,
        starts: vec![g.label(start)],
    })
}
