//! Exhaustive Cheeger constant and vertex expansion for small components.

use crate::graph::{Graph, LocalGraph};
use crate::{Error, Result};

/// Largest component order accepted by the exhaustive solvers.
pub const EXACT_CAP: usize = 22;

/// An optimal set together with the ratio it attains.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCut {
    pub value: f64,
    pub numerator: u64,
    pub denominator: u64,
    /// Local vertices of an optimal `S`.
    pub witness: Vec<usize>,
}

fn check_small(g: &LocalGraph) -> Result<Vec<u32>> {
    let n = g.order();
    if n > EXACT_CAP {
        return Err(Error::CapExceeded {
            what: "exact expansion",
            size: n,
            cap: EXACT_CAP,
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok((0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, u| m | (1 << u)))
        .collect())
}

fn witness(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `Φ* = min { e(S,S^c) / (2 d(S)) : π(S) ≤ 1/2 }` by enumerating every
/// subset in Gray-code order.
pub fn cheeger_exact(g: &LocalGraph) -> Result<ExactCut> {
    let adj = check_small(g)?;
    let n = g.order();
    let total = 2 * g.edge_count() as u64;
    let deg: Vec<u64> = adj.iter().map(|m| m.count_ones() as u64).collect();
    let mut set = 0u32;
    let mut cut = 0u64;
    let mut vol = 0u64;
    let mut best: Option<(u64, u64, u32)> = None;
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let shared = (adj[v] & set).count_ones() as u64;
        if set >> v & 1 == 0 {
            cut = cut + deg[v] - 2 * shared;
            vol += deg[v];
        } else {
            cut = cut + 2 * shared - deg[v];
            vol -= deg[v];
        }
        set ^= 1 << v;
        if vol == 0 || 2 * vol > total {
            continue;
        }
        let better = match best {
            None => true,
            Some((c, w, _)) => cut * 2 * w < c * 2 * vol,
        };
        if better {
            best = Some((cut, vol, set));
        }
    }
    let (c, w, s) = best.expect("a connected graph has a cut with π(S) ≤ 1/2");
    Ok(ExactCut {
        value: c as f64 / (2.0 * w as f64),
        numerator: c,
        denominator: 2 * w,
        witness: witness(s),
    })
}

/// `min { |N(S)| / |S| : 0 < |S| ≤ n/2 }`, with `N(S)` the external
/// neighbourhood.
pub fn min_vertex_expansion_exact(g: &LocalGraph) -> Result<ExactCut> {
    let adj = check_small(g)?;
    let n = g.order();
    let mut reach = vec![0u32; 1usize << n];
    let mut best: Option<(u64, u64, u32)> = None;
    for s in 1u32..(1u32 << n) {
        let low = s.trailing_zeros();
        let rest = s & (s - 1);
        reach[s as usize] = reach[rest as usize] | adj[low as usize];
        let size = s.count_ones() as u64;
        if 2 * size > n as u64 {
            continue;
        }
        let boundary = (reach[s as usize] & !s).count_ones() as u64;
        let better = match best {
            None => true,
            Some((b, k, _)) => boundary * k < b * size,
        };
        if better {
            best = Some((boundary, size, s));
        }
    }
    let (b, k, s) = best.expect("n ≥ 2 admits a singleton");
    Ok(ExactCut {
        value: b as f64 / k as f64,
        numerator: b,
        denominator: k,
        witness: witness(s),
    })
}
