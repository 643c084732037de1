//! Boundary and expansion measurements.
//!
//! Exact quantities are computed where the instance is small enough
//! ([`exact`]); on large components they are bracketed by spectral lower
//! bounds and sampled or sweep-cut upper bounds ([`spectral`],
//! [`sampling`]). A sampled minimum is only ever reported as an upper bound
//! on the true minimum.

pub mod exact;
pub mod paths;
pub mod sampling;
pub mod spectral;

pub use exact::{cheeger_exact, min_vertex_expansion_exact, ExactCut, EXACT_CAP};
pub use paths::{disjoint_paths_maxflow, disjoint_short_paths_greedy, PathFamily};
pub use sampling::{
    connected_excess_sample, degree_census, direction_split, expansion_profile, greedy_matching_experiment,
    DirectionSplit, ExcessSample, ProfilePoint,
};
pub use spectral::{spectral_summary, SpectralOptions, SpectralSummary};

use crate::analytic::harper_bound;
use crate::graph::Graph;
use crate::hypercube::VertexId;
use crate::{Error, Result};

/// Boundary statistics of a vertex set `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutStats {
    pub set_size: usize,
    /// `e(S, S^c)`.
    pub edge_boundary: usize,
    /// `|N(S)|`, the external vertex neighbourhood.
    pub vertex_boundary: usize,
    /// `d_G(S)`, the sum of degrees over `S`.
    pub total_degree: usize,
    /// `e(S)`, edges with both ends in `S`.
    pub inner_edges: usize,
    /// `Φ(S) = e(S, S^c) / (2 d_G(S))`; 0 when `d_G(S) = 0`.
    pub bottleneck: f64,
}

pub(crate) fn membership<G: Graph>(g: &G, s: &[usize]) -> Result<Vec<bool>> {
    let mut inside = vec![false; g.order()];
    for &v in s {
        if v >= g.order() {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        inside[v] = true;
    }
    Ok(inside)
}

pub fn cut_stats<G: Graph>(g: &G, s: &[usize]) -> Result<CutStats> {
    let inside = membership(g, s)?;
    let set_size = inside.iter().filter(|&&b| b).count();
    if set_size == 0 || set_size == g.order() {
        return Err(Error::InvalidArgument("S must be a nonempty proper subset".into()));
    }
    let mut edge_boundary = 0;
    let mut total_degree = 0;
    let mut inner_twice = 0;
    let mut outside = vec![false; g.order()];
    let mut vertex_boundary = 0;
    for v in (0..g.order()).filter(|&v| inside[v]) {
        total_degree += g.degree(v);
        for u in g.neighbors(v) {
            if inside[u] {
                inner_twice += 1;
            } else {
                edge_boundary += 1;
                if !outside[u] {
                    outside[u] = true;
                    vertex_boundary += 1;
                }
            }
        }
    }
    let bottleneck = if total_degree == 0 {
        0.0
    } else {
        edge_boundary as f64 / (2.0 * total_degree as f64)
    };
    Ok(CutStats {
        set_size,
        edge_boundary,
        vertex_boundary,
        total_degree,
        inner_edges: inner_twice / 2,
        bottleneck,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarperCheck {
    pub bound: f64,
    pub actual: u64,
    pub ok: bool,
}

/// Exact edge boundary of `S` in the full cube `Q^d` against the
/// isoperimetric bound `|S| (d - log2 |S|)`.
pub fn verify_harper(d: u32, s: &[VertexId]) -> Result<HarperCheck> {
    let mut inside = vec![false; 1usize << d];
    let mut size = 0u64;
    for v in s {
        if v.0 >> d != 0 {
            return Err(Error::InvalidArgument(format!("{v:?} not in Q^{d}")));
        }
        if !inside[v.0 as usize] {
            inside[v.0 as usize] = true;
            size += 1;
        }
    }
    let bound = harper_bound(size, d)?;
    let mut actual = 0u64;
    for v in (0..inside.len()).filter(|&v| inside[v]) {
        actual += (0..d).filter(|&i| !inside[v ^ (1 << i)]).count() as u64;
    }
    // Bound and count are both integers for subcubes; allow float rounding.
    Ok(HarperCheck {
        bound,
        actual,
        ok: actual as f64 >= bound - 1e-9 * bound.max(1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::LocalGraph;
    use crate::hypercube::{generate, GenerationParams, HypercubeSubgraph};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn subcube(k: u32) -> Vec<usize> {
        (0..1usize << k).collect()
    }

    #[test]
    fn subcube_boundaries() {
        let d = 7;
        let g = HypercubeSubgraph::full(d).unwrap();
        for k in 0..d {
            let s = subcube(k);
            let c = cut_stats(&g, &s).unwrap();
            let expected = (1usize << k) * (d - k) as usize;
            assert_eq!(c.edge_boundary, expected);
            assert_eq!(c.vertex_boundary, expected);
            assert!((c.bottleneck - (d - k) as f64 / (2.0 * d as f64)).abs() < 1e-15);
        }
        let single = cut_stats(&g, &[5]).unwrap();
        assert_eq!((single.edge_boundary, single.vertex_boundary), (7, 7));
        assert_eq!(single.bottleneck, 0.5);
        assert!(cut_stats(&g, &[]).is_err());
        assert!(cut_stats(&g, &(0..128).collect::<Vec<_>>()).is_err());
    }

    #[test]
    fn cut_stats_match_naive_recount() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for trial in 0..200 {
            let d = rng.gen_range(2..=4);
            let g = generate(&GenerationParams::new(d, rng.gen(), trial)).unwrap();
            let n = 1usize << d;
            let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
            if s.is_empty() || s.len() == n {
                continue;
            }
            let c = cut_stats(&g, &s).unwrap();
            let mut e_out = 0;
            let mut e_in = 0;
            let mut nb = std::collections::BTreeSet::new();
            for &u in &s {
                for v in 0..n {
                    if g.has_edge(u, v) {
                        if s.contains(&v) {
                            e_in += 1;
                        } else {
                            e_out += 1;
                            nb.insert(v);
                        }
                    }
                }
            }
            assert_eq!(c.edge_boundary, e_out);
            assert_eq!(c.inner_edges * 2, e_in);
            assert_eq!(c.vertex_boundary, nb.len());
        }
    }

    #[test]
    fn harper_subcubes_and_singletons() {
        let d = 10;
        for k in 0..d {
            let s: Vec<VertexId> = (0..1u32 << k).map(|v| VertexId(v << (d - k))).collect();
            let h = verify_harper(d, &s).unwrap();
            assert_eq!(h.actual as f64, h.bound);
            assert!(h.ok);
        }
        let h = verify_harper(d, &[VertexId(77)]).unwrap();
        assert_eq!((h.bound, h.actual), (10.0, 10));
        let too_big: Vec<VertexId> = (0..513).map(VertexId).collect();
        assert!(verify_harper(d, &too_big).is_err());
    }

    proptest! {
        #[test]
        fn cut_identities(seed in any::<u64>(), p in 0.0f64..=1.0, mask in any::<u64>()) {
            let g = generate(&GenerationParams::new(6, p, seed)).unwrap();
            let s: Vec<usize> = (0..64).filter(|&v| mask >> v & 1 == 1).collect();
            prop_assume!(!s.is_empty() && s.len() < 64);
            let c = cut_stats(&g, &s).unwrap();
            prop_assert_eq!(c.edge_boundary + 2 * c.inner_edges, c.total_degree);
            prop_assert!(c.vertex_boundary <= c.edge_boundary);
            prop_assert!(c.edge_boundary <= 6 * c.set_size);
            prop_assert!((0.0..=0.5).contains(&c.bottleneck));
        }

        #[test]
        fn harper_never_violated(mask in any::<u64>()) {
            let s: Vec<VertexId> = (0..64u32).filter(|&v| mask >> v & 1 == 1).map(VertexId).collect();
            prop_assume!(!s.is_empty() && s.len() <= 32);
            prop_assert!(verify_harper(6, &s).unwrap().ok);
        }
    }

    #[test]
    fn local_graph_cut() {
        let g = LocalGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let c = cut_stats(&g, &[0, 1]).unwrap();
        assert_eq!((c.edge_boundary, c.total_degree), (2, 4));
        assert_eq!(c.bottleneck, 0.25);
    }
}
