//! Bit-packed random subgraphs of the hypercube `Q^d`.
//!
//! Vertex `v` is a `d`-bit integer; the edge in direction `i` joins `v` and
//! `v ^ (1 << i)`. A subgraph stores one `d`-bit mask per vertex, bit `i` of
//! `open[v]` being set iff that edge is retained. Masks are kept symmetric.
//!
//! Canonical edge index (used for sampling and replay): the `n/2` edges of
//! direction `i` occupy the block `[i * n/2, (i + 1) * n/2)` and inside the
//! block are ordered by their lower endpoint with bit `i` squeezed out, see
//! [`EdgeId::index`].

use rand::{Rng as _, RngCore};

use crate::seed;
use crate::{Error, Result};

pub const MIN_DIMENSION: u32 = 2;
pub const MAX_DIMENSION: u32 = 30;

/// Below this probability edges are sampled by geometric gap skipping.
const SPARSE_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    pub fn flip(self, dir: u32) -> VertexId {
        VertexId(self.0 ^ (1 << dir))
    }

    /// Adjacent in the host cube iff the Hamming distance is exactly one.
    pub fn is_cube_neighbor(self, other: VertexId) -> bool {
        (self.0 ^ other.0).count_ones() == 1
    }
}

/// An edge of `Q^d` in canonical form: bit `dir` of `endpoint` is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    pub endpoint: VertexId,
    pub dir: u32,
}

impl EdgeId {
    /// Canonical edge joining two cube neighbours.
    pub fn between(u: VertexId, v: VertexId) -> Option<EdgeId> {
        let x = u.0 ^ v.0;
        if x.count_ones() != 1 {
            return None;
        }
        Some(EdgeId {
            endpoint: VertexId(u.0 & v.0),
            dir: x.trailing_zeros(),
        })
    }

    pub fn other(self) -> VertexId {
        self.endpoint.flip(self.dir)
    }

    /// Dense index in `[0, d * 2^(d-1))`.
    pub fn index(self, d: u32) -> u64 {
        let low = self.endpoint.0 & ((1u32 << self.dir) - 1);
        let high = self.endpoint.0 >> (self.dir + 1);
        ((self.dir as u64) << (d - 1)) | ((high as u64) << self.dir) | low as u64
    }

    pub fn from_index(index: u64, d: u32) -> EdgeId {
        let dir = (index >> (d - 1)) as u32;
        let c = (index & ((1u64 << (d - 1)) - 1)) as u32;
        EdgeId {
            endpoint: VertexId(expand(c, dir)),
            dir,
        }
    }
}

#[inline]
fn expand(compressed: u32, dir: u32) -> u32 {
    ((compressed >> dir) << (dir + 1)) | (compressed & ((1u32 << dir) - 1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationParams {
    pub d: u32,
    pub p: f64,
    pub sprinkle_q2: Option<f64>,
    pub seed: u64,
}

impl GenerationParams {
    pub fn new(d: u32, p: f64, seed: u64) -> Self {
        GenerationParams {
            d,
            p,
            sprinkle_q2: None,
            seed,
        }
    }

    pub fn with_sprinkle(mut self, q2: f64) -> Self {
        self.sprinkle_q2 = Some(q2);
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_dimension(self.d)?;
        check_probability("p", self.p)?;
        if let Some(q2) = self.sprinkle_q2 {
            check_probability("q2", q2)?;
            if q2 > self.p {
                return Err(Error::InvalidProbability {
                    name: "q2",
                    value: q2,
                });
            }
        }
        Ok(())
    }
}

fn check_dimension(d: u32) -> Result<()> {
    if (MIN_DIMENSION..=MAX_DIMENSION).contains(&d) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(d))
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { name, value })
    }
}

/// A spanning subgraph of `Q^d`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypercubeSubgraph {
    d: u32,
    open: Vec<u32>,
    seed: u64,
}

impl HypercubeSubgraph {
    pub fn empty(d: u32) -> Result<Self> {
        check_dimension(d)?;
        Ok(HypercubeSubgraph {
            d,
            open: vec![0; 1usize << d],
            seed: 0,
        })
    }

    pub fn full(d: u32) -> Result<Self> {
        check_dimension(d)?;
        let all = (1u32 << d) - 1;
        Ok(HypercubeSubgraph {
            d,
            open: vec![all; 1usize << d],
            seed: 0,
        })
    }

    /// Wraps raw masks, rejecting asymmetric or out-of-range input.
    pub fn from_masks(d: u32, masks: Vec<u32>, seed: u64) -> Result<Self> {
        check_dimension(d)?;
        if masks.len() != 1usize << d {
            return Err(Error::InvalidArgument(format!(
                "expected {} masks, got {}",
                1usize << d,
                masks.len()
            )));
        }
        let g = HypercubeSubgraph {
            d,
            open: masks,
            seed,
        };
        if let Some(v) = g.open.iter().position(|&m| m >> d != 0) {
            return Err(Error::InvalidArgument(format!("mask of vertex {v} has bits above d")));
        }
        if !g.is_symmetric() {
            return Err(Error::InvalidArgument("masks are not symmetric".into()));
        }
        Ok(g)
    }

    /// Subgraph with exactly the listed edges open.
    pub fn from_edges(d: u32, edges: &[EdgeId]) -> Result<Self> {
        let mut g = Self::empty(d)?;
        for &e in edges {
            if e.dir >= d || e.endpoint.0 >> d != 0 || e.endpoint.0 & (1 << e.dir) != 0 {
                return Err(Error::InvalidArgument(format!("{e:?} is not a canonical edge of Q^{d}")));
            }
            g.open_edge(e);
        }
        Ok(g)
    }

    fn open_edge(&mut self, e: EdgeId) {
        let bit = 1u32 << e.dir;
        self.open[e.endpoint.0 as usize] |= bit;
        self.open[(e.endpoint.0 ^ bit) as usize] |= bit;
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn vertex_count(&self) -> usize {
        self.open.len()
    }

    pub fn masks(&self) -> &[u32] {
        &self.open
    }

    /// Seed the graph was sampled with (0 for hand-built graphs).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn is_open(&self, e: EdgeId) -> bool {
        self.open[e.endpoint.0 as usize] & (1 << e.dir) != 0
    }

    /// Open neighbours of `v` in ascending direction order.
    pub fn open_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        let mask = self.open[v.0 as usize];
        (0..self.d)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| v.flip(i))
            .collect()
    }

    pub fn vertex_degree(&self, v: VertexId) -> u32 {
        self.open[v.0 as usize].count_ones()
    }

    pub fn edge_count(&self) -> u64 {
        self.open.iter().map(|m| m.count_ones() as u64).sum::<u64>() / 2
    }

    /// Open edges in canonical index order.
    pub fn open_edges(&self) -> Vec<EdgeId> {
        let mut edges = Vec::new();
        for dir in 0..self.d {
            for c in 0..(1u32 << (self.d - 1)) {
                let e = EdgeId {
                    endpoint: VertexId(expand(c, dir)),
                    dir,
                };
                if self.is_open(e) {
                    edges.push(e);
                }
            }
        }
        edges
    }

    /// Full scan of the mask symmetry invariant.
    pub fn is_symmetric(&self) -> bool {
        self.open.iter().enumerate().all(|(v, &m)| {
            let mut rest = m;
            while rest != 0 {
                let i = rest.trailing_zeros();
                rest &= rest - 1;
                if self.open[v ^ (1 << i)] & (1 << i) == 0 {
                    return false;
                }
            }
            true
        })
    }

    pub fn union(&self, other: &HypercubeSubgraph) -> Result<HypercubeSubgraph> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        Ok(HypercubeSubgraph {
            d: self.d,
            open: self.open.iter().zip(&other.open).map(|(a, b)| a | b).collect(),
            seed: self.seed,
        })
    }

    /// First edge open here but closed in `other`, if any.
    pub fn first_edge_missing_from(&self, other: &HypercubeSubgraph) -> Result<Option<EdgeId>> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch(self.d, other.d));
        }
        Ok(self
            .open
            .iter()
            .zip(&other.open)
            .enumerate()
            .find(|(_, (a, b))| *a & !*b != 0)
            .map(|(v, (a, b))| {
                let dir = (a & !b).trailing_zeros();
                EdgeId {
                    endpoint: VertexId(v as u32 & !(1 << dir)),
                    dir,
                }
            }))
    }

    pub fn is_subgraph_of(&self, other: &HypercubeSubgraph) -> Result<bool> {
        Ok(self.first_edge_missing_from(other)?.is_none())
    }
}

/// Samples `Q^d_p`: each canonical edge is open independently with
/// probability `p`. Deterministic in `params.seed`.
pub fn generate(params: &GenerationParams) -> Result<HypercubeSubgraph> {
    params.validate()?;
    sample(params.d, params.p, params.seed)
}

fn sample(d: u32, p: f64, seed: u64) -> Result<HypercubeSubgraph> {
    check_dimension(d)?;
    check_probability("p", p)?;
    if p == 1.0 {
        let mut g = HypercubeSubgraph::full(d)?;
        g.seed = seed;
        return Ok(g);
    }
    let mut g = HypercubeSubgraph::empty(d)?;
    g.seed = seed;
    if p == 0.0 {
        return Ok(g);
    }
    let mut rng = seed::rng(seed);
    let total = (d as u64) << (d - 1);
    if p < SPARSE_THRESHOLD {
        // Number of closed edges before the next open one is Geometric(p).
        let log_q = (-p).ln_1p();
        let mut pos = 0u64;
        loop {
            let u = 1.0 - rng.gen::<f64>();
            let skip = (u.ln() / log_q).floor();
            if skip >= (total - pos) as f64 {
                break;
            }
            pos += skip as u64;
            g.open_edge(EdgeId::from_index(pos, d));
            pos += 1;
            if pos >= total {
                break;
            }
        }
    } else {
        let threshold = (p * 18_446_744_073_709_551_616.0) as u64;
        for index in 0..total {
            if rng.next_u64() < threshold {
                g.open_edge(EdgeId::from_index(index, d));
            }
        }
    }
    Ok(g)
}

/// First-round probability `q1` with `(1 - q1)(1 - q2) = 1 - p`.
pub fn sprinkle_split(p: f64, q2: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("q2", q2)?;
    if q2 > p {
        return Err(Error::InvalidProbability {
            name: "q2",
            value: q2,
        });
    }
    if p == 1.0 {
        return if q2 == 1.0 {
            Ok(0.0)
        } else {
            Err(Error::InvalidProbability { name: "p", value: p })
        };
    }
    Ok(((p - q2) / (1.0 - q2)).clamp(0.0, 1.0))
}

/// The two rounds of a sprinkled sample, kept separate.
#[derive(Debug, Clone)]
pub struct SprinkledSample {
    /// First round, sampled at `q1`.
    pub first: HypercubeSubgraph,
    /// Independent sprinkle round at `q2`.
    pub sprinkle: HypercubeSubgraph,
    /// `first ∪ sprinkle`, distributed as `Q^d_p`.
    pub union: HypercubeSubgraph,
    pub q1: f64,
    pub q2: f64,
}

pub fn generate_sprinkle_rounds(params: &GenerationParams) -> Result<SprinkledSample> {
    params.validate()?;
    let q2 = params
        .sprinkle_q2
        .ok_or_else(|| Error::InvalidArgument("sprinkle_q2 not set".into()))?;
    let q1 = sprinkle_split(params.p, q2)?;
    let first = sample(params.d, q1, seed::substream(params.seed, 1))?;
    let sprinkle = sample(params.d, q2, seed::substream(params.seed, 2))?;
    let mut union = first.union(&sprinkle)?;
    union.seed = params.seed;
    Ok(SprinkledSample {
        first,
        sprinkle,
        union,
        q1,
        q2,
    })
}

/// Returns `(Q1, Q2)` with `Q1 ⊆ Q2` and `Q2 ~ Q^d_p`.
pub fn generate_sprinkled(params: &GenerationParams) -> Result<(HypercubeSubgraph, HypercubeSubgraph)> {
    let s = generate_sprinkle_rounds(params)?;
    Ok((s.first, s.union))
}

pub fn union_graphs(g1: &HypercubeSubgraph, g2: &HypercubeSubgraph) -> Result<HypercubeSubgraph> {
    g1.union(g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn extremes() {
        let g = generate(&GenerationParams::new(6, 0.0, 1)).unwrap();
        assert!(g.masks().iter().all(|&m| m == 0));
        let g = generate(&GenerationParams::new(6, 1.0, 1)).unwrap();
        assert!((0..64).all(|v| g.vertex_degree(VertexId(v)) == 6));
        assert_eq!(g.edge_count(), 64 * 6 / 2);
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(
            generate(&GenerationParams::new(31, 0.5, 0)),
            Err(Error::DimensionOutOfRange(31))
        );
        assert!(generate(&GenerationParams::new(1, 0.5, 0)).is_err());
        assert!(generate(&GenerationParams::new(5, 1.5, 0)).is_err());
        assert!(generate(&GenerationParams::new(5, -0.1, 0)).is_err());
    }

    #[test]
    fn neighbors_of_full_q3() {
        let g = HypercubeSubgraph::full(3).unwrap();
        assert_eq!(
            g.open_neighbors(VertexId(0)),
            vec![VertexId(0b001), VertexId(0b010), VertexId(0b100)]
        );
        let e = HypercubeSubgraph::empty(3).unwrap();
        assert!(e.open_neighbors(VertexId(5)).is_empty());
    }

    #[test]
    fn neighbors_from_crafted_masks() {
        // Square 00-01-11-10 inside Q^2 with the 10-11 edge removed.
        let masks = vec![0b11, 0b11, 0b10, 0b10];
        let g = HypercubeSubgraph::from_masks(2, masks, 0).unwrap();
        assert_eq!(g.open_neighbors(VertexId(0)), vec![VertexId(1), VertexId(2)]);
        assert_eq!(g.open_neighbors(VertexId(1)), vec![VertexId(0), VertexId(3)]);
        assert_eq!(g.open_neighbors(VertexId(2)), vec![VertexId(0)]);
        assert_eq!(g.open_neighbors(VertexId(3)), vec![VertexId(1)]);
        assert!(HypercubeSubgraph::from_masks(2, vec![0b01, 0, 0, 0], 0).is_err());
    }

    #[test]
    fn union_count_degree() {
        let g = generate(&GenerationParams::new(8, 0.3, 5)).unwrap();
        let empty = HypercubeSubgraph::empty(8).unwrap();
        assert_eq!(union_graphs(&g, &empty).unwrap().masks(), g.masks());
        let full = HypercubeSubgraph::full(8).unwrap();
        assert_eq!(full.edge_count(), 256 * 8 / 2);
        assert!(union_graphs(&g, &HypercubeSubgraph::empty(7).unwrap()).is_err());
    }

    #[test]
    fn sprinkle_split_examples() {
        assert!((sprinkle_split(0.5, 0.1).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(sprinkle_split(0.3, 0.0).unwrap(), 0.3);
        assert_eq!(sprinkle_split(0.3, 0.3).unwrap(), 0.0);
        assert!(sprinkle_split(0.2, 0.3).is_err());
        assert!(sprinkle_split(1.0, 0.5).is_err());
        assert_eq!(sprinkle_split(1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sprinkled_extremes() {
        let (q1, q2) = generate_sprinkled(&GenerationParams::new(8, 0.25, 3).with_sprinkle(0.0)).unwrap();
        assert_eq!(q1.masks(), q2.masks());
        let (_, q2) = generate_sprinkled(&GenerationParams::new(6, 1.0, 3).with_sprinkle(1.0)).unwrap();
        assert_eq!(q2, {
            let mut f = HypercubeSubgraph::full(6).unwrap();
            f.seed = 3;
            f
        });
    }

    #[test]
    fn determinism_and_sparse_path() {
        for &p in &[0.01, 0.05, 0.3] {
            let a = generate(&GenerationParams::new(12, p, 99)).unwrap();
            let b = generate(&GenerationParams::new(12, p, 99)).unwrap();
            assert_eq!(a, b);
            assert!(a.is_symmetric());
            let c = generate(&GenerationParams::new(12, p, 100)).unwrap();
            assert_ne!(a, c);
        }
    }

    proptest! {
        #[test]
        fn canonical_index_roundtrip(d in 2u32..=20, raw in any::<u64>()) {
            let total = (d as u64) << (d - 1);
            let index = raw % total;
            let e = EdgeId::from_index(index, d);
            prop_assert_eq!(e.endpoint.0 & (1 << e.dir), 0);
            prop_assert!(e.endpoint.0 >> d == 0);
            prop_assert_eq!(e.index(d), index);
            prop_assert_eq!(EdgeId::between(e.endpoint, e.other()), Some(e));
        }

        #[test]
        fn sprinkle_identity(p in 0.0f64..0.999, frac in 0.0f64..=1.0) {
            let q2 = p * frac;
            let q1 = sprinkle_split(p, q2).unwrap();
            prop_assert!(((1.0 - q1) * (1.0 - q2) - (1.0 - p)).abs() < 1e-12);
        }

        #[test]
        fn generated_graphs_are_symmetric(d in 2u32..=10, p in 0.0f64..=1.0, seed in any::<u64>()) {
            let g = generate(&GenerationParams::new(d, p, seed)).unwrap();
            prop_assert!(g.is_symmetric());
            let (q1, q2) = generate_sprinkled(&GenerationParams::new(d, p, seed).with_sprinkle(p / 3.0)).unwrap();
            prop_assert!(q1.is_subgraph_of(&q2).unwrap());
            prop_assert!(q2.is_symmetric());
        }
    }
}
