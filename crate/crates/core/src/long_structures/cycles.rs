use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::graph::{Graph, LocalGraph};
use crate::seed;
use crate::{Error, Result};

const RESTARTS: u64 = 16;

/// A cycle given as a vertex sequence; the closing edge is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycleCertificate {
    pub cycle: Vec<usize>,
}

impl CycleCertificate {
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn labels(&self, g: &LocalGraph) -> Vec<u32> {
        self.cycle.iter().map(|&v| g.label(v)).collect()
    }

    pub fn validate<G: Graph>(&self, g: &G) -> std::result::Result<(), String> {
        let c = &self.cycle;
        if c.is_empty() {
            return Ok(());
        }
        if c.len() < 3 {
            return Err(format!("a cycle needs 3 vertices, got {}", c.len()));
        }
        let mut seen = vec![false; g.order()];
        for &v in c {
            if v >= g.order() || std::mem::replace(&mut seen[v], true) {
                return Err(format!("vertex {v} repeated or out of range"));
            }
        }
        for i in 0..c.len() {
            let (u, v) = (c[i], c[(i + 1) % c.len()]);
            if !g.has_edge(u, v) {
                return Err(format!("missing edge {u}-{v}"));
            }
        }
        Ok(())
    }

    /// Rotates and orients the cycle so it starts at its smallest vertex and
    /// continues towards the smaller neighbour.
    fn canonical(mut self) -> Self {
        if let Some(i) = (0..self.cycle.len()).min_by_key(|&i| self.cycle[i]) {
            self.cycle.rotate_left(i);
            if self.cycle[self.cycle.len() - 1] < self.cycle[1] {
                self.cycle[1..].reverse();
            }
        }
        self
    }
}

/// Guaranteed circumference `t + 1` when every `W` with `k/2 ≤ |W| ≤ k`
/// has `|N(W)| ≥ t`.
pub fn cycle_bound_from_expansion(k: u64, t: u64) -> Result<u64> {
    if k < 1 || t < 2 {
        return Err(Error::InvalidArgument(format!("need k ≥ 1 and t ≥ 2, got k={k}, t={t}")));
    }
    Ok(t + 1)
}

struct Search<'a, R> {
    g: &'a LocalGraph,
    rng: R,
    path: Vec<usize>,
    /// Position of each vertex on the path, `usize::MAX` if absent.
    pos: Vec<usize>,
    best: Vec<usize>,
    budget: usize,
}

impl<R: Rng> Search<'_, R> {
    fn unvisited_degree(&self, v: usize) -> usize {
        self.g.neighbors(v).filter(|&u| self.pos[u] == usize::MAX).count()
    }

    /// Records the longest cycle closed by an edge from the head back into
    /// the path.
    fn record_closure(&mut self) {
        let head = *self.path.last().unwrap();
        let len = self.path.len();
        let earliest = self
            .g
            .neighbors(head)
            .map(|u| self.pos[u])
            .filter(|&j| j != usize::MAX && j + 2 < len)
            .min();
        if let Some(j) = earliest {
            if len - j > self.best.len() {
                self.best = self.path[j..].to_vec();
            }
        }
    }

    fn push(&mut self, v: usize) {
        self.pos[v] = self.path.len();
        self.path.push(v);
    }

    /// Warnsdorff-style extension: prefer the unvisited neighbour with the
    /// fewest unvisited neighbours, breaking ties at random.
    fn extend(&mut self) -> bool {
        let head = *self.path.last().unwrap();
        let mut options: Vec<(usize, usize)> = self
            .g
            .neighbors(head)
            .filter(|&u| self.pos[u] == usize::MAX)
            .map(|u| (self.unvisited_degree(u), u))
            .collect();
        if options.is_empty() {
            return false;
        }
        options.shuffle(&mut self.rng);
        let &(_, next) = options.iter().min_by_key(|o| o.0).unwrap();
        self.push(next);
        true
    }

    /// Pósa rotation: for a head adjacent to `path[j]`, reverse the segment
    /// after `j` so that `path[j+1]` becomes the head.
    fn rotate(&mut self) -> bool {
        let head = *self.path.last().unwrap();
        let len = self.path.len();
        let pivots: Vec<usize> = self
            .g
            .neighbors(head)
            .map(|u| self.pos[u])
            .filter(|&j| j != usize::MAX && j + 2 < len)
            .collect();
        let Some(&j) = pivots.choose(&mut self.rng) else {
            return false;
        };
        self.path[j + 1..].reverse();
        for (i, &v) in self.path.iter().enumerate().skip(j + 1) {
            self.pos[v] = i;
        }
        true
    }

    fn run(&mut self) {
        let n = self.g.order();
        while self.budget > 0 {
            for &v in &self.path {
                self.pos[v] = usize::MAX;
            }
            self.path.clear();
            let start = self.rng.gen_range(0..n);
            self.push(start);
            let mut rotations = 0;
            while self.budget > 0 {
                self.budget -= 1;
                self.record_closure();
                if self.extend() {
                    continue;
                }
                if rotations < 4 * n && self.rotate() {
                    rotations += 1;
                    continue;
                }
                // Try the other end before giving up on this path.
                if rotations < 4 * n {
                    self.path.reverse();
                    for (i, &v) in self.path.iter().enumerate() {
                        self.pos[v] = i;
                    }
                    rotations += 1;
                    self.record_closure();
                    if self.extend() {
                        continue;
                    }
                }
                break;
            }
            if self.best.len() == n {
                break;
            }
        }
    }
}

/// Longest cycle found by randomized path growth with rotations within a
/// budget of `budget` search steps spread over parallel restarts. The search
/// runs on the 2-core, which holds every cycle. Empty when the component is
/// a forest or nothing was found.
pub fn longest_cycle_heuristic(g: &LocalGraph, budget: usize, seed: u64) -> CycleCertificate {
    let core_vertices = two_core(g);
    if core_vertices.len() < 3 {
        return CycleCertificate::default();
    }
    let core = g.subgraph(&core_vertices);
    let share = (budget / RESTARTS as usize).max(1);
    let best = (0..RESTARTS)
        .into_par_iter()
        .map(|r| {
            let mut search = Search {
                g: &core,
                rng: seed::rng(seed::substream(seed, r)),
                path: Vec::new(),
                pos: vec![usize::MAX; core.order()],
                best: Vec::new(),
                budget: share,
            };
            search.run();
            let cycle = search.best.iter().map(|&v| core_vertices[v]).collect();
            CycleCertificate { cycle }.canonical()
        })
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cycle.cmp(&a.cycle)))
        .unwrap_or_default();
    debug_assert!(best.validate(g).is_ok());
    best
}

/// Vertices of the 2-core in ascending order.
fn two_core(g: &LocalGraph) -> Vec<usize> {
    let n = g.order();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] < 2).collect();
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut removed[v], true) {
            continue;
        }
        for u in g.neighbors(v) {
            if !removed[u] {
                degree[u] -= 1;
                if degree[u] == 1 {
                    stack.push(u);
                }
            }
        }
    }
    (0..n).filter(|&v| !removed[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::census;
    use crate::hypercube::{generate, GenerationParams, HypercubeSubgraph, VertexId};

    fn cube(d: u32) -> LocalGraph {
        let all: Vec<VertexId> = (0..1u32 << d).map(VertexId).collect();
        LocalGraph::induced(&HypercubeSubgraph::full(d).unwrap(), &all)
    }

    #[test]
    fn trees_have_no_cycle() {
        let edges: Vec<_> = (1..20).map(|v| (v, v / 2)).collect();
        let t = LocalGraph::from_edges(20, &edges);
        assert!(longest_cycle_heuristic(&t, 10_000, 1).is_empty());
    }

    #[test]
    fn four_cycle() {
        let g = LocalGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let c = longest_cycle_heuristic(&g, 1000, 0);
        assert_eq!(c.cycle, vec![0, 1, 2, 3]);
    }

    #[test]
    fn gray_code_witness_is_valid() {
        for d in 2..=6u32 {
            let gray: Vec<usize> = (0..1usize << d).map(|i| i ^ (i >> 1)).collect();
            let cert = CycleCertificate { cycle: gray };
            assert_eq!(cert.validate(&cube(d)), Ok(()));
        }
    }

    #[test]
    fn full_cubes_reach_half_length() {
        for d in 2..=6u32 {
            let g = cube(d);
            let c = longest_cycle_heuristic(&g, 200_000, d as u64);
            c.validate(&g).unwrap();
            assert!(c.len() >= 1 << (d - 1), "d={d}: {}", c.len());
        }
    }

    #[test]
    fn certificates_on_giants_are_valid_and_deterministic() {
        for seed in 0..5 {
            let q = generate(&GenerationParams::new(9, 0.25, seed)).unwrap();
            let g = census(&q).giant_graph(&q);
            let a = longest_cycle_heuristic(&g, 50_000, 3);
            a.validate(&g).unwrap();
            assert_eq!(a, longest_cycle_heuristic(&g, 50_000, 3));
        }
    }

    #[test]
    fn two_core_strips_pendant_trees() {
        // A triangle with a pendant path and a pendant star.
        let g = LocalGraph::from_edges(7, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (0, 5), (0, 6)]);
        assert_eq!(two_core(&g), vec![0, 1, 2]);
        let c = longest_cycle_heuristic(&g, 100, 0);
        assert_eq!(c.cycle, vec![0, 1, 2]);
        let path = LocalGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(two_core(&path).is_empty());
    }

    #[test]
    fn validate_rejects_chords_that_are_missing() {
        let g = LocalGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(CycleCertificate { cycle: vec![0, 1, 2, 3] }.validate(&g).is_err());
        assert!(CycleCertificate { cycle: vec![0, 1] }.validate(&g).is_err());
    }

    #[test]
    fn expansion_bound_formula() {
        assert_eq!(cycle_bound_from_expansion(4, 2).unwrap(), 3);
        assert_eq!(cycle_bound_from_expansion(10, 5).unwrap(), 6);
        assert!(cycle_bound_from_expansion(10, 1).is_err());
        assert!(cycle_bound_from_expansion(0, 3).is_err());
    }
}
