use std::collections::VecDeque;

use rand::Rng;
use rayon::prelude::*;

use crate::graph::{Graph, LocalGraph};
use crate::seed;
use crate::{Error, Result};

const SEEDS_PER_TARGET: u64 = 4;
const MAX_ORDER: usize = 64;

/// Branch sets of a complete minor, as local vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MinorCertificate {
    pub branch_sets: Vec<Vec<usize>>,
}

impl MinorCertificate {
    pub fn order(&self) -> usize {
        self.branch_sets.len()
    }

    pub fn validate(&self, g: &LocalGraph) -> std::result::Result<(), String> {
        let n = g.order();
        let mut owner = vec![usize::MAX; n];
        for (i, set) in self.branch_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(format!("branch set {i} is empty"));
            }
            for &v in set {
                if v >= n || owner[v] != usize::MAX {
                    return Err(format!("vertex {v} out of range or shared"));
                }
                owner[v] = i;
            }
            if !g.subgraph(set).is_connected() {
                return Err(format!("branch set {i} is not connected"));
            }
        }
        let t = self.order();
        let mut adjacent = vec![false; t * t];
        for (u, v) in g.edges() {
            let (a, b) = (owner[u], owner[v]);
            if a != usize::MAX && b != usize::MAX && a != b {
                adjacent[a * t + b] = true;
                adjacent[b * t + a] = true;
            }
        }
        for a in 0..t {
            for b in a + 1..t {
                if !adjacent[a * t + b] {
                    return Err(format!("branch sets {a} and {b} are not adjacent"));
                }
            }
        }
        Ok(())
    }
}

/// Hadwiger lower bound `boundary / (C √N)`.
pub fn minor_bound_from_separator(n: f64, boundary: f64, c: f64) -> Result<f64> {
    if !(n > 0.0 && boundary > 0.0 && c > 0.0) {
        return Err(Error::InvalidArgument("separator bound needs positive inputs".into()));
    }
    Ok(boundary / (c * n.sqrt()))
}

fn bfs_from(g: &LocalGraph, sources: &[usize], dist: &mut [u32]) {
    dist.iter_mut().for_each(|d| *d = u32::MAX);
    let mut queue = VecDeque::new();
    for &s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for u in g.neighbors(v) {
            if dist[u] == u32::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
}

/// Farthest-point landmarks: a random first vertex, then repeatedly the
/// vertex farthest from all chosen ones (smallest index on ties).
fn landmarks<R: Rng>(g: &LocalGraph, t: usize, rng: &mut R) -> Vec<usize> {
    let n = g.order();
    let mut chosen = vec![rng.gen_range(0..n)];
    let mut dist = vec![0u32; n];
    while chosen.len() < t {
        bfs_from(g, &chosen, &mut dist);
        let next = (0..n).max_by_key(|&v| (dist[v], std::cmp::Reverse(v))).unwrap();
        if dist[next] == 0 {
            break;
        }
        chosen.push(next);
    }
    chosen
}

/// Shortest path from branch set `i` through unowned vertices to a vertex
/// adjacent to branch set `j`; returns its interior (possibly empty).
fn connect(g: &LocalGraph, owner: &[usize], sets: &[Vec<usize>], i: usize, j: usize) -> Option<Vec<usize>> {
    let n = g.order();
    let mut pred = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &s in &sets[i] {
        pred[s] = s;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        let touches_j = g.neighbors(v).any(|u| owner[u] == j);
        if touches_j {
            let mut interior = Vec::new();
            let mut x = v;
            while owner[x] != i {
                interior.push(x);
                x = pred[x];
            }
            interior.reverse();
            return Some(interior);
        }
        for u in g.neighbors(v) {
            if pred[u] == usize::MAX && owner[u] == usize::MAX {
                pred[u] = v;
                queue.push_back(u);
            }
        }
    }
    None
}

fn max_clique(adj: &[u64]) -> u64 {
    fn expand(adj: &[u64], r: u64, mut p: u64, mut x: u64, best: &mut u64) {
        if p == 0 && x == 0 {
            if r.count_ones() > best.count_ones() || (r.count_ones() == best.count_ones() && r < *best) {
                *best = r;
            }
            return;
        }
        if r.count_ones() + p.count_ones() <= best.count_ones() {
            return;
        }
        let pivot = (p | x).trailing_zeros() as usize;
        let mut candidates = p & !adj[pivot];
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            expand(adj, r | 1 << v, p & adj[v], x & adj[v], best);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let t = adj.len();
    let all = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
    let mut best = 0;
    expand(adj, 0, all, 0, &mut best);
    best
}

fn attempt(g: &LocalGraph, t: usize, seed: u64) -> MinorCertificate {
    let mut rng = seed::rng(seed);
    let n = g.order();
    let marks = landmarks(g, t, &mut rng);
    let t = marks.len();
    let mut owner = vec![usize::MAX; n];
    let mut sets: Vec<Vec<usize>> = marks.iter().map(|&v| vec![v]).collect();
    for (i, &v) in marks.iter().enumerate() {
        owner[v] = i;
    }
    let adjacent = |owner: &[usize], sets: &[Vec<usize>], i: usize, j: usize| {
        sets[i].iter().any(|&v| g.neighbors(v).any(|u| owner[u] == j))
    };
    for i in 0..t {
        for j in i + 1..t {
            if adjacent(&owner, &sets, i, j) {
                continue;
            }
            if let Some(interior) = connect(g, &owner, &sets, i, j) {
                // The first half joins set i, the rest joins set j.
                let half = interior.len().div_ceil(2);
                for (k, &v) in interior.iter().enumerate() {
                    let side = if k < half { i } else { j };
                    owner[v] = side;
                    sets[side].push(v);
                }
            }
        }
    }
    let mut adj = vec![0u64; t];
    for (u, v) in g.edges() {
        let (a, b) = (owner[u], owner[v]);
        if a != usize::MAX && b != usize::MAX && a != b {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    let clique = max_clique(&adj);
    let mut branch_sets: Vec<Vec<usize>> = (0..t)
        .filter(|&i| clique >> i & 1 == 1)
        .map(|i| {
            let mut s = sets[i].clone();
            s.sort_unstable();
            s
        })
        .collect();
    branch_sets.sort();
    MinorCertificate { branch_sets }
}

/// Largest certified complete minor found by landmark-seeded branch sets
/// joined pairwise along shortest free paths, over several targets and
/// seeds. Target orders are capped at 64.
pub fn greedy_minor(g: &LocalGraph, target_t: usize, seed: u64) -> Result<MinorCertificate> {
    if g.order() == 0 {
        return Ok(MinorCertificate::default());
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let top = target_t.clamp(1, MAX_ORDER).min(g.order());
    let mut targets = vec![top, (3 * top / 4).max(1), (top / 2).max(1)];
    targets.dedup();
    let jobs: Vec<(usize, u64)> = targets
        .iter()
        .flat_map(|&t| (0..SEEDS_PER_TARGET).map(move |s| (t, s)))
        .collect();
    let best = jobs
        .par_iter()
        .map(|&(t, s)| attempt(g, t, seed::substream(seed, (t as u64) << 8 | s)))
        .filter(|c| c.validate(g).is_ok())
        .max_by(|a, b| a.order().cmp(&b.order()).then_with(|| b.branch_sets.cmp(&a.branch_sets)))
        .unwrap_or_default();
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::census;
    use crate::hypercube::{generate, GenerationParams};

    #[test]
    fn k2_and_four_cycle() {
        let k2 = LocalGraph::from_edges(2, &[(0, 1)]);
        assert_eq!(greedy_minor(&k2, 2, 0).unwrap().order(), 2);
        let c4 = LocalGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let m = greedy_minor(&c4, 3, 0).unwrap();
        m.validate(&c4).unwrap();
        assert_eq!(m.order(), 3);
        // K4 is not a minor of a cycle.
        assert!(greedy_minor(&c4, 4, 0).unwrap().order() <= 3);
    }

    #[test]
    fn complete_graph_is_its_own_minor() {
        let n = 7;
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let k = LocalGraph::from_edges(n, &edges);
        assert_eq!(greedy_minor(&k, 7, 1).unwrap().order(), 7);
    }

    #[test]
    fn clique_search_matches_brute_force() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let t = rng.gen_range(1..=10);
            let mut adj = vec![0u64; t];
            for a in 0..t {
                for b in a + 1..t {
                    if rng.gen_bool(0.6) {
                        adj[a] |= 1 << b;
                        adj[b] |= 1 << a;
                    }
                }
            }
            let brute = (0u64..1 << t)
                .filter(|&s| (0..t).all(|a| s >> a & 1 == 0 || s & !(1 << a) & !adj[a] == 0))
                .map(|s| s.count_ones())
                .max()
                .unwrap();
            assert_eq!(max_clique(&adj).count_ones(), brute);
        }
    }

    #[test]
    fn giants_give_valid_minors() {
        for seed in 0..4 {
            let q = generate(&GenerationParams::new(10, 0.2, seed)).unwrap();
            let g = census(&q).giant_graph(&q);
            let m = greedy_minor(&g, 12, seed).unwrap();
            m.validate(&g).unwrap();
            assert!(m.order() >= 4, "order {}", m.order());
        }
    }

    #[test]
    fn validate_rejects_bad_families() {
        let p = LocalGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let split = MinorCertificate {
            branch_sets: vec![vec![0, 2], vec![1]],
        };
        assert!(split.validate(&p).is_err());
        let far = MinorCertificate {
            branch_sets: vec![vec![0], vec![3]],
        };
        assert!(far.validate(&p).is_err());
    }

    #[test]
    fn separator_bound_examples() {
        assert_eq!(minor_bound_from_separator(100.0, 30.0, 3.0).unwrap(), 1.0);
        assert_eq!(minor_bound_from_separator(1e4, 1e3, 1.0).unwrap(), 10.0);
        assert!(minor_bound_from_separator(0.0, 1.0, 1.0).is_err());
    }
}
