//! Vertex-disjoint path packings between two vertex sets.

use std::collections::VecDeque;

use crate::graph::Graph;
use crate::{Error, Result};

/// Vertex-disjoint paths, each running from a vertex of `A` to a vertex of
/// `B` with no other vertex in `A ∪ B`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathFamily {
    pub paths: Vec<Vec<usize>>,
    /// Length bound (in edges) the family was built under, if any.
    pub max_len: Option<usize>,
}

impl PathFamily {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Checks edges, endpoints, disjointness and the length bound.
    pub fn validate<G: Graph>(&self, g: &G, a: &[usize], b: &[usize]) -> std::result::Result<(), String> {
        let n = g.order();
        let (in_a, in_b) = sides(n, a, b).map_err(|e| e.to_string())?;
        let mut used = vec![false; n];
        for (i, p) in self.paths.iter().enumerate() {
            let (&first, &last) = match (p.first(), p.last()) {
                (Some(f), Some(l)) => (f, l),
                _ => return Err(format!("path {i} is empty")),
            };
            if !in_a[first] || !in_b[last] {
                return Err(format!("path {i} does not run from A to B"));
            }
            if p[1..p.len() - 1].iter().any(|&v| in_a[v] || in_b[v]) {
                return Err(format!("path {i} has an interior vertex in A ∪ B"));
            }
            if let Some(l) = self.max_len {
                if p.len() - 1 > l {
                    return Err(format!("path {i} has {} edges, bound {l}", p.len() - 1));
                }
            }
            for w in p.windows(2) {
                if !g.has_edge(w[0], w[1]) {
                    return Err(format!("path {i} uses missing edge {}-{}", w[0], w[1]));
                }
            }
            for &v in p {
                if std::mem::replace(&mut used[v], true) {
                    return Err(format!("vertex {v} used twice"));
                }
            }
        }
        Ok(())
    }
}

fn sides(n: usize, a: &[usize], b: &[usize]) -> Result<(Vec<bool>, Vec<bool>)> {
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    for &v in a {
        if v >= n {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        in_a[v] = true;
    }
    for &v in b {
        if v >= n {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        if in_a[v] {
            return Err(Error::InvalidArgument("A and B must be disjoint".into()));
        }
        in_b[v] = true;
    }
    Ok((in_a, in_b))
}

struct Dinic {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u32>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

const NIL: usize = usize::MAX;

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic {
            head: vec![NIL; nodes],
            next: Vec::new(),
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: u32) {
        for (x, y, c) in [(u, v, c), (v, u, 0)] {
            self.to.push(y);
            self.cap.push(c);
            self.next.push(self.head[x]);
            self.head[x] = self.to.len() - 1;
        }
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let mut e = self.head[u];
            while e != NIL {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] == u32::MAX {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
                e = self.next[e];
            }
        }
        self.level[t] != u32::MAX
    }

    /// Blocking-flow augmentation along a single unit path, iteratively.
    fn augment(&mut self, s: usize, t: usize) -> bool {
        let mut stack: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                for &e in &stack {
                    self.cap[e] -= 1;
                    self.cap[e ^ 1] += 1;
                }
                return true;
            }
            let mut advanced = false;
            while self.iter[u] != NIL {
                let e = self.iter[u];
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                    stack.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                self.iter[u] = self.next[e];
            }
            if !advanced {
                // Dead end: retreat and retire the edge that led here.
                self.level[u] = u32::MAX;
                match stack.pop() {
                    None => return false,
                    Some(e) => {
                        u = self.to[e ^ 1];
                        self.iter[u] = self.next[e];
                    }
                }
            }
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.clone_from(&self.head);
            while self.augment(s, t) {
                flow += 1;
            }
        }
        flow
    }
}

/// Maximum number of vertex-disjoint `A–B` paths (Menger), with the paths.
///
/// Vertices are split into `in → out` arcs of capacity one.
pub fn disjoint_paths_maxflow<G: Graph>(g: &G, a: &[usize], b: &[usize]) -> Result<PathFamily> {
    let n = g.order();
    let (in_a, in_b) = sides(n, a, b)?;
    let (s, t) = (2 * n, 2 * n + 1);
    let mut net = Dinic::new(2 * n + 2);
    for v in 0..n {
        net.add(2 * v, 2 * v + 1, 1);
        for u in g.neighbors(v) {
            net.add(2 * v + 1, 2 * u, 1);
        }
        if in_a[v] {
            net.add(s, 2 * v, 1);
        }
        if in_b[v] {
            net.add(2 * v + 1, t, 1);
        }
    }
    net.max_flow(s, t);
    let mut paths = Vec::new();
    let mut e = net.head[s];
    while e != NIL {
        // Source arcs start with capacity one; a saturated one carries flow.
        if e % 2 == 0 && net.cap[e] == 0 {
            let mut path = vec![net.to[e] / 2];
            let mut node = net.to[e] + 1;
            loop {
                let mut f = net.head[node];
                let mut next = None;
                while f != NIL {
                    if f % 2 == 0 && net.cap[f] == 0 {
                        next = Some(net.to[f]);
                        break;
                    }
                    f = net.next[f];
                }
                let target = next.expect("flow is conserved");
                if target == t {
                    break;
                }
                path.push(target / 2);
                node = target + 1;
            }
            paths.push(trim(path, &in_a, &in_b));
        }
        e = net.next[e];
    }
    paths.sort();
    Ok(PathFamily { paths, max_len: None })
}

/// Shortens a path so that only its first vertex lies in `A` and only its
/// last lies in `B`.
fn trim(path: Vec<usize>, in_a: &[bool], in_b: &[bool]) -> Vec<usize> {
    let end = path.iter().position(|&v| in_b[v]).expect("path ends in B");
    let start = path[..=end].iter().rposition(|&v| in_a[v]).expect("path starts in A");
    path[start..=end].to_vec()
}

/// Greedily packs shortest `A–B` paths of at most `max_len` edges, removing
/// each path's vertices before searching for the next.
pub fn disjoint_short_paths_greedy<G: Graph>(g: &G, a: &[usize], b: &[usize], max_len: usize) -> Result<PathFamily> {
    let n = g.order();
    let (in_a, in_b) = sides(n, a, b)?;
    let mut alive = vec![true; n];
    let mut dist = vec![u32::MAX; n];
    let mut pred = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut sources: Vec<usize> = a.to_vec();
    sources.sort_unstable();
    sources.dedup();
    let mut paths = Vec::new();
    loop {
        for &v in &touched {
            dist[v] = u32::MAX;
        }
        touched.clear();
        let mut queue = VecDeque::new();
        for &v in sources.iter().filter(|&&v| alive[v]) {
            dist[v] = 0;
            pred[v] = usize::MAX;
            touched.push(v);
            queue.push_back(v);
        }
        let mut found = None;
        'bfs: while let Some(v) = queue.pop_front() {
            if dist[v] as usize >= max_len {
                continue;
            }
            for u in g.neighbors(v) {
                if alive[u] && dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    pred[u] = v;
                    touched.push(u);
                    if in_b[u] {
                        found = Some(u);
                        break 'bfs;
                    }
                    queue.push_back(u);
                }
            }
        }
        let Some(mut v) = found else { break };
        let mut path = vec![v];
        while !in_a[v] {
            v = pred[v];
            path.push(v);
        }
        path.reverse();
        for &v in &path {
            alive[v] = false;
        }
        paths.push(path);
    }
    Ok(PathFamily {
        paths,
        max_len: Some(max_len),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distances, LocalGraph};
    use crate::hypercube::{generate, GenerationParams};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    /// Menger oracle: the smallest vertex set whose removal separates A from B.
    fn min_separator(g: &LocalGraph, a: &[usize], b: &[usize]) -> usize {
        let n = g.order();
        let mut best = n;
        for removed in 0u32..(1 << n) {
            let k = removed.count_ones() as usize;
            if k >= best {
                continue;
            }
            let keep: Vec<usize> = (0..n).filter(|&v| removed >> v & 1 == 0).collect();
            let h = g.subgraph(&keep);
            let index = |v: usize| keep.iter().position(|&x| x == v);
            let separated = a.iter().filter_map(|&x| index(x)).all(|s| {
                let dist = bfs_distances(&h, s);
                b.iter().filter_map(|&y| index(y)).all(|t| dist[t].is_none())
            });
            if separated {
                best = k;
            }
        }
        best
    }

    fn random_instance(seed: u64) -> (LocalGraph, Vec<usize>, Vec<usize>) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(4..=11);
        let p = rng.gen_range(0.15..0.6);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = LocalGraph::from_edges(n, &edges);
        let mut a = Vec::new();
        let mut b = Vec::new();
        for v in 0..n {
            match rng.gen_range(0..4) {
                0 => a.push(v),
                1 => b.push(v),
                _ => {}
            }
        }
        (g, a, b)
    }

    #[test]
    fn maxflow_matches_menger_oracle() {
        for seed in 0..150 {
            let (g, a, b) = random_instance(seed);
            let family = disjoint_paths_maxflow(&g, &a, &b).unwrap();
            family.validate(&g, &a, &b).unwrap();
            assert_eq!(family.len(), min_separator(&g, &a, &b), "seed {seed}");
        }
    }

    #[test]
    fn greedy_is_valid_and_dominated_by_maxflow() {
        for seed in 0..150 {
            let (g, a, b) = random_instance(seed);
            for len in 1..=4 {
                let greedy = disjoint_short_paths_greedy(&g, &a, &b, len).unwrap();
                greedy.validate(&g, &a, &b).unwrap();
                assert!(greedy.len() <= disjoint_paths_maxflow(&g, &a, &b).unwrap().len());
            }
        }
    }

    #[test]
    fn grid_example() {
        // Two columns of a 3x3 grid: three disjoint straight paths.
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let v = 3 * r + c;
                if c < 2 {
                    edges.push((v, v + 1));
                }
                if r < 2 {
                    edges.push((v, v + 3));
                }
            }
        }
        let g = LocalGraph::from_edges(9, &edges);
        let family = disjoint_paths_maxflow(&g, &[0, 3, 6], &[2, 5, 8]).unwrap();
        assert_eq!(family.paths, vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]);
        let short = disjoint_short_paths_greedy(&g, &[0, 3, 6], &[2, 5, 8], 1).unwrap();
        assert!(short.is_empty());
    }

    #[test]
    fn small_examples() {
        let g = LocalGraph::from_edges(2, &[(0, 1)]);
        assert_eq!(disjoint_paths_maxflow(&g, &[0], &[1]).unwrap().paths, vec![vec![0, 1]]);
        assert_eq!(disjoint_short_paths_greedy(&g, &[0], &[1], 5).unwrap().paths, vec![vec![0, 1]]);
        let q3 = crate::hypercube::HypercubeSubgraph::full(3).unwrap();
        let family = disjoint_paths_maxflow(&q3, &[0], &[7]).unwrap();
        assert_eq!(family.len(), 1);
        let family = disjoint_paths_maxflow(&q3, &[1, 2, 4], &[3, 5, 6]).unwrap();
        assert_eq!(family.len(), 3);
        family.validate(&q3, &[1, 2, 4], &[3, 5, 6]).unwrap();
        let split = LocalGraph::from_edges(4, &[(0, 1), (2, 3)]);
        assert!(disjoint_paths_maxflow(&split, &[0], &[3]).unwrap().is_empty());
    }

    #[test]
    fn rejects_overlapping_sides() {
        let g = LocalGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(disjoint_paths_maxflow(&g, &[0, 1], &[1, 2]).is_err());
    }

    #[test]
    fn validate_catches_shared_vertices() {
        let g = LocalGraph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]);
        let bad = PathFamily {
            paths: vec![vec![0, 1, 2], vec![3, 1, 2]],
            max_len: None,
        };
        assert!(bad.validate(&g, &[0, 3], &[2]).is_err());
    }

    proptest! {
        #[test]
        fn hypercube_packings_are_valid(seed in any::<u64>(), mask in any::<u64>()) {
            let g = generate(&GenerationParams::new(6, 0.5, seed)).unwrap();
            let a: Vec<usize> = (0..64).filter(|&v| mask >> v & 3 == 1).collect();
            let b: Vec<usize> = (0..64).filter(|&v| mask >> v & 3 == 2).collect();
            let flow = disjoint_paths_maxflow(&g, &a, &b).unwrap();
            prop_assert!(flow.validate(&g, &a, &b).is_ok());
            let greedy = disjoint_short_paths_greedy(&g, &a, &b, 5).unwrap();
            prop_assert!(greedy.validate(&g, &a, &b).is_ok());
            prop_assert!(greedy.len() <= flow.len());
        }
    }
}
