//! A minimal read-only graph interface shared by the hypercube subgraph and
//! by extracted components.

use std::collections::VecDeque;

use crate::hypercube::{HypercubeSubgraph, VertexId};

/// Undirected simple graph on the vertex range `0..order()`.
pub trait Graph {
    fn order(&self) -> usize;
    fn degree(&self, v: usize) -> usize;
    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_;

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).any(|w| w == v)
    }

    fn edge_count(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).sum::<usize>() / 2
    }
}

/// Compressed adjacency for a small or extracted graph.
///
/// `labels[i]` is the original identifier of local vertex `i`: the hypercube
/// vertex id for extracted components and `i` itself for graphs built from
/// edge lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    labels: Vec<u32>,
}

impl LocalGraph {
    /// Builds a graph on `n` vertices; duplicate edges are merged and loops dropped.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u},{v}) out of range for n={n}");
            if u != v {
                lists[u].push(v as u32);
                lists[v].push(u as u32);
            }
        }
        Self::from_lists(lists, (0..n as u32).collect())
    }

    fn from_lists(mut lists: Vec<Vec<u32>>, labels: Vec<u32>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for l in lists.iter_mut() {
            l.sort_unstable();
            l.dedup();
            targets.extend_from_slice(l);
            offsets.push(targets.len());
        }
        LocalGraph {
            offsets,
            targets,
            labels,
        }
    }

    /// Subgraph of `g` induced on `vertices`. Local indices follow the
    /// ascending order of the vertex ids.
    pub fn induced(g: &HypercubeSubgraph, vertices: &[VertexId]) -> Self {
        let mut labels: Vec<u32> = vertices.iter().map(|v| v.0).collect();
        labels.sort_unstable();
        labels.dedup();
        let mut offsets = Vec::with_capacity(labels.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for &v in &labels {
            let row = targets.len();
            for u in g.open_neighbors(VertexId(v)) {
                if let Ok(j) = labels.binary_search(&u.0) {
                    targets.push(j as u32);
                }
            }
            targets[row..].sort_unstable();
            offsets.push(targets.len());
        }
        LocalGraph {
            offsets,
            targets,
            labels,
        }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    /// Local index of an original label, if present.
    pub fn local_index(&self, label: u32) -> Option<usize> {
        if self.labels.windows(2).all(|w| w[0] < w[1]) {
            self.labels.binary_search(&label).ok()
        } else {
            self.labels.iter().position(|&l| l == label)
        }
    }

    pub fn adjacency(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| {
            self.adjacency(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn is_connected(&self) -> bool {
        self.order() == 0 || bfs_distances(self, 0).iter().all(|d| d.is_some())
    }

    /// Subgraph induced on the given local vertices; labels are carried over.
    pub fn subgraph(&self, vertices: &[usize]) -> LocalGraph {
        let mut index = vec![u32::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i as u32;
        }
        let lists = vertices
            .iter()
            .map(|&v| {
                self.adjacency(v)
                    .iter()
                    .filter_map(|&u| (index[u as usize] != u32::MAX).then_some(index[u as usize]))
                    .collect()
            })
            .collect();
        let labels = vertices.iter().map(|&v| self.labels[v]).collect();
        Self::from_lists(lists, labels)
    }
}

impl Graph for LocalGraph {
    fn order(&self) -> usize {
        self.labels.len()
    }

    fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency(v).iter().map(|&u| u as usize)
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency(u).binary_search(&(v as u32)).is_ok()
    }

    fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }
}

impl Graph for HypercubeSubgraph {
    fn order(&self) -> usize {
        self.vertex_count()
    }

    fn degree(&self, v: usize) -> usize {
        self.masks()[v].count_ones() as usize
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mut mask = self.masks()[v];
        std::iter::from_fn(move || {
            if mask == 0 {
                return None;
            }
            let i = mask.trailing_zeros();
            mask &= mask - 1;
            Some(v ^ (1usize << i))
        })
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        let x = u ^ v;
        x.is_power_of_two() && self.masks()[u] & (x as u32) != 0
    }

    fn edge_count(&self) -> usize {
        HypercubeSubgraph::edge_count(self) as usize
    }
}

/// Unweighted single-source distances; `None` for unreachable vertices.
pub fn bfs_distances<G: Graph>(g: &G, source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.order()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        let dv = dist[v].unwrap();
        for u in g.neighbors(v) {
            if dist[u].is_none() {
                dist[u] = Some(dv + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}
