//! Component census of a hypercube subgraph and the measurements made on
//! its giant component.

use std::collections::{BTreeMap, VecDeque};

use crate::graph::LocalGraph;
use crate::hypercube::{HypercubeSubgraph, VertexId};
use crate::{Error, Result};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns `true` if the two sets were distinct.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }
}

/// Connected components of a subgraph.
///
/// A component is identified by its smallest vertex id. `order` lists
/// component ids by non-increasing size (ties: smaller id first) and
/// `sizes` is aligned with it, so `sizes[0]` is `|V(L1)|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentCensus {
    pub label: Vec<u32>,
    pub sizes: Vec<usize>,
    pub order: Vec<u32>,
    pub giant_id: u32,
}

impl ComponentCensus {
    pub fn vertex_count(&self) -> usize {
        self.label.len()
    }

    pub fn giant_size(&self) -> usize {
        self.sizes[0]
    }

    pub fn in_giant(&self, v: VertexId) -> bool {
        self.label[v.0 as usize] == self.giant_id
    }

    /// Vertices of component `id` in ascending order.
    pub fn members(&self, id: u32) -> Vec<VertexId> {
        self.label
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == id)
            .map(|(v, _)| VertexId(v as u32))
            .collect()
    }

    pub fn giant_members(&self) -> Vec<VertexId> {
        self.members(self.giant_id)
    }

    /// Component ids (with sizes) in census order.
    pub fn components(&self) -> impl Iterator<Item = (u32, usize)> + '_ {
        self.order.iter().copied().zip(self.sizes.iter().copied())
    }

    /// Vertex lists of all components, in census order.
    pub fn all_members(&self) -> Vec<Vec<VertexId>> {
        let mut slot = BTreeMap::new();
        for (i, &id) in self.order.iter().enumerate() {
            slot.insert(id, i);
        }
        let mut out = vec![Vec::new(); self.order.len()];
        for (v, l) in self.label.iter().enumerate() {
            out[slot[l]].push(VertexId(v as u32));
        }
        out
    }

    pub fn giant_graph(&self, g: &HypercubeSubgraph) -> LocalGraph {
        LocalGraph::induced(g, &self.giant_members())
    }
}

/// Exact connected components via union-find over the dense vertex range.
pub fn census(g: &HypercubeSubgraph) -> ComponentCensus {
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    for (v, &mask) in g.masks().iter().enumerate() {
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros();
            m &= m - 1;
            let u = v ^ (1 << i);
            if u > v {
                uf.union(v as u32, u as u32);
            }
        }
    }
    let mut min_vertex = vec![u32::MAX; n];
    let mut label = vec![0u32; n];
    let mut count = vec![0usize; n];
    for v in 0..n {
        let r = uf.find(v as u32) as usize;
        if min_vertex[r] == u32::MAX {
            min_vertex[r] = v as u32;
        }
        label[v] = min_vertex[r];
        count[min_vertex[r] as usize] += 1;
    }
    let mut comps: Vec<(usize, u32)> = count
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(id, &c)| (c, id as u32))
        .collect();
    comps.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    ComponentCensus {
        label,
        sizes: comps.iter().map(|c| c.0).collect(),
        order: comps.iter().map(|c| c.1).collect(),
        giant_id: comps[0].1,
    }
}

pub fn giant_fraction(c: &ComponentCensus) -> f64 {
    c.sizes[0] as f64 / c.vertex_count() as f64
}

/// `|V(L2)|`, or 0 when the graph is connected.
pub fn second_largest_order(c: &ComponentCensus) -> usize {
    c.sizes.get(1).copied().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachmentReport {
    /// `max |C_v|` over `v ∈ V(L1')`.
    pub max_attachment: usize,
    /// `|C_v|` → number of giant vertices with that value.
    pub histogram: BTreeMap<usize, usize>,
    /// `|V(L1)| - |V(L1')|`, the trivial upper bound on every `|C_v|`.
    pub outside_volume: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttachmentOutcome {
    Measured(AttachmentReport),
    /// The first-round giant is not inside the sprinkled giant; the trial
    /// carries no information about attachment volumes.
    GiantNotNested,
}

/// For every `v` in the first-round giant `L1'`, the total order of the
/// components of `L1 - L1'` that are adjacent to `v` in `Q2`.
pub fn attachment_report(
    q1: &HypercubeSubgraph,
    q2: &HypercubeSubgraph,
    census1: &ComponentCensus,
    census2: &ComponentCensus,
) -> Result<AttachmentOutcome> {
    if let Some(e) = q1.first_edge_missing_from(q2)? {
        return Err(Error::NotSubgraph {
            endpoint: e.endpoint.0,
            dir: e.dir,
        });
    }
    let n = q2.vertex_count();
    if census1.vertex_count() != n || census2.vertex_count() != n {
        return Err(Error::InvalidArgument("census does not match graph".into()));
    }
    let inner = census1.giant_id;
    if census2.label[inner as usize] != census2.giant_id {
        return Ok(AttachmentOutcome::GiantNotNested);
    }
    let outer = census2.giant_id;
    let in_inner = |v: usize| census1.label[v] == inner;
    let in_rest = |v: usize| census2.label[v] == outer && census1.label[v] != inner;

    // Components of R = L1 - L1' in Q2, labelled by BFS.
    let mut piece = vec![u32::MAX; n];
    let mut piece_size = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if piece[s] != u32::MAX || !in_rest(s) {
            continue;
        }
        let id = piece_size.len() as u32;
        piece[s] = id;
        queue.push_back(s);
        let mut size = 0usize;
        while let Some(v) = queue.pop_front() {
            size += 1;
            let mut m = q2.masks()[v];
            while m != 0 {
                let i = m.trailing_zeros();
                m &= m - 1;
                let u = v ^ (1 << i);
                if piece[u] == u32::MAX && in_rest(u) {
                    piece[u] = id;
                    queue.push_back(u);
                }
            }
        }
        piece_size.push(size);
    }

    let mut histogram = BTreeMap::new();
    let mut max_attachment = 0;
    let mut seen: Vec<u32> = Vec::with_capacity(32);
    for v in (0..n).filter(|&v| in_inner(v)) {
        seen.clear();
        let mut m = q2.masks()[v];
        while m != 0 {
            let i = m.trailing_zeros();
            m &= m - 1;
            let p = piece[v ^ (1 << i)];
            if p != u32::MAX && !seen.contains(&p) {
                seen.push(p);
            }
        }
        let volume: usize = seen.iter().map(|&p| piece_size[p as usize]).sum();
        max_attachment = max_attachment.max(volume);
        *histogram.entry(volume).or_insert(0) += 1;
    }
    Ok(AttachmentOutcome::Measured(AttachmentReport {
        max_attachment,
        histogram,
        outside_volume: census2.giant_size() - census1.giant_size(),
    }))
}

/// Per-vertex count of giant vertices within host-cube distance two.
pub fn two_hop_counts(c: &ComponentCensus, d: u32) -> Vec<u32> {
    let n = c.vertex_count();
    let g: Vec<u32> = (0..n).map(|v| (c.label[v] == c.giant_id) as u32).collect();
    let s1: Vec<u32> = (0..n)
        .map(|v| (0..d).map(|i| g[v ^ (1 << i)]).sum())
        .collect();
    // Σ_i s1(v ^ e_i) counts each distance-2 vertex twice and v itself d times.
    (0..n)
        .map(|v| {
            let around: u32 = (0..d).map(|i| s1[v ^ (1 << i)]).sum();
            g[v] + s1[v] + (around - d * g[v]) / 2
        })
        .collect()
}

/// `min_v |{u ∈ L1 : dist_{Q^d}(u, v) ≤ 2}|` over all vertices of the cube.
pub fn two_hop_density(g: &HypercubeSubgraph, c: &ComponentCensus) -> u32 {
    two_hop_counts(c, g.d()).into_iter().min().unwrap_or(0)
}

/// `|N^5_{Q2}(S) ∩ restrict|`: vertices outside `S` within distance five of
/// `S` in `q2`, counted only if they lie in `restrict`.
pub fn five_hop_boundary(q2: &HypercubeSubgraph, s: &[VertexId], restrict: &[VertexId]) -> Result<usize> {
    k_hop_boundary(q2, s, restrict, 5)
}

pub fn k_hop_boundary(g: &HypercubeSubgraph, s: &[VertexId], restrict: &[VertexId], k: u32) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::InvalidArgument("S must be nonempty".into()));
    }
    let n = g.vertex_count();
    let mut dist = vec![u32::MAX; n];
    let mut frontier: Vec<usize> = Vec::new();
    for v in s {
        if dist[v.0 as usize] != 0 {
            dist[v.0 as usize] = 0;
            frontier.push(v.0 as usize);
        }
    }
    for level in 1..=k {
        let mut next = Vec::new();
        for &v in &frontier {
            let mut m = g.masks()[v];
            while m != 0 {
                let i = m.trailing_zeros();
                m &= m - 1;
                let u = v ^ (1 << i);
                if dist[u] == u32::MAX {
                    dist[u] = level;
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    let mut counted = vec![false; n];
    let mut total = 0;
    for r in restrict {
        let r = r.0 as usize;
        if !counted[r] && dist[r] != u32::MAX && dist[r] > 0 {
            counted[r] = true;
            total += 1;
        }
    }
    Ok(total)
}
