//! Spanning trees and the decomposition of a tree into connected pieces of
//! bounded size and bounded diameter.
//!
//! [`tree_decompose`] runs the classic bottom-up cutting procedure: while at
//! least `ℓ` vertices remain, cut off the subtree of a deepest vertex whose
//! remaining subtree has at least `ℓ` vertices. The leftover (fewer than `ℓ`
//! vertices, containing the root) is merged into the piece cut last.
//! Deepest-first with ties broken by the smaller vertex label makes the
//! procedure deterministic; since cutting never grows a subtree, processing
//! vertices level by level from the bottom is equivalent to re-scanning for
//! the deepest candidate after every cut.

use std::collections::VecDeque;

use crate::analytic::b_of_s;
use crate::graph::{Graph, LocalGraph};
use crate::hypercube::{HypercubeSubgraph, VertexId};
use crate::{Error, Result};

/// A rooted tree on local vertices `0..len`, carrying original labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    parent: Vec<usize>,
    labels: Vec<u32>,
    child_offsets: Vec<usize>,
    children: Vec<usize>,
    depth: Vec<usize>,
}

impl RootedTree {
    /// Builds a tree from a parent array (`parent[root] == root`).
    pub fn from_parents(parent: Vec<usize>, root: usize, labels: Vec<u32>) -> Result<Self> {
        let n = parent.len();
        if root >= n || parent[root] != root || labels.len() != n {
            return Err(Error::InvalidArgument("malformed parent array".into()));
        }
        let mut counts = vec![0usize; n + 1];
        for (v, &p) in parent.iter().enumerate() {
            if p >= n || (v != root && p == v) {
                return Err(Error::InvalidArgument(format!("bad parent of {v}")));
            }
            if v != root {
                counts[p + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut fill = counts.clone();
        let mut children = vec![0usize; n.saturating_sub(1)];
        for (v, &p) in parent.iter().enumerate() {
            if v != root {
                children[fill[p]] = v;
                fill[p] += 1;
            }
        }
        let mut tree = RootedTree {
            root,
            parent,
            labels,
            child_offsets: counts,
            children,
            depth: vec![usize::MAX; n],
        };
        let mut queue = VecDeque::from([root]);
        tree.depth[root] = 0;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for i in tree.child_offsets[v]..tree.child_offsets[v + 1] {
                let c = tree.children[i];
                tree.depth[c] = tree.depth[v] + 1;
                reached += 1;
                queue.push_back(c);
            }
        }
        if reached != n {
            return Err(Error::InvalidArgument("parent array contains a cycle".into()));
        }
        Ok(tree)
    }

    /// Path `0 - 1 - … - (n-1)` rooted at `0`.
    pub fn path(n: usize) -> Self {
        let parent = (0..n).map(|v| v.saturating_sub(1)).collect();
        Self::from_parents(parent, 0, (0..n as u32).collect()).expect("path is a tree")
    }

    /// Star with centre `0` and `leaves` leaves, rooted at the centre.
    pub fn star(leaves: usize) -> Self {
        let parent = vec![0; leaves + 1];
        Self::from_parents(parent, 0, (0..=leaves as u32).collect()).expect("star is a tree")
    }

    /// Labelled tree decoded from a Prüfer sequence over `0..seq.len()+2`,
    /// rooted at `root`.
    pub fn from_prufer(seq: &[usize], root: usize) -> Result<Self> {
        let n = seq.len() + 2;
        if seq.iter().any(|&x| x >= n) || root >= n {
            return Err(Error::InvalidArgument("Prüfer entry out of range".into()));
        }
        let mut degree = vec![1usize; n];
        for &x in seq {
            degree[x] += 1;
        }
        let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &x in seq {
            let leaf = *leaves.iter().next().unwrap();
            leaves.remove(&leaf);
            edges.push((leaf, x));
            degree[x] -= 1;
            if degree[x] == 1 {
                leaves.insert(x);
            }
        }
        let mut rest = leaves.into_iter();
        edges.push((rest.next().unwrap(), rest.next().unwrap()));
        let g = LocalGraph::from_edges(n, &edges);
        bfs_spanning_tree(&g, root)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[self.child_offsets[v]..self.child_offsets[v + 1]]
    }

    /// Degree of `v` as a vertex of the (unrooted) tree.
    pub fn degree(&self, v: usize) -> usize {
        self.children(v).len() + usize::from(v != self.root)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.len()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).filter(move |&v| v != self.root).map(move |v| (self.parent[v], v))
    }

    /// The tree as an undirected graph on the same local indices.
    pub fn to_graph(&self) -> LocalGraph {
        let edges: Vec<_> = self.edges().collect();
        LocalGraph::from_edges(self.len(), &edges)
    }
}

/// BFS tree of the connected graph `g` rooted at local vertex `root`;
/// neighbours are visited in ascending local index order.
pub fn bfs_spanning_tree(g: &LocalGraph, root: usize) -> Result<RootedTree> {
    let n = g.order();
    if root >= n {
        return Err(Error::InvalidArgument(format!("root {root} not in component of order {n}")));
    }
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    let mut queue = VecDeque::from([root]);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for u in g.neighbors(v) {
            if parent[u] == usize::MAX {
                parent[u] = v;
                reached += 1;
                queue.push_back(u);
            }
        }
    }
    if reached != n {
        return Err(Error::Disconnected);
    }
    RootedTree::from_parents(parent, root, g.labels().to_vec())
}

/// Parameters of a decomposition: piece size floor `ell`, the maximum tree
/// degree `c1`, a degree threshold `c2` and `r = #{v : deg(v) > c2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionParams {
    pub ell: usize,
    pub c1: usize,
    pub c2: usize,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceDecomposition {
    /// Pieces as local tree vertices, non-increasing in size.
    pub pieces: Vec<Vec<usize>>,
    /// The vertex whose subtree formed each piece (aligned with `pieces`).
    pub cut_vertices: Vec<usize>,
    pub params: DecompositionParams,
}

impl PieceDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.pieces.iter().map(Vec::len).collect()
    }

    /// Pieces translated to the tree's labels.
    pub fn labelled_pieces(&self, t: &RootedTree) -> Vec<Vec<u32>> {
        self.pieces
            .iter()
            .map(|p| p.iter().map(|&v| t.label(v)).collect())
            .collect()
    }
}

/// Default degree threshold recorded with a decomposition.
const DEFAULT_C2: usize = 3;

pub fn tree_decompose(t: &RootedTree, ell: usize) -> Result<PieceDecomposition> {
    let n = t.len();
    if ell == 0 || n < ell {
        return Err(Error::InvalidArgument(format!("tree of order {n} smaller than ell = {ell}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| t.depth(b).cmp(&t.depth(a)).then(t.label(a).cmp(&t.label(b))));

    let mut residual = vec![0usize; n];
    let mut cut = vec![false; n];
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    let mut centers = Vec::new();
    for &v in &order {
        residual[v] = 1 + t
            .children(v)
            .iter()
            .filter(|&&c| !cut[c])
            .map(|&c| residual[c])
            .sum::<usize>();
        if residual[v] >= ell {
            pieces.push(collect_uncut(t, v, &cut));
            centers.push(v);
            cut[v] = true;
        }
    }
    if !cut[t.root()] {
        let rest = collect_uncut(t, t.root(), &cut);
        pieces.last_mut().expect("n >= ell forces a cut").extend(rest);
    }

    let mut idx: Vec<usize> = (0..pieces.len()).collect();
    idx.sort_by(|&a, &b| pieces[b].len().cmp(&pieces[a].len()));
    let mut sorted = Vec::with_capacity(pieces.len());
    let mut cut_vertices = Vec::with_capacity(pieces.len());
    for i in idx {
        sorted.push(std::mem::take(&mut pieces[i]));
        cut_vertices.push(centers[i]);
    }
    let c1 = t.max_degree().max(1);
    let c2 = DEFAULT_C2.min(c1);
    let r = (0..n).filter(|&v| t.degree(v) > c2).count();
    Ok(PieceDecomposition {
        pieces: sorted,
        cut_vertices,
        params: DecompositionParams { ell, c1, c2, r },
    })
}

fn collect_uncut(t: &RootedTree, v: usize, cut: &[bool]) -> Vec<usize> {
    let mut out = vec![v];
    let mut i = 0;
    while i < out.len() {
        let x = out[i];
        out.extend(t.children(x).iter().copied().filter(|&c| !cut[c]));
        i += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionViolation {
    NotAPartition,
    Disconnected { piece: usize },
    DiameterTooLarge { piece: usize, diameter: usize },
    TooSmall { piece: usize, size: usize },
    TooLarge { piece: usize, size: usize, c2: usize, r: usize },
}

/// Mechanically checks the five properties of a decomposition. The size
/// caps are checked for the recorded `(c2, r)` and, when
/// `all_thresholds` is set, for every threshold `c2 ∈ 1..=c1`.
pub fn verify_decomposition(
    t: &RootedTree,
    dec: &PieceDecomposition,
    all_thresholds: bool,
) -> Vec<DecompositionViolation> {
    let n = t.len();
    let ell = dec.params.ell;
    let mut out = Vec::new();
    let mut owner = vec![usize::MAX; n];
    let mut total = 0;
    for (i, p) in dec.pieces.iter().enumerate() {
        for &v in p {
            if v >= n || owner[v] != usize::MAX {
                out.push(DecompositionViolation::NotAPartition);
                return out;
            }
            owner[v] = i;
            total += 1;
        }
    }
    if total != n {
        out.push(DecompositionViolation::NotAPartition);
        return out;
    }
    let mut inner_edges = vec![0usize; dec.pieces.len()];
    for (u, v) in t.edges() {
        if owner[u] == owner[v] {
            inner_edges[owner[u]] += 1;
        }
    }
    for (i, p) in dec.pieces.iter().enumerate() {
        if inner_edges[i] + 1 != p.len() {
            out.push(DecompositionViolation::Disconnected { piece: i });
            continue;
        }
        let diameter = piece_diameter(t, p, &owner, i);
        if diameter > 2 * ell {
            out.push(DecompositionViolation::DiameterTooLarge { piece: i, diameter });
        }
        if p.len() < ell {
            out.push(DecompositionViolation::TooSmall { piece: i, size: p.len() });
        }
    }
    let mut thresholds = vec![(dec.params.c2, dec.params.r)];
    if all_thresholds {
        for c2 in 1..=dec.params.c1 {
            thresholds.push((c2, (0..n).filter(|&v| t.degree(v) > c2).count()));
        }
    }
    for (c2, r) in thresholds {
        for (i, p) in dec.pieces.iter().enumerate() {
            let cap = if i < r { dec.params.c1 } else { c2 };
            if p.len() > cap * ell {
                out.push(DecompositionViolation::TooLarge {
                    piece: i,
                    size: p.len(),
                    c2,
                    r,
                });
            }
        }
    }
    out
}

fn piece_diameter(t: &RootedTree, piece: &[usize], owner: &[usize], id: usize) -> usize {
    let far = |start: usize| -> (usize, usize) {
        let mut dist = std::collections::HashMap::from([(start, 0usize)]);
        let mut queue = VecDeque::from([start]);
        let mut best = (start, 0);
        while let Some(v) = queue.pop_front() {
            let dv = dist[&v];
            if dv > best.1 {
                best = (v, dv);
            }
            let up = (v != t.root()).then(|| t.parent(v));
            for u in t.children(v).iter().copied().chain(up) {
                if owner[u] == id && !dist.contains_key(&u) {
                    dist.insert(u, dv + 1);
                    queue.push_back(u);
                }
            }
        }
        best
    };
    let (a, _) = far(piece[0]);
    far(a).1
}

/// Piece family of a connected giant: a BFS tree cut into pieces with
/// `ℓ = ⌈d / (c8 · b(s))⌉`.
#[derive(Debug, Clone)]
pub struct PieceFamily {
    pub tree: RootedTree,
    pub decomposition: PieceDecomposition,
    pub ell: usize,
    /// Pieces larger than `ℓ · d`, the size window's upper end.
    pub oversized: usize,
}

impl PieceFamily {
    /// Pieces as hypercube vertex ids.
    pub fn vertex_pieces(&self) -> Vec<Vec<VertexId>> {
        self.decomposition
            .labelled_pieces(&self.tree)
            .into_iter()
            .map(|p| p.into_iter().map(VertexId).collect())
            .collect()
    }
}

pub fn piece_family(giant: &LocalGraph, d: u32, s: f64, c8: f64) -> Result<PieceFamily> {
    if !(c8 > 0.0) {
        return Err(Error::InvalidArgument("c8 must be positive".into()));
    }
    let b = b_of_s(s, d)?;
    if b <= 0.0 {
        return Err(Error::InvalidArgument("b(s) = 0: piece size undefined at s = 2^d".into()));
    }
    let ell = (d as f64 / (c8 * b)).ceil() as usize;
    if giant.order() < ell {
        return Err(Error::InvalidArgument(format!(
            "giant of order {} smaller than ell = {ell}",
            giant.order()
        )));
    }
    let tree = bfs_spanning_tree(giant, 0)?;
    let decomposition = tree_decompose(&tree, ell)?;
    let oversized = decomposition.pieces.iter().filter(|p| p.len() > ell * d as usize).count();
    Ok(PieceFamily {
        tree,
        decomposition,
        ell,
        oversized,
    })
}

/// Maximum `k` accepted by [`enumerate_rooted_subtrees`].
pub const SUBTREE_MAX_K: usize = 7;
/// Maximum dimension accepted by [`enumerate_rooted_subtrees`].
pub const SUBTREE_MAX_D: u32 = 5;

/// Exact number of `k`-vertex subtrees of `g` that contain `v`.
pub fn enumerate_rooted_subtrees(g: &HypercubeSubgraph, v: VertexId, k: usize) -> Result<u64> {
    if k > SUBTREE_MAX_K || g.d() > SUBTREE_MAX_D {
        return Err(Error::CapExceeded {
            what: "subtree enumeration",
            size: k.max(g.d() as usize),
            cap: SUBTREE_MAX_K,
        });
    }
    Ok(count_subtrees(g, v.0 as usize, k))
}

/// Same count on an arbitrary graph; exponential, keep `k` small.
pub fn count_subtrees<G: Graph>(g: &G, v: usize, k: usize) -> u64 {
    if k == 0 {
        return 0;
    }
    let mut in_tree = vec![false; g.order()];
    in_tree[v] = true;
    let candidates: Vec<(usize, usize)> = g.neighbors(v).map(|u| (v, u)).collect();
    grow(g, &mut in_tree, 1, candidates, k)
}

// Include/exclude recursion on the first candidate edge. Each tree has a
// unique accepting decision sequence, so nothing is counted twice.
fn grow<G: Graph>(g: &G, in_tree: &mut [bool], size: usize, candidates: Vec<(usize, usize)>, k: usize) -> u64 {
    if size == k {
        return 1;
    }
    let Some((&(_, w), rest)) = candidates.split_first() else {
        return 0;
    };
    let mut total = grow(g, in_tree, size, rest.to_vec(), k);
    in_tree[w] = true;
    let mut next: Vec<(usize, usize)> = rest.iter().copied().filter(|&(_, x)| x != w).collect();
    next.extend(g.neighbors(w).filter(|&x| !in_tree[x]).map(|x| (w, x)));
    total += grow(g, in_tree, size + 1, next, k);
    in_tree[w] = false;
    total
}
