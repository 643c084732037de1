use std::collections::VecDeque;

use crate::graph::Graph;
use crate::{Error, Result};

/// Largest order accepted by [`DiameterMethod::ExactAllBfs`].
pub const ALL_PAIRS_CAP: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMethod {
    ExactAllBfs,
    /// Exact, pruned by BFS fringe levels from a central vertex.
    Ifub,
    /// Two BFS sweeps; a lower bound only.
    DoubleSweepLower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiameterResult {
    pub value: u32,
    pub method: DiameterMethod,
    /// A pair of local vertices at distance `value`.
    pub endpoints: (usize, usize),
    pub bfs_runs: usize,
}

struct Bfs {
    dist: Vec<u32>,
    parent: Vec<usize>,
    queue: VecDeque<usize>,
    runs: usize,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs {
            dist: vec![u32::MAX; n],
            parent: vec![usize::MAX; n],
            queue: VecDeque::new(),
            runs: 0,
        }
    }

    /// Runs BFS from `s`; returns (eccentricity, a farthest vertex with the
    /// smallest index, number reached).
    fn run<G: Graph>(&mut self, g: &G, s: usize) -> (u32, usize, usize) {
        self.runs += 1;
        self.dist.iter_mut().for_each(|d| *d = u32::MAX);
        self.dist[s] = 0;
        self.parent[s] = s;
        self.queue.push_back(s);
        let mut far = (0, s);
        let mut reached = 0;
        while let Some(v) = self.queue.pop_front() {
            reached += 1;
            let dv = self.dist[v];
            if dv > far.0 || (dv == far.0 && v < far.1) {
                far = (dv, v);
            }
            for u in g.neighbors(v) {
                if self.dist[u] == u32::MAX {
                    self.dist[u] = dv + 1;
                    self.parent[u] = v;
                    self.queue.push_back(u);
                }
            }
        }
        (far.0, far.1, reached)
    }
}

pub fn diameter<G: Graph>(g: &G, method: DiameterMethod) -> Result<DiameterResult> {
    let n = g.order();
    if n == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    if method == DiameterMethod::ExactAllBfs && n > ALL_PAIRS_CAP {
        return Err(Error::CapExceeded {
            what: "all-pairs BFS",
            size: n,
            cap: ALL_PAIRS_CAP,
        });
    }
    let mut bfs = Bfs::new(n);
    let (_, a, reached) = bfs.run(g, 0);
    if reached != n {
        return Err(Error::Disconnected);
    }
    let result = |value, endpoints, bfs: &Bfs| DiameterResult {
        value,
        method,
        endpoints,
        bfs_runs: bfs.runs,
    };
    match method {
        DiameterMethod::ExactAllBfs => {
            let mut best = (0, (0, 0));
            for s in 0..n {
                let (e, far, _) = bfs.run(g, s);
                if e > best.0 {
                    best = (e, (s, far));
                }
            }
            Ok(result(best.0, best.1, &bfs))
        }
        DiameterMethod::DoubleSweepLower => {
            let (e, b, _) = bfs.run(g, a);
            Ok(result(e, (a, b), &bfs))
        }
        DiameterMethod::Ifub => {
            let (e, b, _) = bfs.run(g, a);
            // Midpoint of the a-b path found by the sweep.
            let mut u = b;
            for _ in 0..e / 2 {
                u = bfs.parent[u];
            }
            let mut lb = (e, (a, b));
            let (ecc_u, far_u, _) = bfs.run(g, u);
            if ecc_u > lb.0 {
                lb = (ecc_u, (u, far_u));
            }
            let mut levels: Vec<Vec<usize>> = vec![Vec::new(); ecc_u as usize + 1];
            for v in 0..n {
                levels[bfs.dist[v] as usize].push(v);
            }
            let mut i = ecc_u;
            let mut ub = 2 * ecc_u;
            while ub > lb.0 && i > 0 {
                for &x in &levels[i as usize] {
                    let (ex, fx, _) = bfs.run(g, x);
                    if ex > lb.0 {
                        lb = (ex, (x, fx));
                    }
                }
                if lb.0 > 2 * (i - 1) {
                    break;
                }
                ub = 2 * (i - 1);
                i -= 1;
            }
            Ok(result(lb.0, lb.1, &bfs))
        }
    }
}
