//! Spectral gap of the lazy random walk and sweep-cut certificates.
//!
//! The lazy walk `P = (I + D⁻¹A)/2` is similar to the symmetric operator
//! `M = (I + D^{-1/2} A D^{-1/2})/2`, whose top eigenvector is `√deg` with
//! eigenvalue 1. Lanczos with full reorthogonalization runs on the
//! orthogonal complement of that vector, so its top Ritz value is `λ₂`.
//! The matvec is sequential, which keeps results bit-stable regardless of
//! how many workers run trials in parallel.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::graph::{Graph, LocalGraph};
use crate::seed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Target for `‖Mx − λx‖₂` with `‖x‖₂ = 1`.
    pub tol: f64,
    pub krylov_cap: usize,
    pub max_restarts: usize,
    pub seed: u64,
}

impl SpectralOptions {
    pub fn new(tol: f64) -> Self {
        SpectralOptions {
            tol,
            ..Self::default()
        }
    }
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            tol: 1e-10,
            krylov_cap: 300,
            max_restarts: 200,
            seed: 0x5EED_1A2C,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub lambda2: f64,
    /// `1 − λ₂` of the lazy walk.
    pub gap: f64,
    /// Best `Φ(S)` over sweep cuts of the second eigenvector.
    pub sweep_phi: f64,
    /// The side of the best sweep cut with `π(S) ≤ 1/2`, as local vertices.
    pub sweep_set: Vec<usize>,
    /// Second eigenfunction of the lazy walk, `x / √deg` per local vertex.
    pub eigenfunction: Vec<f64>,
    pub cheeger_lower: f64,
    pub cheeger_upper: f64,
    /// Total Lanczos steps over all restarts.
    pub iterations: usize,
    pub residual: f64,
}

struct Operator {
    inv_sqrt_deg: Vec<f64>,
    top: Vec<f64>,
}

impl Operator {
    fn new(g: &LocalGraph) -> Result<Self> {
        let total: f64 = (0..g.order()).map(|v| g.degree(v) as f64).sum();
        let mut inv_sqrt_deg = Vec::with_capacity(g.order());
        let mut top = Vec::with_capacity(g.order());
        for v in 0..g.order() {
            let deg = g.degree(v);
            if deg == 0 {
                return Err(Error::IsolatedVertex(v));
            }
            inv_sqrt_deg.push(1.0 / (deg as f64).sqrt());
            top.push((deg as f64 / total).sqrt());
        }
        Ok(Operator { inv_sqrt_deg, top })
    }

    fn apply(&self, g: &LocalGraph, x: &[f64], y: &mut [f64]) {
        for v in 0..x.len() {
            let mut acc = 0.0;
            for u in g.neighbors(v) {
                acc += x[u] * self.inv_sqrt_deg[u];
            }
            y[v] = 0.5 * x[v] + 0.5 * acc * self.inv_sqrt_deg[v];
        }
    }

    fn deflate(&self, x: &mut [f64]) {
        let c = dot(&self.top, x);
        axpy(-c, &self.top, x);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn normalize(x: &mut [f64]) -> f64 {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    n
}

/// Largest eigenpair of the tridiagonal matrix (alpha, beta).
fn tridiagonal_top(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let (idx, &theta) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty tridiagonal");
    (theta, eig.eigenvectors.column(idx).iter().copied().collect())
}

struct Eigenpair {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
    iterations: usize,
}

fn second_eigenpair(g: &LocalGraph, op: &Operator, opts: &SpectralOptions) -> Result<Eigenpair> {
    let n = g.order();
    let mut rng = seed::rng(opts.seed);
    let mut start: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() - 0.5).collect();
    op.deflate(&mut start);
    normalize(&mut start);
    let cap = opts.krylov_cap.max(1).min(n - 1);
    let mut iterations = 0;
    let mut w = vec![0.0; n];
    for _ in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut ritz = None;
        for j in 0..cap {
            op.apply(g, &basis[j], &mut w);
            iterations += 1;
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            // Two passes of classical Gram-Schmidt against the whole basis.
            for _ in 0..2 {
                op.deflate(&mut w);
                for b in &basis {
                    let c = dot(&w, b);
                    axpy(-c, b, &mut w);
                }
            }
            let bnorm = dot(&w, &w).sqrt();
            let last = j + 1 == cap || bnorm < 1e-13;
            if last || (j + 1) % 10 == 0 {
                let (_, s) = tridiagonal_top(&alpha, &beta);
                let estimate = bnorm * s[j].abs();
                if last || estimate <= opts.tol * 0.5 {
                    ritz = Some(s);
                    break;
                }
            }
            beta.push(bnorm);
            let next: Vec<f64> = w.iter().map(|x| x / bnorm).collect();
            basis.push(next);
        }
        let s = ritz.expect("loop ends with a Ritz pair");
        let mut x = vec![0.0; n];
        for (coef, b) in s.iter().zip(&basis) {
            axpy(*coef, b, &mut x);
        }
        op.deflate(&mut x);
        normalize(&mut x);
        op.apply(g, &x, &mut w);
        let value = dot(&x, &w);
        axpy(-value, &x, &mut w);
        let residual = dot(&w, &w).sqrt();
        if residual <= opts.tol {
            return Ok(Eigenpair {
                value,
                vector: x,
                residual,
                iterations,
            });
        }
        start = x;
    }
    Err(Error::NonConvergence("lanczos residual above tolerance"))
}

/// Best sweep cut of `f = x / √deg`, taking the side with `π(S) ≤ 1/2`.
fn sweep(g: &LocalGraph, x: &[f64]) -> (f64, Vec<usize>) {
    let n = g.order();
    let f: Vec<f64> = (0..n).map(|v| x[v] / (g.degree(v) as f64).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| f[b].total_cmp(&f[a]).then(a.cmp(&b)));
    let total = 2 * g.edge_count();
    let mut inside = vec![false; n];
    let mut cut = 0usize;
    let mut vol = 0usize;
    let mut best = (f64::INFINITY, 0usize, true);
    for (k, &v) in order[..n - 1].iter().enumerate() {
        let shared = g.neighbors(v).filter(|&u| inside[u]).count();
        cut = cut + g.degree(v) - 2 * shared;
        vol += g.degree(v);
        inside[v] = true;
        let (side_vol, prefix) = if 2 * vol <= total { (vol, true) } else { (total - vol, false) };
        let phi = cut as f64 / (2.0 * side_vol as f64);
        if phi < best.0 {
            best = (phi, k + 1, prefix);
        }
    }
    let (phi, len, prefix) = best;
    let mut set: Vec<usize> = if prefix {
        order[..len].to_vec()
    } else {
        order[len..].to_vec()
    };
    set.sort_unstable();
    (phi, set)
}

pub fn spectral_summary(g: &LocalGraph, opts: &SpectralOptions) -> Result<SpectralSummary> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if g.order() < 2 {
        return Err(Error::InvalidArgument("need at least two vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let op = Operator::new(g)?;
    let pair = second_eigenpair(g, &op, opts)?;
    let lambda2 = pair.value.clamp(0.0, 1.0);
    let gap = 1.0 - lambda2;
    let (sweep_phi, sweep_set) = sweep(g, &pair.vector);
    let eigenfunction = (0..g.order()).map(|v| pair.vector[v] / (g.degree(v) as f64).sqrt()).collect();
    Ok(SpectralSummary {
        lambda2,
        gap,
        sweep_phi,
        sweep_set,
        eigenfunction,
        cheeger_lower: gap / 2.0,
        cheeger_upper: sweep_phi.min((2.0 * gap).sqrt()),
        iterations: pair.iterations,
        residual: pair.residual,
    })
}
