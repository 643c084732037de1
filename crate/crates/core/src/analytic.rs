//! Closed-form bounds and fixed points: branching-process survival,
//! binomial tail bounds, edge isoperimetry of the cube, binary entropy,
//! subtree counts and the neighbourhood growth schedule.
//!
//! Probability and count bounds are evaluated in log space; a
//! [`BoundResult`] carries the log value next to the (clipped) value.

use crate::{Error, Result};

const SURVIVAL_MAX_ITER: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurvivalQuery {
    /// Offspring mean is `1 + delta`.
    pub delta: f64,
    pub tol: f64,
}

impl SurvivalQuery {
    pub fn new(delta: f64, tol: f64) -> Self {
        SurvivalQuery { delta, tol }
    }
}

/// Survival probability of a Poisson(1 + δ) Galton–Watson process, i.e. the
/// root in (0, 1) of `γ = 1 - exp(-(1 + δ) γ)`, found by bisection.
pub fn survival_probability(q: SurvivalQuery) -> Result<f64> {
    if !(q.tol > 0.0) || !q.delta.is_finite() {
        return Err(Error::InvalidArgument(format!("bad survival query {q:?}")));
    }
    if q.delta <= 0.0 {
        return Ok(0.0);
    }
    let mean = 1.0 + q.delta;
    let f = |g: f64| -(-mean * g).exp_m1() - g;
    // f > 0 on (0, γ), f < 0 on (γ, 1]; bracket in [tol, 1 - tol] and widen
    // the lower end if the root sits below tol.
    let mut lo = q.tol.min(0.5);
    while f(lo) <= 0.0 {
        lo *= 0.5;
        if lo < f64::MIN_POSITIVE {
            return Err(Error::NonConvergence("survival bracket"));
        }
    }
    let mut hi = (1.0 - q.tol).max(0.5);
    if f(hi) > 0.0 {
        hi = 1.0;
    }
    for _ in 0..SURVIVAL_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let g = 0.5 * (lo + hi);
        if hi - lo <= q.tol && f(g).abs() <= q.tol {
            return Ok(g);
        }
    }
    Err(Error::NonConvergence("survival bisection"))
}

/// Which bound produced a [`BoundResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFormula {
    ChernoffDeviation,
    ChernoffUpper,
    TreeCount,
    Harper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    /// Clipped to `[0, 1]` for probability bounds.
    pub value: f64,
    /// Natural log of the unclipped bound.
    pub log_value: f64,
    pub formula: BoundFormula,
}

impl BoundResult {
    fn probability(log_value: f64, formula: BoundFormula) -> Self {
        BoundResult {
            value: log_value.min(0.0).exp(),
            log_value,
            formula,
        }
    }

    /// The bound before clipping (may overflow to infinity).
    pub fn raw(&self) -> f64 {
        self.log_value.exp()
    }
}

/// `P(|Bin(N,p) - Np| > a) < 2 exp(-a² / (4Np))` for `0 < a ≤ Np/2`.
pub fn chernoff_deviation(n: u64, p: f64, a: f64) -> Result<BoundResult> {
    let mean = n as f64 * p;
    if !(a > 0.0) || a > mean / 2.0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "deviation bound needs 0 < a <= Np/2 (a = {a}, Np = {mean})"
        )));
    }
    Ok(BoundResult::probability(
        std::f64::consts::LN_2 - a * a / (4.0 * mean),
        BoundFormula::ChernoffDeviation,
    ))
}

/// `P(Bin(N,p) > bNp) ≤ (e/b)^{bNp}` for `b > 0`.
pub fn chernoff_upper(n: u64, p: f64, b: f64) -> Result<BoundResult> {
    if !(b > 0.0) || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("upper-tail bound needs b > 0 (b = {b})")));
    }
    let exponent = b * n as f64 * p;
    Ok(BoundResult::probability(
        exponent * (1.0 - b.ln()),
        BoundFormula::ChernoffUpper,
    ))
}

/// Lower bound `a (d - log2 a)` on the edge boundary of an `a`-set in `Q^d`,
/// valid for `1 ≤ a ≤ 2^{d-1}`.
pub fn harper_bound(a_size: u64, d: u32) -> Result<f64> {
    if a_size == 0 || d == 0 || d > 62 || a_size > 1u64 << (d - 1) {
        return Err(Error::InvalidArgument(format!(
            "set size {a_size} outside [1, 2^(d-1)] for d = {d}"
        )));
    }
    let a = a_size as f64;
    Ok(a * (d as f64 - a.log2()))
}

/// `h(x) = -x log2 x - (1-x) log2(1-x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("entropy argument {x} outside [0,1]")));
    }
    let term = |t: f64| if t > 0.0 { -t * t.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// The unique `x ∈ [0, 1/2]` with `h(x) = y`, to within 1e-12.
pub fn inverse_binary_entropy(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::InvalidArgument(format!("entropy value {y} outside [0,1]")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// Upper bound on the number of `k`-vertex trees rooted at a fixed vertex
/// of a graph with maximum degree `max_degree`:
/// `min(k^{k-2} Δ^{k-1} / (k-1)!, (eΔ)^{k-1})`.
pub fn tree_count_bound(max_degree: u64, k: u64) -> Result<BoundResult> {
    if max_degree == 0 || k == 0 {
        return Err(Error::InvalidArgument("tree count needs Δ >= 1 and k >= 1".into()));
    }
    let (kf, delta) = (k as f64, max_degree as f64);
    let cayley = (kf - 2.0) * kf.ln() + (kf - 1.0) * delta.ln() - ln_factorial(k - 1);
    let simple = (kf - 1.0) * (1.0 + delta.ln());
    let log_value = cayley.min(simple);
    Ok(BoundResult {
        value: log_value.exp(),
        log_value,
        formula: BoundFormula::TreeCount,
    })
}

/// Isoperimetric deficiency `b(s) = 1 - log2(s)/d` for `1 ≤ s ≤ 2^d`.
pub fn b_of_s(s: f64, d: u32) -> Result<f64> {
    if !(s >= 1.0) || s > 2f64.powi(d as i32) || d == 0 {
        return Err(Error::InvalidArgument(format!("s = {s} outside [1, 2^{d}]")));
    }
    Ok(1.0 - s.log2() / d as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSchedule {
    pub rounds: u64,
    pub total_radius: f64,
    /// The sizes `x_0, x_1, …` visited, ending at the first `x ≥ target`.
    pub sizes: Vec<f64>,
}

/// Iterates `x_{i+1} = x_i (1 + c7 b(x_i))` from `start` until `x ≥ target`,
/// accumulating the per-round radius `r(x_i) + 5` with
/// `r(s) = 2 d / (c8 b(s))`.
pub fn growth_schedule(d: u32, c7: f64, c8: f64, start: f64, target: f64) -> Result<GrowthSchedule> {
    if !(c7 > 0.0) || !(c8 > 0.0) {
        return Err(Error::InvalidArgument("growth constants must be positive".into()));
    }
    let cube = 2f64.powi(d as i32);
    if !(start >= 1.0) || target < start || target > cube {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= start <= target <= 2^d (start {start}, target {target})"
        )));
    }
    let mut x = start;
    let mut sizes = vec![x];
    let mut rounds = 0u64;
    let mut radius = 0.0;
    while x < target {
        let b = b_of_s(x, d)?;
        radius += 2.0 * d as f64 / (c8 * b) + 5.0;
        x *= 1.0 + c7 * b;
        rounds += 1;
        sizes.push(x);
        if rounds > 100_000_000 {
            return Err(Error::NonConvergence("growth schedule"));
        }
    }
    Ok(GrowthSchedule {
        rounds,
        total_radius: radius,
        sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Independent oracle: plain bisection of 1 - e^{-mγ} - γ on [1e-9, 1].
    fn oracle_gamma(delta: f64) -> f64 {
        let m = 1.0 + delta;
        let (mut lo, mut hi) = (1e-9f64, 1.0f64);
        for _ in 0..200 {
            let mid = (lo + hi) / 2.0;
            if 1.0 - (-m * mid).exp() - mid > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        lo
    }

    #[test]
    fn survival_examples() {
        assert_eq!(survival_probability(SurvivalQuery::new(0.0, 1e-12)).unwrap(), 0.0);
        assert_eq!(survival_probability(SurvivalQuery::new(-0.3, 1e-12)).unwrap(), 0.0);
        let g1 = survival_probability(SurvivalQuery::new(1.0, 1e-12)).unwrap();
        assert_abs_diff_eq!(g1, 0.796812, epsilon = 1e-6);
        assert_abs_diff_eq!(g1, oracle_gamma(1.0), epsilon = 1e-10);
        let small = survival_probability(SurvivalQuery::new(0.01, 1e-12)).unwrap();
        let ratio = small / 0.02;
        assert!((0.9..=1.0).contains(&ratio), "{ratio}");
        assert!(survival_probability(SurvivalQuery::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn survival_monotone_on_grid() {
        let mut prev = 0.0;
        for i in 1..=200 {
            let delta = i as f64 * 0.02;
            let g = survival_probability(SurvivalQuery::new(delta, 1e-12)).unwrap();
            assert!(g > prev);
            assert!(g - prev < 0.05, "jump at {delta}");
            prev = g;
        }
    }

    #[test]
    fn chernoff_examples() {
        let r = chernoff_deviation(100, 0.5, 25.0).unwrap();
        assert_abs_diff_eq!(r.value, 2.0 * (-3.125f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.value, 0.0878, epsilon = 1e-4);
        let r = chernoff_upper(100, 0.5, std::f64::consts::E).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
        assert!(chernoff_deviation(100, 0.5, 26.0).is_err());
        assert!(chernoff_upper(100, 0.5, 0.0).is_err());
        // Huge exponents stay finite in log space.
        let r = chernoff_upper(1 << 40, 0.5, 10.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.log_value.is_finite() && r.log_value < -1e12);
    }

    #[test]
    fn harper_examples() {
        assert_eq!(harper_bound(1, 10).unwrap(), 10.0);
        for k in 0..10 {
            assert_eq!(harper_bound(1 << k, 10).unwrap(), ((1u64 << k) * (10 - k)) as f64);
        }
        assert!(harper_bound(0, 10).is_err());
        assert!(harper_bound(513, 10).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert_eq!(inverse_binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(inverse_binary_entropy(1.0).unwrap(), 0.5);
        assert!(binary_entropy(1.1).is_err());
        assert!(inverse_binary_entropy(-0.1).is_err());
    }

    #[test]
    fn tree_count_examples() {
        assert_abs_diff_eq!(tree_count_bound(7, 1).unwrap().value, 1.0, epsilon = 1e-12);
        for d in 1..10 {
            assert!(tree_count_bound(d, 2).unwrap().value >= d as f64 - 1e-9);
        }
        // k = 3, Δ = 3: min(3 * 9 / 2, (3e)^2) = 13.5
        assert_abs_diff_eq!(tree_count_bound(3, 3).unwrap().value, 13.5, epsilon = 1e-9);
    }

    #[test]
    fn b_of_s_examples() {
        assert_eq!(b_of_s(1.0, 12).unwrap(), 1.0);
        assert_eq!(b_of_s(4096.0, 12).unwrap(), 0.0);
        assert_eq!(b_of_s(64.0, 12).unwrap(), 0.5);
        assert!(b_of_s(0.5, 12).is_err());
        assert!(b_of_s(5000.0, 12).is_err());
    }

    /// Re-implementation of the growth recursion used as a cross-check.
    fn growth_reference(d: u32, c7: f64, c8: f64, start: f64, target: f64) -> (u64, f64) {
        let (mut x, mut n, mut r) = (start, 0u64, 0.0f64);
        while x < target {
            let b = 1.0 - x.ln() / (2f64.ln() * d as f64);
            r += 5.0 + 2.0 * d as f64 / c8 / b;
            x += x * c7 * b;
            n += 1;
        }
        (n, r)
    }

    #[test]
    fn growth_schedule_examples() {
        let s = growth_schedule(20, 1.0, 1.0, 37.0, 37.0).unwrap();
        assert_eq!((s.rounds, s.total_radius), (0, 0.0));
        let s = growth_schedule(20, 1.0, 1.0, 1.0, 2f64.powi(19)).unwrap();
        let (rounds, radius) = growth_reference(20, 1.0, 1.0, 1.0, 2f64.powi(19));
        assert_eq!(s.rounds, rounds);
        assert_abs_diff_eq!(s.total_radius, radius, epsilon = 1e-6 * radius);
        assert!(growth_schedule(20, 0.0, 1.0, 1.0, 2.0).is_err());
        assert!(growth_schedule(20, 1.0, -1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn growth_radius_is_cubic_in_d() {
        // Fixed constants; target = half the cube.
        let ratios: Vec<f64> = (10..=30)
            .map(|d| {
                let s = growth_schedule(d, 0.5, 0.5, 1.0, 2f64.powi(d as i32 - 1)).unwrap();
                s.total_radius / (d as f64).powi(3)
            })
            .collect();
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        assert!(max < 10.0, "radius/d^3 ratios {ratios:?}");
    }

    proptest! {
        #[test]
        fn entropy_roundtrip(y in 0.0f64..=1.0) {
            let x = inverse_binary_entropy(y).unwrap();
            prop_assert!((0.0..=0.5).contains(&x));
            prop_assert!((binary_entropy(x).unwrap() - y).abs() < 1e-10);
        }
    }
}
