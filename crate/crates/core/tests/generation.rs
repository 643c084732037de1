//! Distributional checks on the sampler and the sprinkling coupling.

use qperc::components::census;
use qperc::graph::bfs_distances;
use qperc::hypercube::{generate, generate_sprinkle_rounds, EdgeId, GenerationParams};
use qperc::seed::trial_seed;
use rand::Rng;

fn edge_counts(d: u32, p: f64, trials: u64, master: u64) -> Vec<f64> {
    (0..trials)
        .map(|i| generate(&GenerationParams::new(d, p, trial_seed(master, i))).unwrap().edge_count() as f64)
        .collect()
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    (m, x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0))
}

/// Mean within 3 standard errors and variance within 4 standard errors of
/// the binomial values.
fn assert_binomial(d: u32, p: f64, counts: &[f64]) {
    let edges = (d as f64) * 2f64.powi(d as i32 - 1);
    let (mean, var) = mean_var(counts);
    let n = counts.len() as f64;
    let target_var = edges * p * (1.0 - p);
    let se = (target_var / n).sqrt();
    assert!((mean - edges * p).abs() <= 3.0 * se, "d={d} p={p}: mean {mean} vs {}", edges * p);
    let ratio = var / target_var;
    let spread = 4.0 * (2.0 / (n - 1.0)).sqrt();
    assert!((ratio - 1.0).abs() <= spread, "d={d} p={p}: variance ratio {ratio}");
}

#[test]
fn dense_edge_counts_are_binomial() {
    // d = 10, p = 0.2: 5120 edges, mean 1024.
    assert_binomial(10, 0.2, &edge_counts(10, 0.2, 1000, 1));
}

#[test]
fn sparse_edge_counts_are_binomial() {
    assert_binomial(12, 0.01, &edge_counts(12, 0.01, 500, 2));
    assert_binomial(9, 0.05, &edge_counts(9, 0.05, 1000, 3));
}

/// Pearson statistic of the 2x2 table of an edge's state in trial `i`
/// against its state in trial `i + 1`.
fn lag_one_chi_square(d: u32, p: f64, trials: u64) -> f64 {
    let total = (d as u64) << (d - 1);
    let graphs: Vec<_> = (0..trials)
        .map(|i| generate(&GenerationParams::new(d, p, trial_seed(77, i))).unwrap())
        .collect();
    let mut table = [[0f64; 2]; 2];
    for pair in graphs.windows(2) {
        for index in 0..total {
            let e = EdgeId::from_index(index, d);
            table[pair[0].is_open(e) as usize][pair[1].is_open(e) as usize] += 1.0;
        }
    }
    let n: f64 = table.iter().flatten().sum();
    let rows = [table[0][0] + table[0][1], table[1][0] + table[1][1]];
    let cols = [table[0][0] + table[1][0], table[0][1] + table[1][1]];
    let mut chi = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let expected = rows[r] * cols[c] / n;
            chi += (table[r][c] - expected).powi(2) / expected;
        }
    }
    chi
}

#[test]
fn consecutive_trials_look_independent() {
    // 1% critical value of chi-square with one degree of freedom.
    for (d, p) in [(6, 0.5), (8, 0.2), (10, 0.03)] {
        let chi = lag_one_chi_square(d, p, 400);
        assert!(chi < 6.635, "d={d} p={p}: chi-square {chi}");
    }
}

#[test]
fn edge_frequencies_are_uniform_over_edges() {
    // Per-edge open counts over many trials against Binomial(trials, p).
    let (d, p, trials) = (5u32, 0.3, 2000u64);
    let total = (d as u64) << (d - 1);
    let mut counts = vec![0f64; total as usize];
    for i in 0..trials {
        let g = generate(&GenerationParams::new(d, p, trial_seed(5, i))).unwrap();
        for e in g.open_edges() {
            counts[e.index(d) as usize] += 1.0;
        }
    }
    let expected = trials as f64 * p;
    let chi: f64 = counts
        .iter()
        .map(|&c| (c - expected).powi(2) / (expected * (1.0 - p)))
        .sum();
    // 80 cells, 80 degrees of freedom: 1% critical value 112.33.
    assert!(chi < 112.33, "chi-square {chi}");
}

#[test]
fn sprinkled_union_matches_direct_density() {
    let (d, p, q2) = (8u32, 0.25, 0.08);
    let edges = (d as f64) * 2f64.powi(d as i32 - 1);
    let trials = 400u64;
    let mut total = 0.0;
    for i in 0..trials {
        let s = generate_sprinkle_rounds(&GenerationParams::new(d, p, trial_seed(8, i)).with_sprinkle(q2)).unwrap();
        assert!(s.first.is_subgraph_of(&s.union).unwrap());
        assert!(s.sprinkle.is_subgraph_of(&s.union).unwrap());
        assert!(((1.0 - s.q1) * (1.0 - q2) - (1.0 - p)).abs() < 1e-12);
        total += s.union.edge_count() as f64;
    }
    let mean = total / trials as f64;
    let se = (edges * p * (1.0 - p) / trials as f64).sqrt();
    assert!((mean - edges * p).abs() <= 4.0 * se, "mean {mean} vs {}", edges * p);
}

#[test]
fn census_labels_match_reachability() {
    for i in 0..5 {
        let d = 12;
        let g = generate(&GenerationParams::new(d, 1.3 / d as f64, trial_seed(12, i))).unwrap();
        let c = census(&g);
        let mut rng = qperc::seed::rng(i);
        for _ in 0..20 {
            let u = rng.gen_range(0..1usize << d);
            let dist = bfs_distances(&g, u);
            for _ in 0..50 {
                let v = rng.gen_range(0..1usize << d);
                assert_eq!(c.label[u] == c.label[v], dist[v].is_some(), "u={u} v={v}");
            }
        }
        assert_eq!(c.sizes.iter().sum::<usize>(), 1 << d);
    }
}
