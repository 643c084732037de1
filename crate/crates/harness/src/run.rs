//! Per-trial pipelines and the long-format CSV they produce.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use qperc::components::{attachment_report, census, giant_fraction, second_largest_order, two_hop_density, AttachmentOutcome};
use qperc::decomposition::{piece_family, verify_decomposition};
use qperc::expansion::{
    cheeger_exact, degree_census, direction_split, min_vertex_expansion_exact, spectral_summary, SpectralOptions,
};
use qperc::hypercube::{generate, generate_sprinkle_rounds, GenerationParams};
use qperc::long_structures::{diameter, greedy_minor, longest_cycle_heuristic, DiameterMethod};
use qperc::walks::{
    mixing_time_exact, pi_min_exact, sampled_mixing, spectral_mixing_bounds, ExactMixingOptions, MixingMethod,
    EXACT_MIXING_CAP,
};
use qperc::{seed, Graph, LocalGraph};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, Kind};

pub const CSV_COLUMNS: [&str; 10] = [
    "experiment", "d", "p", "q2", "trial", "seed", "metric", "value", "wall_ms", "workers",
];

/// Target minor order handed to the minor search.
pub const MINOR_TARGET: usize = 16;
/// Cycle search steps per giant vertex.
pub const CYCLE_BUDGET_PER_VERTEX: usize = 64;
/// Walkers for the sampled mixing estimate.
pub const SAMPLED_WALKERS: usize = 4096;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] qperc::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl RunError {
    /// Process exit code: 2 config, 4 cap exceeded, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Core(qperc::Error::CapExceeded { .. }) => 4,
            RunError::Core(
                qperc::Error::InvalidProbability { .. }
                | qperc::Error::DimensionOutOfRange(_)
                | qperc::Error::InvalidArgument(_),
            ) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub experiment: Kind,
    pub d: u32,
    pub p: f64,
    pub q2: Option<f64>,
    pub trial: u64,
    pub seed: u64,
    pub metrics: Vec<(&'static str, f64)>,
    pub wall_ms: Option<f64>,
    pub workers: usize,
}

impl ExperimentRecord {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(m, _)| *m == name).map(|&(_, v)| v)
    }
}

/// Seed of trial `trial` at dimension `d`.
pub fn record_seed(master: u64, d: u32, trial: u64) -> u64 {
    seed::substream(seed::trial_seed(master, trial), d as u64)
}

fn default_q2(d: u32) -> f64 {
    0.2 / d as f64
}

type Metrics = Vec<(&'static str, f64)>;

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn census_metrics(g: &qperc::HypercubeSubgraph, out: &mut Metrics) -> LocalGraph {
    let c = census(g);
    out.push(("edges", g.edge_count() as f64));
    out.push(("components", c.components().count() as f64));
    out.push(("giant_size", c.giant_size() as f64));
    out.push(("giant_fraction", giant_fraction(&c)));
    out.push(("second_largest", second_largest_order(&c) as f64));
    c.giant_graph(g)
}

fn expansion_metrics(g: &LocalGraph, d: u32, cfg: &ExperimentConfig, out: &mut Metrics) -> qperc::Result<()> {
    let s = spectral_summary(g, &SpectralOptions::new(cfg.tol))?;
    out.extend([
        ("lambda2", s.lambda2),
        ("gap", s.gap),
        ("sweep_phi", s.sweep_phi),
        ("cheeger_lower", s.cheeger_lower),
        ("cheeger_upper", s.cheeger_upper),
        ("lanczos_iterations", s.iterations as f64),
    ]);
    if g.order() <= cfg.cap_exact {
        out.push(("phi_exact", cheeger_exact(g)?.value));
        out.push(("vertex_expansion_exact", min_vertex_expansion_exact(g)?.value));
    }
    out.push((
        "low_degree_vertices",
        degree_census(g, qperc::expansion::sampling::default_degree_threshold(d)) as f64,
    ));
    let members: Vec<qperc::VertexId> = g.labels().iter().map(|&l| qperc::VertexId(l)).collect();
    out.push(("direction_split_minority", direction_split(&members, d)?.minority()));
    Ok(())
}

fn mixing_metrics(g: &LocalGraph, d: u32, cfg: &ExperimentConfig, seed: u64, out: &mut Metrics) -> qperc::Result<()> {
    let report = if g.order() <= EXACT_MIXING_CAP {
        mixing_time_exact(
            g,
            &ExactMixingOptions {
                seed,
                ..Default::default()
            },
        )?
    } else {
        sampled_mixing(g, d, SAMPLED_WALKERS, 40 * (d as u64).pow(2), seed)?
    };
    out.push(("mixed", flag(report.t_mix.is_some())));
    if let Some(t) = report.t_mix {
        out.push(("t_mix", t as f64));
    }
    let method = match report.method {
        MixingMethod::Exact => 0.0,
        MixingMethod::ExactHeuristicStarts => 1.0,
        MixingMethod::SpectralBound => 2.0,
        MixingMethod::Sampled => 3.0,
    };
    out.push(("mixing_method", method));
    let s = spectral_summary(g, &SpectralOptions::new(cfg.tol))?;
    let (lo, hi) = spectral_mixing_bounds(s.gap, pi_min_exact(g)?, 0.25)?;
    out.extend([("gap", s.gap), ("spectral_lower", lo), ("spectral_upper", hi)]);
    Ok(())
}

/// Runs one trial of `kind` at dimension `d`.
pub fn measure(cfg: &ExperimentConfig, d: u32, trial_seed: u64) -> qperc::Result<Metrics> {
    let p = cfg.p(d);
    let mut out = Metrics::new();
    if cfg.kind == Kind::Sprinkle {
        let q2 = cfg.q2.unwrap_or_else(|| default_q2(d));
        let s = generate_sprinkle_rounds(&GenerationParams::new(d, p, trial_seed).with_sprinkle(q2))?;
        let (c1, c2) = (census(&s.first), census(&s.union));
        out.push(("q1", s.q1));
        out.push(("first_edges", s.first.edge_count() as f64));
        out.push(("union_edges", s.union.edge_count() as f64));
        out.push(("nested", flag(s.first.is_subgraph_of(&s.union)?)));
        out.push(("first_giant", c1.giant_size() as f64));
        out.push(("union_giant", c2.giant_size() as f64));
        match attachment_report(&s.first, &s.union, &c1, &c2)? {
            AttachmentOutcome::Measured(r) => {
                out.push(("giant_nested", 1.0));
                out.push(("max_attachment", r.max_attachment as f64));
            }
            AttachmentOutcome::GiantNotNested => out.push(("giant_nested", 0.0)),
        }
        out.push(("two_hop_density", two_hop_density(&s.union, &c2) as f64));
        return Ok(out);
    }
    let q = generate(&GenerationParams::new(d, p, trial_seed))?;
    let giant = census_metrics(&q, &mut out);
    if matches!(cfg.kind, Kind::Census | Kind::Sweep) || giant.order() < 2 {
        return Ok(out);
    }
    let n = giant.order();
    let sub = |tag| seed::substream(trial_seed, tag);
    match cfg.kind {
        Kind::Expansion => expansion_metrics(&giant, d, cfg, &mut out)?,
        Kind::Mixing => mixing_metrics(&giant, d, cfg, sub(10), &mut out)?,
        Kind::Diameter => {
            let r = diameter(&giant, DiameterMethod::Ifub)?;
            out.push(("diameter", r.value as f64));
            out.push(("bfs_runs", r.bfs_runs as f64));
        }
        Kind::Cycles => {
            let c = longest_cycle_heuristic(&giant, CYCLE_BUDGET_PER_VERTEX * n, sub(11));
            out.push(("cycle_length", c.len() as f64));
            out.push(("cycle_fraction", c.len() as f64 / n as f64));
            out.push(("cycle_valid", flag(c.validate(&giant).is_ok())));
        }
        Kind::Minors => {
            let m = greedy_minor(&giant, MINOR_TARGET, sub(12))?;
            out.push(("minor_order", m.order() as f64));
            out.push(("minor_valid", flag(m.validate(&giant).is_ok())));
        }
        Kind::Decompose => {
            let s = (n as f64 / 4.0).max(2.0);
            let fam = piece_family(&giant, d, s, 1.0)?;
            let sizes = fam.decomposition.sizes();
            out.push(("ell", fam.ell as f64));
            out.push(("pieces", sizes.len() as f64));
            out.push(("min_piece", *sizes.iter().min().unwrap_or(&0) as f64));
            out.push(("max_piece", *sizes.iter().max().unwrap_or(&0) as f64));
            out.push(("oversized", fam.oversized as f64));
            let bad = verify_decomposition(&fam.tree, &fam.decomposition, false).len();
            out.push(("violations", bad as f64));
        }
        Kind::Census | Kind::Sweep | Kind::Sprinkle | Kind::Verify => unreachable!(),
    }
    Ok(out)
}

fn check(cfg: &ExperimentConfig) -> Result<(), ConfigError> {
    let err = |field: &str, message: String| ConfigError {
        origin: "config".into(),
        field: field.into(),
        message,
    };
    if cfg.kind == Kind::Verify {
        return Err(err("kind", "verify runs the acceptance suite, not a trial pipeline".into()));
    }
    if cfg.dims.is_empty() {
        return Err(err("d", "no dimensions".into()));
    }
    if cfg.trials == 0 {
        return Err(err("trials", "trials must be at least 1".into()));
    }
    if cfg.workers == 0 {
        return Err(err("workers", "workers must be at least 1".into()));
    }
    for &d in &cfg.dims {
        let p = cfg.p(d);
        if !(0.0..=1.0).contains(&p) {
            return Err(err("p", format!("p = {p} at d = {d} is not a probability")));
        }
    }
    Ok(())
}

fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

/// Runs every `(d, trial)` job and calls `sink` on the records in
/// `(d, trial)` order as they complete in batches.
pub fn run_streaming(
    cfg: &ExperimentConfig,
    mut sink: impl FnMut(&ExperimentRecord) -> Result<(), RunError>,
) -> Result<(), RunError> {
    check(cfg)?;
    let jobs: Vec<(u32, u64)> = cfg
        .dims
        .iter()
        .flat_map(|&d| (0..cfg.trials).map(move |t| (d, t)))
        .collect();
    let pool = pool(cfg.workers);
    let batch = cfg.workers * 4;
    for chunk in jobs.chunks(batch) {
        let records: Vec<qperc::Result<ExperimentRecord>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&(d, trial)| {
                    let seed = record_seed(cfg.seed, d, trial);
                    let start = Instant::now();
                    let metrics = measure(cfg, d, seed)?;
                    let wall = start.elapsed().as_secs_f64() * 1e3;
                    Ok(ExperimentRecord {
                        experiment: cfg.kind,
                        d,
                        p: cfg.p(d),
                        q2: if cfg.kind == Kind::Sprinkle {
                            Some(cfg.q2.unwrap_or_else(|| default_q2(d)))
                        } else {
                            cfg.q2
                        },
                        trial,
                        seed,
                        metrics,
                        wall_ms: cfg.timing.then_some(wall),
                        workers: cfg.workers,
                    })
                })
                .collect()
        });
        for r in records {
            sink(&r?)?;
        }
    }
    Ok(())
}

pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>, RunError> {
    let mut out = Vec::new();
    run_streaming(cfg, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

pub struct CsvSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvSink<W> {
    pub fn new(inner: W) -> Result<Self, RunError> {
        let mut writer = csv::Writer::from_writer(inner);
        writer.write_record(CSV_COLUMNS)?;
        Ok(CsvSink { writer })
    }

    pub fn write(&mut self, r: &ExperimentRecord) -> Result<(), RunError> {
        let fixed = [
            r.experiment.name().to_string(),
            r.d.to_string(),
            r.p.to_string(),
            r.q2.map(|q| q.to_string()).unwrap_or_default(),
            r.trial.to_string(),
            r.seed.to_string(),
        ];
        let wall = r.wall_ms.map(|w| format!("{w:.3}")).unwrap_or_default();
        for (metric, value) in &r.metrics {
            let mut row: Vec<String> = fixed.to_vec();
            row.push(metric.to_string());
            row.push(value.to_string());
            row.push(wall.clone());
            row.push(r.workers.to_string());
            self.writer.write_record(&row)?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W, RunError> {
        self.writer.flush()?;
        self.writer
            .into_inner()
            .map_err(|e| RunError::Io(std::io::Error::other(e.to_string())))
    }
}

/// Runs `cfg` and returns the CSV bytes.
pub fn run_to_csv(cfg: &ExperimentConfig) -> Result<Vec<u8>, RunError> {
    let mut sink = CsvSink::new(Vec::new())?;
    run_streaming(cfg, |r| sink.write(r))?;
    sink.finish()
}

/// Runs `cfg`, streaming rows to `path`, and writes the plot script beside
/// it. Returns the script path.
pub fn run_to_file(cfg: &ExperimentConfig, path: &Path) -> Result<std::path::PathBuf, RunError> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    let mut sink = CsvSink::new(file)?;
    let mut metrics: Vec<&'static str> = Vec::new();
    run_streaming(cfg, |r| {
        for (m, _) in &r.metrics {
            if !metrics.contains(m) {
                metrics.push(m);
            }
        }
        sink.write(r)
    })?;
    sink.finish()?.flush()?;
    let script = path.with_extension("gp");
    std::fs::write(&script, crate::plot::gnuplot_script(path, &metrics, cfg.dims.len() > 1))?;
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: Kind, d: u32) -> ExperimentConfig {
        ExperimentConfig {
            kind,
            dims: vec![d],
            workers: 2,
            ..Default::default()
        }
    }

    #[test]
    fn empty_graph_census() {
        let mut c = cfg(Kind::Census, 8);
        c.set("p", "0").unwrap();
        let r = run(&c).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].metric("giant_fraction"), Some(1.0 / 256.0));
        assert_eq!(r[0].metric("components"), Some(256.0));
    }

    #[test]
    fn repeated_runs_are_byte_identical() {
        let mut c = cfg(Kind::Expansion, 8);
        c.trials = 3;
        c.seed = 42;
        let a = run_to_csv(&c).unwrap();
        let b = run_to_csv(&c).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("experiment,d,p,q2,trial,seed,metric,value,wall_ms,workers\n"));
    }

    #[test]
    fn records_follow_trial_order() {
        let mut c = cfg(Kind::Census, 6);
        c.trials = 20;
        c.workers = 3;
        let r = run(&c).unwrap();
        assert!(r.iter().enumerate().all(|(i, rec)| rec.trial == i as u64));
        c.workers = 1;
        let serial = run(&c).unwrap();
        let strip = |v: Vec<ExperimentRecord>| v.into_iter().map(|r| r.metrics).collect::<Vec<_>>();
        assert_eq!(strip(r), strip(serial));
    }

    #[test]
    fn every_kind_runs() {
        for kind in [
            Kind::Expansion,
            Kind::Mixing,
            Kind::Diameter,
            Kind::Cycles,
            Kind::Minors,
            Kind::Decompose,
            Kind::Sprinkle,
        ] {
            let r = run(&cfg(kind, 7)).unwrap();
            assert_eq!(r.len(), 1, "{kind}");
            assert!(r[0].metrics.len() > 5, "{kind}: {:?}", r[0].metrics);
        }
        assert_eq!(run(&cfg(Kind::Verify, 7)).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn exact_cap_above_library_cap_is_reported() {
        let mut c = cfg(Kind::Expansion, 8);
        c.cap_exact = 1 << 20;
        let e = run(&c).unwrap_err();
        assert_eq!(e.exit_code(), 4, "{e}");
    }

    #[test]
    fn timing_is_opt_in() {
        let mut c = cfg(Kind::Census, 6);
        assert_eq!(run(&c).unwrap()[0].wall_ms, None);
        c.timing = true;
        assert!(run(&c).unwrap()[0].wall_ms.is_some());
    }
}
