use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qperc_harness::acceptance;
use qperc_harness::config::{ExperimentConfig, Kind};
use qperc_harness::run::{run_to_csv, run_to_file, RunError};
use qperc_harness::summary::{summarize_csv, to_json};

#[derive(Parser)]
#[command(name = "qperc", version, about = "Bond percolation experiments on the hypercube")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Component census: giant and second-largest orders.
    Census(RunArgs),
    /// Spectral and exact expansion of the giant.
    Expansion(RunArgs),
    /// Lazy-walk mixing time of the giant.
    Mixing(RunArgs),
    /// Exact diameter of the giant.
    Diameter(RunArgs),
    /// Long-cycle certificates in the giant.
    Cycles(RunArgs),
    /// Clique-minor certificates in the giant.
    Minors(RunArgs),
    /// Piece decomposition of a spanning tree of the giant.
    Decompose(RunArgs),
    /// Two-round sprinkled samples: nesting, attachment, density.
    Sprinkle(RunArgs),
    /// Census over a range of dimensions.
    Sweep(RunArgs),
    /// Run the acceptance suite.
    Verify {
        /// Write the report as JSON to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summary statistics of a results CSV, as JSON.
    Summarize {
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// key=value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dimension, list (10,12) or range (10..=14:2).
    #[arg(long)]
    d: Option<String>,
    #[arg(long, conflicts_with = "p")]
    epsilon: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q2: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// Worker threads; defaults to QPERC_WORKERS or the core count.
    #[arg(long)]
    workers: Option<String>,
    /// Largest component given to the exact exponential-time routines.
    #[arg(long)]
    cap_exact: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Record per-trial wall time (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
}

impl RunArgs {
    fn config(self, kind: Kind) -> Result<ExperimentConfig, RunError> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        cfg.kind = kind;
        let flags = [
            ("d", self.d),
            ("epsilon", self.epsilon),
            ("p", self.p),
            ("q2", self.q2),
            ("trials", self.trials),
            ("seed", self.seed),
            ("out", self.out),
            ("workers", self.workers),
            ("cap_exact", self.cap_exact),
            ("tol", self.tol),
        ];
        cfg.apply_flags(flags.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))))?;
        cfg.timing |= self.timing;
        Ok(cfg)
    }
}

fn run_kind(kind: Kind, args: RunArgs) -> Result<(), RunError> {
    let cfg = args.config(kind)?;
    match &cfg.out {
        Some(path) => {
            let script = run_to_file(&cfg, path)?;
            eprintln!("wrote {} and {}", path.display(), script.display());
        }
        None => std::io::stdout().write_all(&run_to_csv(&cfg)?)?,
    }
    Ok(())
}

fn verify(out: Option<PathBuf>) -> ExitCode {
    let mut report = Vec::new();
    let mut all = true;
    for (_, _, criterion) in acceptance::CRITERIA {
        let o = criterion();
        let _ = writeln!(std::io::stdout().lock(), "{}", o.line());
        all &= o.pass;
        report.push(serde_json::json!({
            "id": o.id,
            "name": o.name,
            "pass": o.pass,
            "measured": o.measured,
            "seconds": o.elapsed.as_secs_f64(),
        }));
    }
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&report).expect("serializable");
        if let Err(e) = std::fs::write(&path, text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn summarize(csv: PathBuf, out: Option<PathBuf>) -> ExitCode {
    let result = std::fs::File::open(&csv)
        .map_err(|e| e.to_string())
        .and_then(|f| summarize_csv(f).map_err(|e| e.to_string()));
    let groups = match result {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {}: {e}", csv.display());
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&to_json(&groups)).expect("serializable");
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Verify { out } => return verify(out),
        Command::Summarize { csv, out } => return summarize(csv, out),
        Command::Census(a) => (Kind::Census, a),
        Command::Expansion(a) => (Kind::Expansion, a),
        Command::Mixing(a) => (Kind::Mixing, a),
        Command::Diameter(a) => (Kind::Diameter, a),
        Command::Cycles(a) => (Kind::Cycles, a),
        Command::Minors(a) => (Kind::Minors, a),
        Command::Decompose(a) => (Kind::Decompose, a),
        Command::Sprinkle(a) => (Kind::Sprinkle, a),
        Command::Sweep(a) => (Kind::Sweep, a),
    };
    match run_kind(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
