use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcp_neutral::search::NeutralSelection;
use gcp_neutral_harness::{emit_reports, run_experiment, ExperimentConfig, Mode};

/// Neutrality analysis and neutral-walk iterated local search for graph coloring.
#[derive(Parser)]
#[command(name = "gcpn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Neutral degree of random solutions and local optima.
    Degrees(Common),
    /// Neutral walks on the plateaus of local optima.
    Plateaus(Common),
    /// Solver runs for each MNS coefficient.
    Solve(Common),
    /// All of the above.
    Full(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Selection {
    First,
    Uniform,
}

#[derive(Args)]
struct Common {
    /// DIMACS file or instance name; repeatable.
    #[arg(long = "instance", value_name = "PATH")]
    instances: Vec<String>,
    /// Number of colors (default: chromatic number from the manifest).
    #[arg(long)]
    k: Option<usize>,
    /// Samples per instance, or runs per solver configuration.
    #[arg(long, default_value_t = 30)]
    samples: usize,
    /// MNS coefficients, as multiples of the neighborhood size.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,5")]
    mns: Vec<f64>,
    /// Evaluations per solver run; accepts forms like 2e7.
    #[arg(long, default_value = "2e7", value_parser = parse_count)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Worker threads (default: one per core).
    #[arg(long)]
    jobs: Option<usize>,
    /// Fraction of vertices recolored by a kick.
    #[arg(long, default_value_t = 1.0)]
    kick_fraction: f64,
    /// Run neutral walks even where they are skipped by default.
    #[arg(long)]
    force: bool,
    /// How the perturbation picks its next neighbor.
    #[arg(long, value_enum, default_value = "first")]
    selection: Selection,
    /// Instance metadata file (default: bundled manifest).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}

fn config(mode: Mode, a: Common) -> ExperimentConfig {
    ExperimentConfig {
        instances: a.instances,
        k: a.k,
        mode,
        samples: a.samples,
        mns: a.mns,
        eval_budget: a.budget,
        seed: a.seed,
        out_dir: a.out,
        jobs: a.jobs,
        kick_fraction: a.kick_fraction,
        force: a.force,
        selection: match a.selection {
            Selection::First => NeutralSelection::FirstFound,
            Selection::Uniform => NeutralSelection::Uniform,
        },
        manifest: a.manifest,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let cfg = match cli.command {
        Command::Degrees(a) => config(Mode::Degrees, a),
        Command::Plateaus(a) => config(Mode::Plateaus, a),
        Command::Solve(a) => config(Mode::Solve, a),
        Command::Full(a) => config(Mode::Full, a),
    };
    let outcome = run_experiment(&cfg).and_then(|r| emit_reports(&r, &cfg.out_dir));
    match outcome {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
