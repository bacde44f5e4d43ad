//! Experiment orchestration for the `gcp-neutral` toolkit: load instances,
//! run the neutrality measurements and solver comparisons on a worker pool,
//! and write tables and per-run records.

pub mod config;
pub mod experiment;
pub mod instance;
pub mod report;

use std::path::PathBuf;

use gcp_neutral::coloring::ColoringError;
use gcp_neutral::graph::ParseError;
use gcp_neutral::landscape::LandscapeError;
use gcp_neutral::search::SearchError;
use thiserror::Error;

pub use config::{ExperimentConfig, Mode};
pub use experiment::{run_degrees, run_plateaus, run_solve};
pub use instance::{load_instance, Instance};
pub use report::{emit_reports, Results};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("instance file missing for `{name}` (searched {searched:?})")]
    MissingInstance {
        name: String,
        searched: Vec<PathBuf>,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Landscape(#[from] LandscapeError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("output: {0}")]
    Output(String),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    /// Process exit code: 2 for unreadable instance files, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Parse { .. } => 2,
            _ => 1,
        }
    }
}

/// Loads every instance, runs the experiments selected by the mode on a
/// pool of `cfg.jobs` threads and returns the results in instance order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Results, HarnessError> {
    cfg.validate()?;
    let manifest = instance::load_manifest_entries(cfg.manifest.as_deref())?;
    let dirs = instance::instance_dirs();
    let instances = cfg
        .instance_list()
        .iter()
        .map(|target| load_instance(target, &dirs, &manifest, cfg.k))
        .collect::<Result<Vec<_>, _>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))?;
    pool.install(|| {
        let mut results = Results::default();
        for inst in &instances {
            if cfg.mode.degrees() {
                results.degrees.push(run_degrees(inst, cfg)?);
            }
            if cfg.mode.plateaus() {
                let p = run_plateaus(inst, cfg)?;
                if let Some(why) = &p.report.walks_skipped {
                    eprintln!(
                        "{}: walks skipped ({why}); use --force to run them",
                        inst.name
                    );
                }
                results.plateaus.push(p);
            }
            if cfg.mode.solve() {
                results.solves.push(run_solve(inst, cfg)?);
            }
        }
        Ok(results)
    })
}
