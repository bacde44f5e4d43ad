use std::path::PathBuf;

use gcp_neutral::search::NeutralSelection;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Instances analyzed by `full` when none are given.
pub const DEFAULT_INSTANCES: [&str; 4] = ["dsjc250.5", "r250.5", "flat300_28_0", "le450_25c"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Degrees,
    Plateaus,
    Solve,
    Full,
}

impl Mode {
    pub fn degrees(self) -> bool {
        matches!(self, Mode::Degrees | Mode::Full)
    }

    pub fn plateaus(self) -> bool {
        matches!(self, Mode::Plateaus | Mode::Full)
    }

    pub fn solve(self) -> bool {
        matches!(self, Mode::Solve | Mode::Full)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Instance files, or bare names looked up in the instance directories.
    pub instances: Vec<String>,
    /// Number of colors; defaults to the manifest's chromatic number.
    pub k: Option<usize>,
    pub mode: Mode,
    pub samples: usize,
    /// MNS coefficients, as multiples of the neighborhood size.
    pub mns: Vec<f64>,
    pub eval_budget: u64,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses one per core.
    pub jobs: Option<usize>,
    pub kick_fraction: f64,
    /// Run walks even on instances the default filter would skip.
    pub force: bool,
    pub selection: NeutralSelection,
    /// Manifest override; the bundled one is used otherwise.
    pub manifest: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(mode: Mode) -> Self {
        Self {
            instances: Vec::new(),
            k: None,
            mode,
            samples: 30,
            mns: vec![0.0, 1.0, 2.0, 5.0],
            eval_budget: 20_000_000,
            seed: 1,
            out_dir: PathBuf::from("results"),
            jobs: None,
            kick_fraction: 1.0,
            force: false,
            selection: NeutralSelection::FirstFound,
            manifest: None,
        }
    }

    /// Instance list with the `full` default applied.
    pub fn instance_list(&self) -> Vec<String> {
        if self.instances.is_empty() && self.mode == Mode::Full {
            DEFAULT_INSTANCES.iter().map(|s| s.to_string()).collect()
        } else {
            self.instances.clone()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: String| Err(HarnessError::Config(msg));
        if self.instance_list().is_empty() {
            return fail("no instance given".into());
        }
        if self.samples == 0 {
            return fail("samples must be at least 1".into());
        }
        if self.eval_budget == 0 {
            return fail("evaluation budget must be positive".into());
        }
        if matches!(self.k, Some(k) if k < 2) {
            return fail("k must be at least 2".into());
        }
        if self.jobs == Some(0) {
            return fail("jobs must be at least 1".into());
        }
        if !(self.kick_fraction > 0.0 && self.kick_fraction <= 1.0) {
            return fail(format!(
                "kick fraction {} outside (0, 1]",
                self.kick_fraction
            ));
        }
        if self.mode.solve() {
            if self.mns.is_empty() {
                return fail("empty MNS list".into());
            }
            if let Some(c) = self.mns.iter().find(|c| !(c.is_finite() && **c >= 0.0)) {
                return fail(format!(
                    "MNS coefficient {c} must be finite and non-negative"
                ));
            }
        }
        Ok(())
    }
}
