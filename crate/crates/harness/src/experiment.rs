//! The three experiments: neutral degrees, plateau walks and solver runs.
//!
//! Seeds: each instance gets `derive_seed(base, stream_id(name), 0)`. The
//! sampling tasks split that seed further by task index (see
//! `gcp_neutral::landscape::streams`), and solver run `r` of every MNS
//! configuration uses `derive_seed(instance_seed, stream_id("solve"), r)`,
//! so all configurations start from the same solutions.

use gcp_neutral::landscape::{
    plateau_battery, sample_descent, sample_random, BatteryOptions, BatteryReport, DescentRule,
};
use gcp_neutral::search::{nils, Mns, NilsConfig, RunRecord};
use gcp_neutral::seeds::{derive_seed, stream_id};
use gcp_neutral::stats::{mean, StatSummary};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::instance::Instance;
use crate::HarnessError;

/// Walks are skipped above this neighborhood size unless forced.
pub const MAX_WALK_NBH: usize = 16_000;
/// Walks are skipped below this mean local-optimum neutral ratio unless forced.
pub const MIN_LO_RATIO: f64 = 0.01;

pub fn instance_seed(base: u64, instance: &str) -> u64 {
    derive_seed(base, stream_id(instance), 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Random,
    Optimum,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeSample {
    pub kind: SampleKind,
    pub index: usize,
    pub fitness: usize,
    pub neutral: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeResult {
    pub instance: String,
    pub n: usize,
    pub k: usize,
    pub nbh: usize,
    pub nd_random: f64,
    pub ratio_random: f64,
    pub nd_lo: f64,
    pub ratio_lo: f64,
    pub samples: Vec<DegreeSample>,
}

/// Neutral degree of random solutions and of descent local optima.
pub fn run_degrees(inst: &Instance, cfg: &ExperimentConfig) -> Result<DegreeResult, HarnessError> {
    let seed = instance_seed(cfg.seed, &inst.name);
    let (g, k) = (&inst.graph, inst.k);
    let random = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let (s, c) = sample_random(g, k, seed, i)?;
            let fitness = gcp_neutral::fitness(g, &s)?;
            Ok(DegreeSample {
                kind: SampleKind::Random,
                index: i,
                fitness,
                neutral: c.neutral,
                ratio: c.ratio(),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let optima = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let d = sample_descent(g, k, DescentRule::default(), seed, i)?;
            Ok(DegreeSample {
                kind: SampleKind::Optimum,
                index: i,
                fitness: d.fitness,
                neutral: d.optimum_neighbors.neutral,
                ratio: d.optimum_neighbors.ratio(),
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let avg = |v: &[DegreeSample], f: fn(&DegreeSample) -> f64| {
        mean(&v.iter().map(f).collect::<Vec<_>>()).unwrap_or(0.0)
    };
    Ok(DegreeResult {
        instance: inst.name.clone(),
        n: g.n(),
        k,
        nbh: inst.nbh_size(),
        nd_random: avg(&random, |s| s.neutral as f64),
        ratio_random: avg(&random, |s| s.ratio),
        nd_lo: avg(&optima, |s| s.neutral as f64),
        ratio_lo: avg(&optima, |s| s.ratio),
        samples: random.into_iter().chain(optima).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlateauResult {
    pub instance: String,
    pub n: usize,
    pub nbh: usize,
    pub report: BatteryReport,
}

/// Descents plus one neutral walk per optimum.
///
/// Without `force`, walks are skipped on instances whose neighborhood exceeds
/// [`MAX_WALK_NBH`] or whose optima have a mean neutral ratio below
/// [`MIN_LO_RATIO`]; the descent statistics are still reported.
pub fn run_plateaus(
    inst: &Instance,
    cfg: &ExperimentConfig,
) -> Result<PlateauResult, HarnessError> {
    let mut opts = BatteryOptions::new(cfg.samples, instance_seed(cfg.seed, &inst.name));
    let too_large = !cfg.force && inst.nbh_size() > MAX_WALK_NBH;
    if !cfg.force {
        // An infinite threshold makes the battery skip the walks outright.
        opts.min_lo_ratio = Some(if too_large {
            f64::INFINITY
        } else {
            MIN_LO_RATIO
        });
    }
    let mut report = plateau_battery(&inst.graph, inst.k, &opts)?;
    if too_large {
        report.walks_skipped = Some(format!(
            "neighborhood size {} above {}",
            inst.nbh_size(),
            MAX_WALK_NBH
        ));
    }
    Ok(PlateauResult {
        instance: inst.name.clone(),
        n: inst.graph.n(),
        nbh: inst.nbh_size(),
        report,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigResult {
    /// MNS coefficient.
    pub mns: f64,
    pub label: String,
    pub runs: Vec<RunRecord>,
}

impl ConfigResult {
    pub fn fitness_summary(&self) -> Option<StatSummary> {
        StatSummary::from_values(self.runs.iter().map(|r| r.best_fitness as f64))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub instance: String,
    pub k: usize,
    pub nbh: usize,
    pub configs: Vec<ConfigResult>,
}

impl SolveResult {
    /// Median final fitness of the `mns = 0` configuration, if it was run.
    pub fn ils_median(&self) -> Option<f64> {
        self.configs
            .iter()
            .find(|c| c.mns == 0.0)
            .and_then(|c| c.fitness_summary())
            .map(|s| s.median)
    }
}

pub fn mns_label(coefficient: f64) -> String {
    format!("mns={coefficient}")
}

/// `samples` seeded solver runs for every MNS coefficient.
pub fn run_solve(inst: &Instance, cfg: &ExperimentConfig) -> Result<SolveResult, HarnessError> {
    let seed = instance_seed(cfg.seed, &inst.name);
    let tasks: Vec<(usize, usize)> = (0..cfg.mns.len())
        .flat_map(|c| (0..cfg.samples).map(move |r| (c, r)))
        .collect();
    let records = tasks
        .par_iter()
        .map(|&(c, r)| {
            let mut nc = NilsConfig::new(
                Mns::Coefficient(cfg.mns[c]),
                cfg.eval_budget,
                derive_seed(seed, stream_id("solve"), r as u64),
            );
            nc.kick_fraction = cfg.kick_fraction;
            nc.selection = cfg.selection;
            nils(&inst.graph, inst.k, &nc)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut records = records.into_iter();
    let configs = cfg
        .mns
        .iter()
        .map(|&mns| ConfigResult {
            mns,
            label: mns_label(mns),
            runs: records.by_ref().take(cfg.samples).collect(),
        })
        .collect();
    Ok(SolveResult {
        instance: inst.name.clone(),
        k: inst.k,
        nbh: inst.nbh_size(),
        configs,
    })
}
