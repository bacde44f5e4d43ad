//! Landscape measurements: random sampling, steepest descents to local
//! optima, neutral random walks over the plateaus of those optima, and the
//! autocorrelation of the neutral degree along a walk.
//!
//! A walk starting at a local optimum is classified as
//!
//! - `T1`: the optimum has no neutral neighbor, the plateau is a single point;
//! - `T2`: no visited solution had an improving neighbor;
//! - `T3`: some visited solution (a *portal*) had an improving neighbor.
//!
//! Walks keep going after the first portal so that the neutral-degree series
//! covers the whole length limit.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{canonicalize, Color, Coloring, ColoringError, ConflictState};
use crate::graph::Graph;
use crate::neighborhood::{
    classify, Budget, Move, MoveScan, NeighborClassification, NeighborhoodError,
};
use crate::seeds::task_rng;
use crate::stats::StatSummary;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LandscapeError {
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Neighborhood(#[from] NeighborhoodError),
    #[error("walk start is not a local optimum ({improving} improving neighbors)")]
    NotLocalOptimum { improving: usize },
    #[error("autocorrelation needs at least 2 values, got {0}")]
    SeriesTooShort(usize),
}

/// Uniform random coloring with colors drawn from `1..=k`, canonicalized.
pub fn random_solution<R: Rng + ?Sized>(g: &Graph, k: usize, rng: &mut R) -> Coloring {
    assert!(k >= 1, "palette must have at least one color");
    let raw: Vec<Color> = (0..g.n()).map(|_| rng.gen_range(1..=k as Color)).collect();
    canonicalize(&raw, Some(k)).expect("draws lie in 1..=k")
}

/// Full classification of the neighborhood plus one neutral move drawn
/// uniformly (reservoir sampling) in the same pass.
fn survey<R: Rng + ?Sized>(
    state: &ConflictState<'_>,
    rng: &mut R,
    budget: &mut Budget,
) -> (NeighborClassification, Option<Move>) {
    let k = state.k() as Color;
    let mut class = NeighborClassification::default();
    let mut pick = None;
    for v in 0..state.n() {
        let current = state.color(v);
        let here = state.neighbor_count(v, current);
        for c in (1..=k).filter(|&c| c != current) {
            match state.neighbor_count(v, c).cmp(&here) {
                std::cmp::Ordering::Less => class.improving += 1,
                std::cmp::Ordering::Greater => class.worsening += 1,
                std::cmp::Ordering::Equal => {
                    class.neutral += 1;
                    if rng.gen_range(0..class.neutral) == 0 {
                        pick = Some(Move { v, color: c });
                    }
                }
            }
        }
    }
    class.total = state.neighborhood_size();
    budget.charge(class.total as u64);
    (class, pick)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentReport {
    pub start: Coloring,
    pub optimum: Coloring,
    pub start_fitness: usize,
    pub fitness: usize,
    /// Accepted moves (L).
    pub step_length: usize,
    pub evaluations: u64,
    /// Neighborhood of the optimum, from the final scan.
    pub optimum_neighbors: NeighborClassification,
}

/// Move acceptance rule of a descent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DescentRule {
    /// Scan the neighborhood in a fresh random order and take the first
    /// improving move (the hill climber NILS uses).
    #[default]
    FirstImprovement,
    /// Scan everything and take a move of minimal negative delta, ties
    /// broken uniformly.
    BestImprovement,
}

/// Descent from `start` to a local optimum under `rule`.
pub fn descend<R: Rng + ?Sized>(
    g: &Graph,
    start: &Coloring,
    rule: DescentRule,
    rng: &mut R,
) -> Result<DescentReport, LandscapeError> {
    match rule {
        DescentRule::FirstImprovement => first_improvement_descent(g, start, rng),
        DescentRule::BestImprovement => steepest_descent(g, start, rng),
    }
}

/// First-improvement descent; the scan that finds no improving move is a
/// complete pass, so it also yields the classification of the optimum.
pub fn first_improvement_descent<R: Rng + ?Sized>(
    g: &Graph,
    start: &Coloring,
    rng: &mut R,
) -> Result<DescentReport, LandscapeError> {
    let mut state = ConflictState::new(g, start)?;
    if state.k() < 2 {
        return Err(NeighborhoodError::DegenerateK(state.k()).into());
    }
    let start_fitness = state.conflicts();
    let mut budget = Budget::unlimited();
    let mut scan = MoveScan::new();
    let mut steps = 0;
    'scan: loop {
        let mut class = NeighborClassification::default();
        scan.reset(&state);
        while let Some(m) = scan.next_move(&state, rng) {
            budget.charge(1);
            let d = state.delta_unchecked(m.v, m.color);
            if d < 0 {
                state.recolor(m.v, m.color);
                steps += 1;
                continue 'scan;
            }
            if d == 0 {
                class.neutral += 1;
            } else {
                class.worsening += 1;
            }
        }
        class.total = state.neighborhood_size();
        return Ok(DescentReport {
            start: start.clone(),
            optimum: state.canonical(),
            start_fitness,
            fitness: state.conflicts(),
            step_length: steps,
            evaluations: budget.used(),
            optimum_neighbors: class,
        });
    }
}

/// Best-improvement descent: every step scans the whole neighborhood and
/// takes a move of minimal negative delta, ties broken uniformly.
pub fn steepest_descent<R: Rng + ?Sized>(
    g: &Graph,
    start: &Coloring,
    rng: &mut R,
) -> Result<DescentReport, LandscapeError> {
    let mut state = ConflictState::new(g, start)?;
    if state.k() < 2 {
        return Err(NeighborhoodError::DegenerateK(state.k()).into());
    }
    let start_fitness = state.conflicts();
    let mut budget = Budget::unlimited();
    let mut steps = 0;
    let k = state.k() as Color;
    loop {
        let mut class = NeighborClassification::default();
        let mut best_delta = 0i64;
        let mut ties = 0u32;
        let mut chosen = None;
        for v in 0..state.n() {
            let current = state.color(v);
            let here = state.neighbor_count(v, current) as i64;
            for c in (1..=k).filter(|&c| c != current) {
                let d = state.neighbor_count(v, c) as i64 - here;
                match d.signum() {
                    -1 => class.improving += 1,
                    0 => class.neutral += 1,
                    _ => class.worsening += 1,
                }
                if d < best_delta {
                    best_delta = d;
                    ties = 1;
                    chosen = Some(Move { v, color: c });
                } else if d < 0 && d == best_delta {
                    ties += 1;
                    if rng.gen_range(0..ties) == 0 {
                        chosen = Some(Move { v, color: c });
                    }
                }
            }
        }
        class.total = state.neighborhood_size();
        budget.charge(class.total as u64);
        match chosen {
            Some(m) => {
                state.recolor(m.v, m.color);
                steps += 1;
            }
            None => {
                return Ok(DescentReport {
                    start: start.clone(),
                    optimum: state.canonical(),
                    start_fitness,
                    fitness: state.conflicts(),
                    step_length: steps,
                    evaluations: budget.used(),
                    optimum_neighbors: class,
                });
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Typology {
    T1,
    T2,
    T3,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkReport {
    pub typology: Typology,
    /// P_max, the maximum number of neutral steps.
    pub length_limit: usize,
    pub steps_taken: usize,
    /// Neutral steps taken before reaching the first portal (nbS).
    pub portal_index: Option<usize>,
    /// Visited solutions that had at least one improving neighbor.
    pub portals_seen: usize,
    /// Distinct solutions (up to color permutation) visited at least twice.
    pub revisits: usize,
    /// Neutral degree of every visited solution, start included.
    pub nd_series: Vec<usize>,
    pub fitness: usize,
    /// The walk stopped before the limit because no neutral move existed.
    pub dead_ended: bool,
    pub evaluations: u64,
    /// Canonical form of every visited solution, when requested.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub path: Vec<Coloring>,
}

/// Neutral random walk of at most `length_limit` steps from a local optimum.
///
/// Each visited solution has its whole neighborhood classified; the next
/// solution is drawn uniformly among its neutral neighbors.
pub fn neutral_walk<R: Rng + ?Sized>(
    g: &Graph,
    start: &Coloring,
    length_limit: usize,
    rng: &mut R,
) -> Result<WalkReport, LandscapeError> {
    walk(g, start, length_limit, false, rng)
}

/// [`neutral_walk`] that also records the visited solutions in `path`.
pub fn neutral_walk_traced<R: Rng + ?Sized>(
    g: &Graph,
    start: &Coloring,
    length_limit: usize,
    rng: &mut R,
) -> Result<WalkReport, LandscapeError> {
    walk(g, start, length_limit, true, rng)
}

fn walk<R: Rng + ?Sized>(
    g: &Graph,
    start: &Coloring,
    length_limit: usize,
    record_path: bool,
    rng: &mut R,
) -> Result<WalkReport, LandscapeError> {
    let mut state = ConflictState::new(g, start)?;
    if state.k() < 2 {
        return Err(NeighborhoodError::DegenerateK(state.k()).into());
    }
    let mut budget = Budget::unlimited();
    let (first, mut next) = survey(&state, rng, &mut budget);
    if first.improving > 0 {
        return Err(LandscapeError::NotLocalOptimum {
            improving: first.improving,
        });
    }

    let mut path = Vec::new();
    let mut visits: HashMap<Vec<Color>, u32> = HashMap::new();
    let canonical = state.canonical();
    visits.insert(canonical.colors().to_vec(), 1);
    if record_path {
        path.push(canonical);
    }
    let mut nd_series = vec![first.neutral];
    let mut steps = 0;
    let mut portal_index = None;
    let mut portals_seen = 0;
    let mut dead_ended = false;

    while steps < length_limit {
        let Some(m) = next else {
            dead_ended = steps > 0;
            break;
        };
        state.recolor(m.v, m.color);
        steps += 1;
        let canonical = state.canonical();
        *visits.entry(canonical.colors().to_vec()).or_insert(0) += 1;
        if record_path {
            path.push(canonical);
        }

        let (class, pick) = survey(&state, rng, &mut budget);
        nd_series.push(class.neutral);
        if class.improving > 0 {
            portals_seen += 1;
            portal_index.get_or_insert(steps);
        }
        next = pick;
    }

    let typology = if first.neutral == 0 {
        Typology::T1
    } else if portal_index.is_some() {
        Typology::T3
    } else {
        Typology::T2
    };
    Ok(WalkReport {
        typology,
        length_limit,
        steps_taken: steps,
        portal_index,
        portals_seen,
        revisits: visits.values().filter(|&&count| count >= 2).count(),
        nd_series,
        fitness: state.conflicts(),
        dead_ended,
        evaluations: budget.used(),
        path,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutocorrReport {
    /// `rho[i]` is the autocorrelation at lag `i + 1`.
    pub rho: Vec<f64>,
    /// False when the series is constant; `rho` is then empty.
    pub defined: bool,
}

impl AutocorrReport {
    pub fn rho1(&self) -> Option<f64> {
        self.rho.first().copied()
    }
}

/// Sample autocorrelation for lags `1..=max_lag` (capped at `len - 1`):
/// `sum_i (x_i - mean)(x_{i+k} - mean) / sum_i (x_i - mean)^2`.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<AutocorrReport, LandscapeError> {
    let len = series.len();
    if len < 2 {
        return Err(LandscapeError::SeriesTooShort(len));
    }
    let mean = series.iter().sum::<f64>() / len as f64;
    let centered: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let variance: f64 = centered.iter().map(|d| d * d).sum();
    if variance == 0.0 {
        return Ok(AutocorrReport {
            rho: Vec::new(),
            defined: false,
        });
    }
    let rho = (1..=max_lag.min(len - 1))
        .map(|lag| {
            let cov: f64 = centered
                .iter()
                .zip(&centered[lag..])
                .map(|(a, b)| a * b)
                .sum();
            cov / variance
        })
        .collect();
    Ok(AutocorrReport { rho, defined: true })
}

/// Lags reported for the neutral-degree autocorrelation.
pub const MAX_LAG: usize = 10;

/// Seed streams used by the sampling tasks.
pub mod streams {
    pub const RANDOM_SOLUTION: u64 = 1;
    pub const DESCENT: u64 = 2;
    pub const WALK: u64 = 3;
}

/// Random solution number `index` of a sample and its neighborhood.
pub fn sample_random(
    g: &Graph,
    k: usize,
    seed: u64,
    index: usize,
) -> Result<(Coloring, NeighborClassification), LandscapeError> {
    let mut rng = task_rng(seed, streams::RANDOM_SOLUTION, index as u64);
    let s = random_solution(g, k, &mut rng);
    let state = ConflictState::new(g, &s)?;
    let class = classify(&state, &mut Budget::unlimited())?;
    Ok((s, class))
}

/// Descent number `index` of a sample, from its own random start.
pub fn sample_descent(
    g: &Graph,
    k: usize,
    rule: DescentRule,
    seed: u64,
    index: usize,
) -> Result<DescentReport, LandscapeError> {
    let mut rng = task_rng(seed, streams::DESCENT, index as u64);
    let start = random_solution(g, k, &mut rng);
    descend(g, &start, rule, &mut rng)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryOptions {
    pub samples: usize,
    pub seed: u64,
    pub descent: DescentRule,
    /// Walk length; defaults to the longest descent (L_max).
    pub walk_limit: Option<usize>,
    /// Skip the walks when the mean local-optimum neutral ratio is below this.
    pub min_lo_ratio: Option<f64>,
}

impl BatteryOptions {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            descent: DescentRule::default(),
            walk_limit: None,
            min_lo_ratio: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatterySummary {
    pub t1: usize,
    pub t2: usize,
    pub t3: usize,
    /// nbS over the T3 walks.
    pub portal_steps: Option<StatSummary>,
    /// Descent step lengths L.
    pub step_lengths: Option<StatSummary>,
    /// Mean of the per-walk rho(1) over walks where it is defined.
    pub rho1_mean: Option<f64>,
    pub rho1_defined: usize,
    pub revisits: usize,
    pub lo_nd_mean: Option<f64>,
    pub lo_ratio_mean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub k: usize,
    pub descents: Vec<DescentReport>,
    pub walk_limit: usize,
    pub walks: Vec<WalkReport>,
    pub autocorrelations: Vec<Option<AutocorrReport>>,
    /// Why the walks were not run, if they were not.
    pub walks_skipped: Option<String>,
    pub summary: BatterySummary,
}

/// Descents from `samples` random solutions, then one neutral walk from
/// each optimum, with length limit L_max unless overridden.
///
/// Tasks run on the current rayon pool; results are gathered in task order.
pub fn plateau_battery(
    g: &Graph,
    k: usize,
    opts: &BatteryOptions,
) -> Result<BatteryReport, LandscapeError> {
    let descents = (0..opts.samples)
        .into_par_iter()
        .map(|i| sample_descent(g, k, opts.descent, opts.seed, i))
        .collect::<Result<Vec<_>, _>>()?;
    let walk_limit = opts
        .walk_limit
        .unwrap_or_else(|| descents.iter().map(|d| d.step_length).max().unwrap_or(0));

    let lo_ratios: Vec<f64> = descents
        .iter()
        .map(|d| d.optimum_neighbors.ratio())
        .collect();
    let lo_ratio_mean = crate::stats::mean(&lo_ratios);
    let walks_skipped = match (opts.min_lo_ratio, lo_ratio_mean) {
        (Some(min), Some(r)) if r < min => Some(format!(
            "mean local-optimum neutral ratio {:.4} below {:.4}",
            r, min
        )),
        _ => None,
    };

    let walks = if walks_skipped.is_some() {
        Vec::new()
    } else {
        descents
            .par_iter()
            .enumerate()
            .map(|(i, d)| {
                let mut rng = task_rng(opts.seed, streams::WALK, i as u64);
                neutral_walk(g, &d.optimum, walk_limit, &mut rng)
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let autocorrelations: Vec<Option<AutocorrReport>> = walks
        .iter()
        .map(|w| {
            let series: Vec<f64> = w.nd_series.iter().map(|&x| x as f64).collect();
            autocorrelation(&series, MAX_LAG).ok()
        })
        .collect();

    let count = |t| walks.iter().filter(|w| w.typology == t).count();
    let rho1: Vec<f64> = autocorrelations
        .iter()
        .filter_map(|a| a.as_ref().and_then(AutocorrReport::rho1))
        .collect();
    let summary = BatterySummary {
        t1: count(Typology::T1),
        t2: count(Typology::T2),
        t3: count(Typology::T3),
        portal_steps: StatSummary::from_values(
            walks
                .iter()
                .filter_map(|w| w.portal_index.map(|p| p as f64)),
        ),
        step_lengths: StatSummary::from_values(descents.iter().map(|d| d.step_length as f64)),
        rho1_mean: crate::stats::mean(&rho1),
        rho1_defined: rho1.len(),
        revisits: walks.iter().map(|w| w.revisits).sum(),
        lo_nd_mean: crate::stats::mean(
            &descents
                .iter()
                .map(|d| d.optimum_neighbors.neutral as f64)
                .collect::<Vec<_>>(),
        ),
        lo_ratio_mean,
    };
    Ok(BatteryReport {
        k,
        descents,
        walk_limit,
        walks,
        autocorrelations,
        walks_skipped,
        summary,
    })
}
