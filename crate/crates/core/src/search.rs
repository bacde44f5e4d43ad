//! Local search for the k-coloring problem.
//!
//! NILS alternates a first-improvement hill climber with a neutral walk
//! based perturbation: from a local optimum it takes up to `mns` neutral
//! steps looking for an improving neighbor, and kicks the solution when none
//! turns up. With `mns = 0` it degenerates into a plain iterated local search
//! that kicks at every local optimum.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, Coloring, ConflictState};
use crate::graph::Graph;
use crate::landscape::random_solution;
use crate::neighborhood::{Budget, Move, MoveScan};
use crate::seeds::TaskRng;

/// Maximum number of neutral steps per perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Mns {
    /// Multiple of the neighborhood size `n * (k - 1)`.
    Coefficient(f64),
    Steps(u64),
}

impl Mns {
    pub fn steps(&self, neighborhood_size: usize) -> u64 {
        match *self {
            Mns::Coefficient(c) => (c * neighborhood_size as f64).round() as u64,
            Mns::Steps(s) => s,
        }
    }
}

/// How the perturbation picks its next non-worsening neighbor.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum NeutralSelection {
    /// First move with delta <= 0 in a fresh random scan.
    #[default]
    FirstFound,
    /// Full scan, then uniform among all moves with delta <= 0.
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NilsConfig {
    pub mns: Mns,
    /// Fraction of vertices recolored by a kick, in (0, 1].
    pub kick_fraction: f64,
    pub eval_budget: u64,
    pub seed: u64,
    pub selection: NeutralSelection,
}

impl NilsConfig {
    pub fn new(mns: Mns, eval_budget: u64, seed: u64) -> Self {
        Self {
            mns,
            kick_fraction: 1.0,
            eval_budget,
            seed,
            selection: NeutralSelection::FirstFound,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if !(self.kick_fraction > 0.0 && self.kick_fraction <= 1.0) {
            return Err(SearchError::KickFraction(self.kick_fraction));
        }
        if self.eval_budget == 0 {
            return Err(SearchError::ZeroBudget);
        }
        if let Mns::Coefficient(c) = self.mns {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(SearchError::NegativeMns(c));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SearchError {
    #[error("kick fraction {0} outside (0, 1]")]
    KickFraction(f64),
    #[error("evaluation budget must be positive")]
    ZeroBudget,
    #[error("MNS coefficient {0} must be a finite non-negative number")]
    NegativeMns(f64),
    #[error("k must be at least 1")]
    EmptyPalette,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FihcOutcome {
    LocalOptimum,
    BudgetExhausted,
}

/// First-improvement hill climbing. Each scan draws a fresh random order of
/// all moves and evaluates each at most once; the first improving move is
/// applied and a new scan starts. Ends when a full scan finds nothing.
pub fn fihc<R: Rng + ?Sized>(
    state: &mut ConflictState<'_>,
    rng: &mut R,
    budget: &mut Budget,
) -> FihcOutcome {
    fihc_with(state, &mut MoveScan::new(), rng, budget)
}

fn fihc_with<R: Rng + ?Sized>(
    state: &mut ConflictState<'_>,
    scan: &mut MoveScan,
    rng: &mut R,
    budget: &mut Budget,
) -> FihcOutcome {
    'scan: loop {
        scan.reset(state);
        while let Some(m) = scan.next_move(state, rng) {
            if !budget.try_charge() {
                return FihcOutcome::BudgetExhausted;
            }
            if state.delta_unchecked(m.v, m.color) < 0 {
                state.recolor(m.v, m.color);
                continue 'scan;
            }
        }
        return FihcOutcome::LocalOptimum;
    }
}

/// Recolors `ceil(fraction * n)` distinct vertices, each with a color drawn
/// uniformly from the palette.
pub fn kick<R: Rng + ?Sized>(state: &mut ConflictState<'_>, fraction: f64, rng: &mut R) {
    let n = state.n();
    if n == 0 {
        return;
    }
    let count = ((fraction * n as f64).ceil() as usize).clamp(1, n);
    let k = state.k() as Color;
    for v in sample(rng, n, count) {
        let c = rng.gen_range(1..=k);
        state.recolor(v, c);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NwpOutcome {
    /// Moved to a strictly better solution.
    Improved,
    /// No improvement within the step limit; the solution was kicked.
    Kicked,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NwpResult {
    pub outcome: NwpOutcome,
    /// Accepted moves, the improving one included.
    pub steps: u64,
}

/// Neutral walk based perturbation from a local optimum.
///
/// While fewer than `mns` steps were taken, no improvement was found and a
/// non-worsening neighbor exists: move to such a neighbor. If the loop ends
/// without improvement the solution is kicked.
pub fn nwp<R: Rng + ?Sized>(
    state: &mut ConflictState<'_>,
    mns: u64,
    kick_fraction: f64,
    selection: NeutralSelection,
    rng: &mut R,
    budget: &mut Budget,
) -> NwpResult {
    nwp_with(
        state,
        &mut MoveScan::new(),
        mns,
        kick_fraction,
        selection,
        rng,
        budget,
    )
}

enum Pick {
    Found(Move, i64),
    NoneLeft,
    Exhausted,
}

fn pick_non_worsening<R: Rng + ?Sized>(
    state: &ConflictState<'_>,
    scan: &mut MoveScan,
    selection: NeutralSelection,
    rng: &mut R,
    budget: &mut Budget,
) -> Pick {
    scan.reset(state);
    match selection {
        NeutralSelection::FirstFound => {
            while let Some(m) = scan.next_move(state, rng) {
                if !budget.try_charge() {
                    return Pick::Exhausted;
                }
                let d = state.delta_unchecked(m.v, m.color);
                if d <= 0 {
                    return Pick::Found(m, d);
                }
            }
            Pick::NoneLeft
        }
        NeutralSelection::Uniform => {
            let mut seen = 0u32;
            let mut chosen = None;
            while let Some(m) = scan.next_move(state, rng) {
                if !budget.try_charge() {
                    return Pick::Exhausted;
                }
                let d = state.delta_unchecked(m.v, m.color);
                if d <= 0 {
                    seen += 1;
                    if rng.gen_range(0..seen) == 0 {
                        chosen = Some((m, d));
                    }
                }
            }
            match chosen {
                Some((m, d)) => Pick::Found(m, d),
                None => Pick::NoneLeft,
            }
        }
    }
}

fn nwp_with<R: Rng + ?Sized>(
    state: &mut ConflictState<'_>,
    scan: &mut MoveScan,
    mns: u64,
    kick_fraction: f64,
    selection: NeutralSelection,
    rng: &mut R,
    budget: &mut Budget,
) -> NwpResult {
    let mut steps = 0;
    while steps < mns {
        match pick_non_worsening(state, scan, selection, rng, budget) {
            Pick::Exhausted => {
                return NwpResult {
                    outcome: NwpOutcome::BudgetExhausted,
                    steps,
                }
            }
            Pick::NoneLeft => break,
            Pick::Found(m, d) => {
                state.recolor(m.v, m.color);
                steps += 1;
                if d < 0 {
                    return NwpResult {
                        outcome: NwpOutcome::Improved,
                        steps,
                    };
                }
            }
        }
    }
    kick(state, kick_fraction, rng);
    NwpResult {
        outcome: NwpOutcome::Kicked,
        steps,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub evaluations: u64,
    pub fitness: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: NilsConfig,
    pub k: usize,
    pub best_fitness: usize,
    pub best_coloring: Coloring,
    /// Best-so-far fitness after each improvement of the incumbent.
    pub trajectory: Vec<TrajectoryPoint>,
    pub evaluations_used: u64,
    pub legal_found: bool,
    pub local_searches: u64,
    pub kicks: u64,
    pub walk_improvements: u64,
    pub neutral_steps: u64,
}

/// NILS on `g` with a fixed palette of `k` colors, from a uniform random start.
pub fn nils(g: &Graph, k: usize, config: &NilsConfig) -> Result<RunRecord, SearchError> {
    config.validate()?;
    if k == 0 {
        return Err(SearchError::EmptyPalette);
    }
    let mut rng = TaskRng::seed_from_u64(config.seed);
    let start = random_solution(g, k, &mut rng);
    let mut state = ConflictState::new(g, &start).expect("start matches graph");
    let mut budget = Budget::limited(config.eval_budget);
    let mns = config.mns.steps(state.neighborhood_size());

    let mut best_fitness = state.conflicts();
    let mut best_coloring = state.canonical();
    let mut trajectory = vec![TrajectoryPoint {
        evaluations: 0,
        fitness: best_fitness,
    }];
    let mut record = RunRecord {
        config: config.clone(),
        k,
        best_fitness,
        best_coloring: best_coloring.clone(),
        trajectory: Vec::new(),
        evaluations_used: 0,
        legal_found: false,
        local_searches: 0,
        kicks: 0,
        walk_improvements: 0,
        neutral_steps: 0,
    };

    // A single color leaves nothing to search.
    if state.neighborhood_size() > 0 {
        let mut scan = MoveScan::new();
        let mut track = |state: &ConflictState<'_>,
                         budget: &Budget,
                         best: &mut usize,
                         coloring: &mut Coloring| {
            if state.conflicts() < *best {
                *best = state.conflicts();
                *coloring = state.canonical();
                trajectory.push(TrajectoryPoint {
                    evaluations: budget.used(),
                    fitness: *best,
                });
            }
        };
        while best_fitness > 0 {
            let outcome = fihc_with(&mut state, &mut scan, &mut rng, &mut budget);
            record.local_searches += 1;
            track(&state, &budget, &mut best_fitness, &mut best_coloring);
            if outcome == FihcOutcome::BudgetExhausted || state.conflicts() == 0 {
                break;
            }
            let step = nwp_with(
                &mut state,
                &mut scan,
                mns,
                config.kick_fraction,
                config.selection,
                &mut rng,
                &mut budget,
            );
            record.neutral_steps += step.steps;
            match step.outcome {
                NwpOutcome::Improved => {
                    record.walk_improvements += 1;
                    track(&state, &budget, &mut best_fitness, &mut best_coloring);
                }
                NwpOutcome::Kicked => record.kicks += 1,
                NwpOutcome::BudgetExhausted => break,
            }
            if budget.exhausted() {
                break;
            }
        }
    }

    record.best_fitness = best_fitness;
    record.best_coloring = best_coloring;
    record.legal_found = best_fitness == 0;
    record.evaluations_used = budget.used();
    record.trajectory = trajectory;
    Ok(record)
}

/// Keeps at most `max_points` points, one per log-spaced evaluation bucket
/// (the last point falling in it), plus the first and last points.
pub fn downsample_trajectory(
    points: &[TrajectoryPoint],
    max_points: usize,
) -> Vec<TrajectoryPoint> {
    if points.len() <= max_points {
        return points.to_vec();
    }
    if max_points < 2 {
        return points[..max_points].to_vec();
    }
    let last_eval = points.last().map(|p| p.evaluations).unwrap_or(0).max(1) as f64;
    let buckets = max_points - 2;
    let bucket_of = |e: u64| -> usize {
        let x = (e.max(1) as f64).ln() / last_eval.ln().max(f64::MIN_POSITIVE);
        ((x * buckets as f64) as usize).min(buckets - 1)
    };
    let mut out = vec![points[0]];
    for (i, p) in points.iter().enumerate().skip(1).take(points.len() - 2) {
        let next = &points[i + 1];
        if i + 1 == points.len() - 1 || bucket_of(next.evaluations) != bucket_of(p.evaluations) {
            out.push(*p);
        }
    }
    out.push(*points.last().expect("non-empty"));
    out
}

/// First-fit coloring in vertex order; always legal.
pub fn greedy_coloring(g: &Graph) -> Coloring {
    let mut colors: Vec<Color> = vec![0; g.n()];
    let mut used = vec![false; g.n() + 2];
    let mut k = 0;
    for v in 0..g.n() {
        for &u in g.neighbors(v) {
            used[colors[u] as usize] = true;
        }
        let c = (1..).find(|&c| !used[c]).expect("some color is free");
        for &u in g.neighbors(v) {
            used[colors[u] as usize] = false;
        }
        colors[v] = c as Color;
        k = k.max(c);
    }
    Coloring::new(colors, k).expect("first-fit colors lie in 1..=k")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecrementResult {
    pub k_start: usize,
    /// Smallest k with a legal coloring found.
    pub best_k: usize,
    pub coloring: Coloring,
    /// One NILS run per attempted k, in decreasing k.
    pub attempts: Vec<RunRecord>,
}

/// Solves graph coloring through a sequence of k-colorings: start from a
/// greedy legal coloring, then repeatedly drop one color and run NILS with a
/// fresh budget until it fails to find a legal coloring.
pub fn solve_gcp_decrement(g: &Graph, config: &NilsConfig) -> Result<DecrementResult, SearchError> {
    config.validate()?;
    let greedy = greedy_coloring(g);
    let k_start = greedy.k();
    let mut best_k = k_start;
    let mut coloring = greedy.canonical();
    let mut attempts = Vec::new();
    while best_k > 1 {
        let run = nils(g, best_k - 1, config)?;
        let legal = run.legal_found;
        let found = run.best_coloring.clone();
        attempts.push(run);
        if !legal {
            break;
        }
        best_k -= 1;
        coloring = found;
    }
    Ok(DecrementResult {
        k_start,
        best_k,
        coloring,
        attempts,
    })
}
