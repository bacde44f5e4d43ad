//! The 1-move neighborhood: enumeration in random order, classification of
//! neighbors by fitness change, neutral degree and portal detection.
//!
//! Moves are counted individually: a neighbor that becomes identical to
//! another one after canonical relabeling still counts once per move.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, ConflictState};
use crate::graph::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub v: Vertex,
    pub color: Color,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NeighborhoodError {
    #[error("the 1-move neighborhood needs k >= 2, got k = {0}")]
    DegenerateK(usize),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborClassification {
    pub improving: usize,
    pub neutral: usize,
    pub worsening: usize,
    pub total: usize,
}

impl NeighborClassification {
    pub fn ratio(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.neutral as f64 / self.total as f64
        }
    }
}

/// Counts move evaluations against an optional limit.
///
/// Every delta computation is one evaluation; applying a move is free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    used: u64,
    limit: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self {
            used: 0,
            limit: None,
        }
    }

    pub fn limited(limit: u64) -> Self {
        Self {
            used: 0,
            limit: Some(limit),
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    pub fn exhausted(&self) -> bool {
        matches!(self.limit, Some(l) if self.used >= l)
    }

    /// Charges one evaluation if any remain.
    #[inline]
    pub fn try_charge(&mut self) -> bool {
        if self.exhausted() {
            return false;
        }
        self.used += 1;
        true
    }

    /// Charges unconditionally; measurement code uses this for full scans.
    pub fn charge(&mut self, evaluations: u64) {
        self.used += evaluations;
    }
}

/// Draws the moves of a fixed state in uniformly random order, one at a
/// time, by lazily running Fisher-Yates over move indices.
///
/// The index buffer is reused across scans so repeated scans do not allocate.
#[derive(Debug, Clone, Default)]
pub struct MoveScan {
    order: Vec<u32>,
    pos: usize,
}

impl MoveScan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts a new scan over the neighborhood of `state`.
    pub fn reset(&mut self, state: &ConflictState<'_>) {
        let size = state.neighborhood_size();
        if self.order.len() != size {
            self.order = (0..size as u32).collect();
        }
        self.pos = 0;
    }

    pub fn remaining(&self) -> usize {
        self.order.len() - self.pos
    }

    /// Next move of the scan, decoded against the current colors of `state`.
    /// The state must not change between `reset` and the end of the scan.
    #[inline]
    pub fn next_move<R: Rng + ?Sized>(
        &mut self,
        state: &ConflictState<'_>,
        rng: &mut R,
    ) -> Option<Move> {
        if self.pos == self.order.len() {
            return None;
        }
        let j = rng.gen_range(self.pos..self.order.len());
        self.order.swap(self.pos, j);
        let index = self.order[self.pos] as usize;
        self.pos += 1;
        Some(decode(state, index))
    }
}

/// Maps an index in `0..n*(k-1)` to the move it denotes: vertex
/// `index / (k-1)`, and the `index % (k-1)`-th color other than the current one.
#[inline]
fn decode(state: &ConflictState<'_>, index: usize) -> Move {
    let others = state.k() - 1;
    let v = index / others;
    let offset = (index % others) as Color + 1;
    let color = if offset >= state.color(v) {
        offset + 1
    } else {
        offset
    };
    Move { v, color }
}

/// Every 1-move of `state`, in a uniformly random order.
pub fn enumerate_moves<R: Rng + ?Sized>(state: &ConflictState<'_>, rng: &mut R) -> Vec<Move> {
    let mut scan = MoveScan::new();
    scan.reset(state);
    std::iter::from_fn(|| scan.next_move(state, rng)).collect()
}

fn require_palette(state: &ConflictState<'_>) -> Result<(), NeighborhoodError> {
    if state.k() < 2 {
        return Err(NeighborhoodError::DegenerateK(state.k()));
    }
    Ok(())
}

/// Classifies every neighbor by the sign of its fitness change.
pub fn classify(
    state: &ConflictState<'_>,
    budget: &mut Budget,
) -> Result<NeighborClassification, NeighborhoodError> {
    require_palette(state)?;
    let k = state.k() as Color;
    let mut out = NeighborClassification::default();
    for v in 0..state.n() {
        let current = state.color(v);
        let here = state.neighbor_count(v, current);
        for c in (1..=k).filter(|&c| c != current) {
            match state.neighbor_count(v, c).cmp(&here) {
                std::cmp::Ordering::Less => out.improving += 1,
                std::cmp::Ordering::Equal => out.neutral += 1,
                std::cmp::Ordering::Greater => out.worsening += 1,
            }
        }
    }
    out.total = state.neighborhood_size();
    budget.charge(out.total as u64);
    Ok(out)
}

pub fn neutral_degree(
    state: &ConflictState<'_>,
    budget: &mut Budget,
) -> Result<usize, NeighborhoodError> {
    Ok(classify(state, budget)?.neutral)
}

pub fn neutral_ratio(
    state: &ConflictState<'_>,
    budget: &mut Budget,
) -> Result<f64, NeighborhoodError> {
    Ok(classify(state, budget)?.ratio())
}

/// True iff some neighbor is strictly better. Stops at the first one and
/// charges only the moves it looked at.
pub fn is_portal(
    state: &ConflictState<'_>,
    budget: &mut Budget,
) -> Result<bool, NeighborhoodError> {
    require_palette(state)?;
    let k = state.k() as Color;
    for v in 0..state.n() {
        let current = state.color(v);
        let here = state.neighbor_count(v, current);
        for c in (1..=k).filter(|&c| c != current) {
            budget.charge(1);
            if state.neighbor_count(v, c) < here {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
