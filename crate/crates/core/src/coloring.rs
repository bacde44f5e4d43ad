//! Color vectors and the conflict-count fitness.
//!
//! A [`Coloring`] assigns each vertex a color in `1..=k`. Its canonical form
//! numbers colors by order of first appearance, so colorings that differ by
//! a permutation of the palette share one representation.
//!
//! [`ConflictState`] keeps, for every vertex `v` and color `c`, the number of
//! neighbors of `v` colored `c`. With that table the fitness change of a
//! 1-move is a difference of two entries.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Color label, 1-based.
pub type Color = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("color {color} at vertex {vertex} outside 1..={k}")]
    ColorOutOfRange {
        vertex: Vertex,
        color: Color,
        k: usize,
    },
    #[error("coloring uses {used} distinct colors but only {k} are allowed")]
    TooManyColors { used: usize, k: usize },
    #[error("coloring has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex {vertex} out of range")]
    VertexOutOfRange { vertex: Vertex },
    #[error("vertex {vertex} already has color {color}")]
    SameColor { vertex: Vertex, color: Color },
    #[error("malformed coloring line: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<Color>,
    k: usize,
}

impl Coloring {
    /// Wraps a color vector, checking every entry lies in `1..=k`.
    pub fn new(colors: Vec<Color>, k: usize) -> Result<Self, ColoringError> {
        if let Some((vertex, &color)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c as usize > k)
        {
            return Err(ColoringError::ColorOutOfRange { vertex, color, k });
        }
        Ok(Self { colors, k })
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        let mut next = 1;
        for &c in &self.colors {
            if c == next {
                next += 1;
            } else if c > next {
                return false;
            }
        }
        true
    }

    pub fn canonical(&self) -> Coloring {
        Coloring {
            colors: relabel_by_arrival(&self.colors),
            k: self.k,
        }
    }

    /// One line of space-separated colors, canonical form.
    pub fn to_line(&self) -> String {
        let canon = relabel_by_arrival(&self.colors);
        let mut out = String::with_capacity(canon.len() * 3);
        for (i, c) in canon.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&c.to_string());
        }
        out
    }

    pub fn from_line(line: &str, k: usize) -> Result<Self, ColoringError> {
        let raw = line
            .split_whitespace()
            .map(|t| {
                t.parse::<Color>()
                    .map_err(|_| ColoringError::Malformed(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        canonicalize(&raw, Some(k))
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

fn relabel_by_arrival(raw: &[Color]) -> Vec<Color> {
    let max = raw.iter().copied().max().unwrap_or(0) as usize;
    let mut map = vec![0 as Color; max + 1];
    let mut next = 0;
    raw.iter()
        .map(|&c| {
            let slot = &mut map[c as usize];
            if *slot == 0 {
                next += 1;
                *slot = next;
            }
            *slot
        })
        .collect()
}

/// Relabels colors by order of first appearance.
///
/// With `k = None` the palette size is the number of distinct colors used.
pub fn canonicalize(raw: &[Color], k: Option<usize>) -> Result<Coloring, ColoringError> {
    if let Some(vertex) = raw.iter().position(|&c| c == 0) {
        return Err(ColoringError::ColorOutOfRange {
            vertex,
            color: 0,
            k: k.unwrap_or(0),
        });
    }
    let colors = relabel_by_arrival(raw);
    let used = colors.iter().copied().max().unwrap_or(0) as usize;
    let k = match k {
        Some(k) if used > k => return Err(ColoringError::TooManyColors { used, k }),
        Some(k) => k,
        None => used,
    };
    Ok(Coloring { colors, k })
}

/// Number of edges whose endpoints share a color.
pub fn fitness(g: &Graph, s: &Coloring) -> Result<usize, ColoringError> {
    check_length(g, s)?;
    let c = s.colors();
    Ok(g.edges().filter(|&(u, v)| c[u] == c[v]).count())
}

fn check_length(g: &Graph, s: &Coloring) -> Result<(), ColoringError> {
    if s.len() != g.n() {
        return Err(ColoringError::LengthMismatch {
            expected: g.n(),
            got: s.len(),
        });
    }
    Ok(())
}

/// A coloring plus the per-vertex neighbor color counts.
///
/// Labels are not kept canonical between moves; call
/// [`ConflictState::canonical`] when solution identity matters.
#[derive(Debug, Clone)]
pub struct ConflictState<'g> {
    graph: &'g Graph,
    colors: Vec<Color>,
    k: usize,
    conflicts: usize,
    // Row-major n x k, column c-1 holds the count for color c.
    table: Vec<u32>,
}

impl<'g> ConflictState<'g> {
    pub fn new(graph: &'g Graph, s: &Coloring) -> Result<Self, ColoringError> {
        check_length(graph, s)?;
        let k = s.k();
        let colors = s.colors().to_vec();
        let mut table = vec![0u32; graph.n() * k];
        let mut twice = 0;
        for v in 0..graph.n() {
            let row = &mut table[v * k..(v + 1) * k];
            for &u in graph.neighbors(v) {
                row[colors[u] as usize - 1] += 1;
            }
            twice += row[colors[v] as usize - 1] as usize;
        }
        Ok(Self {
            graph,
            colors,
            k,
            conflicts: twice / 2,
            table,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Current fitness.
    pub fn conflicts(&self) -> usize {
        self.conflicts
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    #[inline]
    pub fn color(&self, v: Vertex) -> Color {
        self.colors[v]
    }

    /// Neighbors of `v` currently colored `c`.
    #[inline]
    pub fn neighbor_count(&self, v: Vertex, c: Color) -> u32 {
        self.table[v * self.k + c as usize - 1]
    }

    /// Conflicts `v` is involved in.
    #[inline]
    pub fn vertex_conflicts(&self, v: Vertex) -> u32 {
        self.neighbor_count(v, self.colors[v])
    }

    /// Size of the 1-move neighborhood, `n * (k - 1)`.
    pub fn neighborhood_size(&self) -> usize {
        self.n() * self.k.saturating_sub(1)
    }

    pub fn coloring(&self) -> Coloring {
        Coloring {
            colors: self.colors.clone(),
            k: self.k,
        }
    }

    pub fn canonical(&self) -> Coloring {
        Coloring {
            colors: relabel_by_arrival(&self.colors),
            k: self.k,
        }
    }

    fn check_move(&self, v: Vertex, c: Color) -> Result<(), ColoringError> {
        if v >= self.n() {
            return Err(ColoringError::VertexOutOfRange { vertex: v });
        }
        if c == 0 || c as usize > self.k {
            return Err(ColoringError::ColorOutOfRange {
                vertex: v,
                color: c,
                k: self.k,
            });
        }
        if self.colors[v] == c {
            return Err(ColoringError::SameColor {
                vertex: v,
                color: c,
            });
        }
        Ok(())
    }

    /// Fitness change of recoloring `v` with `c`, without applying it.
    pub fn delta(&self, v: Vertex, c: Color) -> Result<i64, ColoringError> {
        self.check_move(v, c)?;
        Ok(self.delta_unchecked(v, c))
    }

    #[inline]
    pub fn delta_unchecked(&self, v: Vertex, c: Color) -> i64 {
        let row = &self.table[v * self.k..(v + 1) * self.k];
        row[c as usize - 1] as i64 - row[self.colors[v] as usize - 1] as i64
    }

    pub fn apply_move(&mut self, v: Vertex, c: Color) -> Result<(), ColoringError> {
        self.check_move(v, c)?;
        self.recolor(v, c);
        Ok(())
    }

    /// Sets the color of `v`, keeping the table consistent. Recoloring with
    /// the current color is a no-op. `c` must lie in `1..=k`.
    pub fn recolor(&mut self, v: Vertex, c: Color) {
        debug_assert!(c >= 1 && c as usize <= self.k);
        let old = self.colors[v];
        if old == c {
            return;
        }
        let delta = self.delta_unchecked(v, c);
        self.conflicts = (self.conflicts as i64 + delta) as usize;
        self.colors[v] = c;
        let (k, old_col, new_col) = (self.k, old as usize - 1, c as usize - 1);
        for &u in self.graph.neighbors(v) {
            let row = u * k;
            self.table[row + old_col] -= 1;
            self.table[row + new_col] += 1;
        }
    }

    /// True when the table and fitness match a rebuild from scratch.
    pub fn is_consistent(&self) -> bool {
        let fresh =
            ConflictState::new(self.graph, &self.coloring()).expect("own coloring is valid");
        fresh.conflicts == self.conflicts && fresh.table == self.table
    }
}
