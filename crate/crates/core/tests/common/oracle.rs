//! Brute-force landscape oracle for tiny graphs.
//!
//! Everything here works on plain edge lists and color vectors and
//! recomputes fitness from scratch, so it shares no code path with the
//! incremental implementation it checks.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct TinyGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// `count` random graphs, cycling through vertex counts `min_n..=max_n`
/// and edge densities 0.2..0.9.
pub fn sample_graphs(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<TinyGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = min_n + i % (max_n - min_n + 1);
            let p = 0.2 + 0.7 * ((i / (max_n - min_n + 1)) % 8) as f64 / 7.0;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            TinyGraph { n, edges }
        })
        .collect()
}

pub fn conflicts(edges: &[(usize, usize)], colors: &[u32]) -> usize {
    edges
        .iter()
        .filter(|&&(u, v)| colors[u] == colors[v])
        .count()
}

/// All `k^n` color vectors over `1..=k`.
pub fn all_colorings(n: usize, k: usize) -> Vec<Vec<u32>> {
    let total = k.pow(n as u32);
    (0..total)
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let c = (code % k) as u32 + 1;
                    code /= k;
                    c
                })
                .collect()
        })
        .collect()
}

/// Every 1-move neighbor: `(vertex, new color, neighbor vector)`.
pub fn neighbors(colors: &[u32], k: usize) -> Vec<(usize, u32, Vec<u32>)> {
    let mut out = Vec::new();
    for v in 0..colors.len() {
        for c in 1..=k as u32 {
            if c != colors[v] {
                let mut next = colors.to_vec();
                next[v] = c;
                out.push((v, c, next));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub improving: usize,
    pub neutral: usize,
    pub worsening: usize,
}

pub fn classify(edges: &[(usize, usize)], colors: &[u32], k: usize) -> Counts {
    let f = conflicts(edges, colors);
    let mut out = Counts::default();
    for (_, _, next) in neighbors(colors, k) {
        let g = conflicts(edges, &next);
        if g < f {
            out.improving += 1;
        } else if g == f {
            out.neutral += 1;
        } else {
            out.worsening += 1;
        }
    }
    out
}

pub fn is_local_optimum(edges: &[(usize, usize)], colors: &[u32], k: usize) -> bool {
    classify(edges, colors, k).improving == 0
}

/// Order-of-arrival relabeling, written independently of the library.
pub fn relabel(colors: &[u32]) -> Vec<u32> {
    let mut seen: Vec<u32> = Vec::new();
    colors
        .iter()
        .map(|c| match seen.iter().position(|s| s == c) {
            Some(i) => i as u32 + 1,
            None => {
                seen.push(*c);
                seen.len() as u32
            }
        })
        .collect()
}

/// The plateau of `start`: every vector reachable through neutral 1-moves,
/// as canonical forms.
pub fn plateau(edges: &[(usize, usize)], start: &[u32], k: usize) -> HashSet<Vec<u32>> {
    let f = conflicts(edges, start);
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.to_vec());
    queue.push_back(start.to_vec());
    while let Some(s) = queue.pop_front() {
        for (_, _, next) in neighbors(&s, k) {
            if conflicts(edges, &next) == f && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.iter().map(|s| relabel(s)).collect()
}

/// Portals of a plateau: members with an improving neighbor.
pub fn portals(
    edges: &[(usize, usize)],
    members: &HashSet<Vec<u32>>,
    k: usize,
) -> HashSet<Vec<u32>> {
    members
        .iter()
        .filter(|s| classify(edges, s, k).improving > 0)
        .cloned()
        .collect()
}
