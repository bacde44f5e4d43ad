//! Undirected graphs and the DIMACS `.col` text format.
//!
//! Vertices are 0-based in memory. Files use the 1-based DIMACS numbering:
//!
//! ```text
//! c comment
//! p edge <n> <m>
//! e <u> <v>
//! ```
//!
//! Duplicate edges (including the reversed orientation) are merged, so `m`
//! always counts distinct undirected edges regardless of the header value.

use std::fmt::Write as _;
use std::io::Read;

use thiserror::Error;

/// Vertex identifier, 0-based.
pub type Vertex = usize;

/// Immutable undirected simple graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<Vertex>>,
    edges: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("missing `p edge` line")]
    MissingProblemLine,
    #[error("duplicate `p` line")]
    DuplicateProblemLine,
    #[error("edge line before `p` line")]
    EdgeBeforeProblemLine,
    #[error("malformed `{0}` line")]
    Malformed(char),
    #[error("unknown line type `{0}`")]
    UnknownLine(String),
    #[error("non-integer token `{0}`")]
    NotAnInteger(String),
    #[error("vertex id {id} outside [1, {n}]")]
    VertexOutOfRange { id: u64, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(u64),
    #[error("input is not valid UTF-8")]
    Encoding,
    #[error("read failed: {0}")]
    Io(String),
}

/// A DIMACS parse failure. `line` is 1-based; 0 means "end of input".
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn at(line: usize, kind: ParseErrorKind) -> Self {
        Self { line, kind }
    }
}

impl Graph {
    /// Builds a graph from 0-based edges. Duplicates are merged, self-loops rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Ok(Self {
            adjacency,
            edges: degree_sum / 2,
        })
    }

    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edges: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Canonical DIMACS serialization: header then edges in lexicographic order.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::with_capacity(16 + self.edges * 12);
        let _ = writeln!(out, "p edge {} {}", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }
}

/// Parses DIMACS `.col` text.
pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut tokens = raw.split_whitespace();
        let Some(tag) = tokens.next() else { continue };
        if tag.starts_with('c') {
            continue;
        }
        match tag {
            "p" => {
                if n.is_some() {
                    return Err(ParseError::at(
                        line_no,
                        ParseErrorKind::DuplicateProblemLine,
                    ));
                }
                let rest: Vec<&str> = tokens.collect();
                if rest.len() != 3 {
                    return Err(ParseError::at(line_no, ParseErrorKind::Malformed('p')));
                }
                let vertices = parse_int(rest[1], line_no)?;
                // The declared edge count is checked for syntax only; some
                // benchmark files count both orientations.
                let declared = parse_int(rest[2], line_no)?;
                n = Some(vertices as usize);
                edges.reserve(declared.min(1 << 24) as usize);
            }
            "e" => {
                let Some(count) = n else {
                    return Err(ParseError::at(
                        line_no,
                        ParseErrorKind::EdgeBeforeProblemLine,
                    ));
                };
                let rest: Vec<&str> = tokens.collect();
                if rest.len() != 2 {
                    return Err(ParseError::at(line_no, ParseErrorKind::Malformed('e')));
                }
                let u = parse_int(rest[0], line_no)?;
                let v = parse_int(rest[1], line_no)?;
                for id in [u, v] {
                    if id == 0 || id > count as u64 {
                        return Err(ParseError::at(
                            line_no,
                            ParseErrorKind::VertexOutOfRange { id, n: count },
                        ));
                    }
                }
                if u == v {
                    return Err(ParseError::at(line_no, ParseErrorKind::SelfLoop(u)));
                }
                edges.push((u as usize - 1, v as usize - 1));
            }
            other => {
                return Err(ParseError::at(
                    line_no,
                    ParseErrorKind::UnknownLine(other.to_string()),
                ))
            }
        }
    }

    let n = n.ok_or(ParseError::at(0, ParseErrorKind::MissingProblemLine))?;
    // Range and loop checks already ran, so construction cannot fail.
    Ok(Graph::from_edges(n, edges).expect("edges validated during parsing"))
}

/// Reads and parses a DIMACS byte stream.
pub fn read_dimacs<R: Read>(mut reader: R) -> Result<Graph, ParseError> {
    let mut bytes = Vec::new();
    reader
        .read_to_end(&mut bytes)
        .map_err(|e| ParseError::at(0, ParseErrorKind::Io(e.to_string())))?;
    let text = String::from_utf8(bytes).map_err(|_| ParseError::at(0, ParseErrorKind::Encoding))?;
    parse_dimacs(&text)
}

fn parse_int(token: &str, line: usize) -> Result<u64, ParseError> {
    token
        .parse::<u64>()
        .map_err(|_| ParseError::at(line, ParseErrorKind::NotAnInteger(token.to_string())))
}
