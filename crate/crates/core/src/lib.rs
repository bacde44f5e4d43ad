//! Neutrality analysis of the graph coloring landscape and a
//! neutrality-based iterated local search.
//!
//! The search space is the set of canonical k-colorings of a graph, the
//! neighborhood is the 1-move (recolor one vertex), and fitness is the
//! number of monochromatic edges.
//!
//! - [`graph`] and [`manifest`]: DIMACS instances and their metadata.
//! - [`coloring`]: colorings, fitness, incremental conflict bookkeeping.
//! - [`neighborhood`]: move enumeration and neighbor classification.
//! - [`landscape`]: descents, neutral walks, plateau typology, autocorrelation.
//! - [`search`]: first-improvement hill climbing, neutral-walk perturbation,
//!   NILS and the k-decrement driver.

pub mod coloring;
pub mod graph;
pub mod landscape;
pub mod manifest;
pub mod neighborhood;
pub mod search;
pub mod seeds;
pub mod stats;

pub use coloring::{canonicalize, fitness, Color, Coloring, ColoringError, ConflictState};
pub use graph::{parse_dimacs, read_dimacs, Graph, ParseError, Vertex};
pub use manifest::{load_manifest, InstanceMeta};
pub use neighborhood::{
    classify, is_portal, neutral_degree, neutral_ratio, Budget, Move, NeighborClassification,
};
