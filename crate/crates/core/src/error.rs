use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Edge;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    InvalidVertex { vertex: usize, vertex_count: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),

    #[error("edge {0} is not in the graph")]
    MissingEdge(Edge),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("infeasible generator arguments: {0}")]
    Infeasible(String),

    #[error("no admissible sample after {attempts} attempts")]
    RetryBudgetExhausted { attempts: usize },

    #[error("realization has {coords} points but the graph has {vertices} vertices")]
    SizeMismatch { coords: usize, vertices: usize },

    #[error("operation not defined over {0}")]
    UnsupportedDomain(&'static str),

    #[error("rank {rank} exceeds edge count {edges}")]
    RankExceedsEdges { rank: usize, edges: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("cut split refused: auxiliary graph on {vertices:?} carries {stress} stress(es)")]
    LemmaInapplicable { vertices: Vec<usize>, stress: usize },

    #[error("case analysis reached an unhandled configuration: {0}")]
    UnhandledCase(String),

    #[error("oracle mismatch: pebble rank {pebble} vs matrix rank {matrix}")]
    OracleMismatch { pebble: usize, matrix: usize },

    #[error("malformed realization: {0}")]
    Realization(String),
}
