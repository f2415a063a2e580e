use thiserror::Error;

/// Errors raised by graph, connection, polytope and section operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("vertex {vertex} has {flags} incident flags, expected 3")]
    NonTrivalent { vertex: usize, flags: usize },
    #[error("edge {edge} references vertex {vertex}, but the graph has {vertex_count} vertices")]
    DanglingFlag {
        edge: usize,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex split is not a hyperbolic split of this graph")]
    SplitMismatch,
    #[error("graph is not hyperbolic (it has a loop or is not bipartite)")]
    NotHyperbolic,
    #[error("path is not continuous at step {step}")]
    BrokenPath { step: usize },
    #[error("path is empty")]
    EmptyPath,
    #[error("edge {edge} does not belong to a graph with {edge_count} edges")]
    ForeignEdge { edge: usize, edge_count: usize },
    #[error("vertex {vertex} does not belong to a graph with {vertex_count} vertices")]
    ForeignVertex { vertex: usize, vertex_count: usize },
    #[error("path does not belong to the connection's graph")]
    ForeignPath,
    #[error("gauge transformation lives on a different graph")]
    ForeignGauge,
    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("rotation axis has norm {norm}, expected 1")]
    BadAxis { norm: f64 },
    #[error("class triple ({0}, {1}, {2}) lies outside the trinion tetrahedron")]
    OutsideTetrahedron(f64, f64, f64),
    #[error("class coordinate {0} lies outside [0, 1]")]
    OutOfRange(f64),
    #[error("Schottky classes have genus {0} and {1}")]
    GenusMismatch(usize, usize),
    #[error("point has dimension {actual}, polytope lives in dimension {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("point violates the block at vertex {vertex}")]
    OutsidePolytope { vertex: usize },
    #[error("rejection sampler found no point in {trials} trials")]
    DegeneratePolytope { trials: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
