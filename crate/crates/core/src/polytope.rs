//! The trinion tetrahedron and graph moment polytopes in `[0, 1]^E`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{HyperbolicSplit, TrivalentGraph};

/// Slack allowed on the tetrahedron inequalities.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

/// Rejection sampling gives up after this many misses.
pub const MAX_REJECTION_TRIALS: u64 = 10_000_000;

/// Whether `(t1, t2, t3)` lies in the tetrahedron inscribed in the unit cube:
/// `|t1 - t2| <= t3 <= min(t1 + t2, 2 - t1 - t2)`.
pub fn trinion_membership(t1: f64, t2: f64, t3: f64) -> Result<bool> {
    for t in [t1, t2, t3] {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange(t));
        }
    }
    Ok(trinion_slack(t1, t2, t3) >= -MEMBERSHIP_TOL)
}

/// Smallest slack over the facet inequalities (negative outside).
pub fn trinion_slack(t1: f64, t2: f64, t3: f64) -> f64 {
    [t3 - (t1 - t2).abs(), t1 + t2 - t3, 2.0 - t1 - t2 - t3]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Tetrahedron inequalities at one vertex, on three coordinate slots. A loop
/// puts the same coordinate in two slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexBlock {
    pub vertex: usize,
    pub slots: [usize; 3],
}

impl VertexBlock {
    fn slack(&self, x: &[f64]) -> f64 {
        let [a, b, c] = self.slots.map(|i| x[i]);
        trinion_slack(a, b, c)
    }
}

/// H-representation of a polytope in `[0, 1]^dimension` as a conjunction of
/// vertex blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphPolytope {
    pub dimension: usize,
    pub blocks: Vec<VertexBlock>,
}

/// Monte-Carlo volume estimate over the unit cube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
}

impl GraphPolytope {
    /// The graph polytope: one block per vertex of the graph.
    pub fn of_graph(graph: &TrivalentGraph) -> Self {
        let vertices: Vec<usize> = (0..graph.vertex_count()).collect();
        Self::on_vertices(graph, &vertices)
    }

    /// The product of the tetrahedra at the `V+` vertices.
    pub fn plus_product(graph: &TrivalentGraph, split: &HyperbolicSplit) -> Result<Self> {
        if !split.is_valid_for(graph) {
            return Err(Error::SplitMismatch);
        }
        Ok(Self::on_vertices(graph, &split.v_plus))
    }

    fn on_vertices(graph: &TrivalentGraph, vertices: &[usize]) -> Self {
        GraphPolytope {
            dimension: graph.edge_count(),
            blocks: vertices
                .iter()
                .map(|&vertex| VertexBlock {
                    vertex,
                    slots: graph.edge_slots(vertex),
                })
                .collect(),
        }
    }

    /// The unconstrained cube.
    pub fn cube(dimension: usize) -> Self {
        GraphPolytope {
            dimension,
            blocks: Vec::new(),
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.len(),
            });
        }
        match x.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            Some(&t) => Err(Error::OutOfRange(t)),
            None => Ok(()),
        }
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        Ok(self.first_violation(x)?.is_none())
    }

    /// Vertex of the first violated block, if any.
    pub fn first_violation(&self, x: &[f64]) -> Result<Option<usize>> {
        self.check_point(x)?;
        Ok(self
            .blocks
            .iter()
            .find(|b| b.slack(x) < -MEMBERSHIP_TOL)
            .map(|b| b.vertex))
    }

    /// Smallest block slack; `+inf` without blocks.
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.slack(x))
            .fold(f64::INFINITY, f64::min)
    }

    fn unchecked_contains(&self, x: &[f64]) -> bool {
        self.blocks.iter().all(|b| b.slack(x) >= -MEMBERSHIP_TOL)
    }

    /// Uniform point by rejection from the cube.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        let mut x = vec![0.0; self.dimension];
        for _ in 0..MAX_REJECTION_TRIALS {
            x.iter_mut().for_each(|t| *t = rng.gen::<f64>());
            if self.unchecked_contains(&x) {
                return Ok(x);
            }
        }
        Err(Error::DegeneratePolytope {
            trials: MAX_REJECTION_TRIALS,
        })
    }

    /// Hit fraction of `n` uniform cube points, with binomial standard error.
    pub fn mc_volume<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> VolumeEstimate {
        let mut x = vec![0.0; self.dimension];
        let mut hits = 0u64;
        for _ in 0..n {
            x.iter_mut().for_each(|t| *t = rng.gen::<f64>());
            hits += u64::from(self.unchecked_contains(&x));
        }
        let p = hits as f64 / n as f64;
        VolumeEstimate {
            estimate: p,
            stderr: (p * (1.0 - p) / n as f64).sqrt(),
            hits,
            samples: n,
        }
    }
}
