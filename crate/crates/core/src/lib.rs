//! SU(2) and U(1) gauge theory on trivalent graphs.
//!
//! The crate covers the combinatorics of trivalent multigraphs ([`graph`]),
//! SU(2) as unit quaternions ([`su2`]), connections and gauge orbits
//! ([`connection`]), the unitary Schottky space and trinion
//! representations ([`schottky`]), moment polytopes ([`polytope`]) and the
//! gauge-fixing section with its map to the Schottky space ([`florentino`]).

pub mod connection;
pub mod error;
pub mod florentino;
pub mod graph;
pub mod polytope;
pub mod schottky;
pub mod su2;

pub use connection::{
    verify_abelian, AbelianConnection, AbelianReport, ConjCoordinates, Connection,
    GaugeTransformation,
};
pub use error::{Error, Result};
pub use graph::{
    Direction, GraphPath, HyperbolicSplit, Orientation, OrientedEdge, RawGraph, TrivalentGraph,
};
pub use polytope::{trinion_membership, GraphPolytope, VolumeEstimate};
pub use schottky::{trinion_rep, SchottkyClass, TrinionRep};
pub use su2::GroupElement;
