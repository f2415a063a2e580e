//! Connections, gauge transformations and holonomy on a trivalent graph,
//! together with the abelian U(1) sector and its diagonal embedding.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphPath, Orientation, OrientedEdge, TrivalentGraph};
use crate::schottky::SchottkyClass;
use crate::su2::{stream_rng, GroupElement};

/// Class coordinates of a connection, indexed by edge id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConjCoordinates(pub Vec<f64>);

impl ConjCoordinates {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Sup-norm distance.
    pub fn max_abs_diff(&self, other: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// An SU(2) connection: one group element per edge, stored as the value on
/// the direction picked by `orientation`. The opposite direction carries the
/// inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    graph: Arc<TrivalentGraph>,
    orientation: Orientation,
    values: Vec<GroupElement>,
}

/// Serialized form of a connection: orientation plus edge-indexed values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectionData {
    pub orientation: Orientation,
    pub values: Vec<GroupElement>,
}

fn same_graph(a: &Arc<TrivalentGraph>, b: &Arc<TrivalentGraph>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Connection {
    pub fn new(
        graph: Arc<TrivalentGraph>,
        orientation: Orientation,
        values: Vec<GroupElement>,
    ) -> Result<Self> {
        let expected = graph.edge_count();
        for actual in [orientation.edge_count(), values.len()] {
            if actual != expected {
                return Err(Error::LengthMismatch { expected, actual });
            }
        }
        Ok(Connection {
            graph,
            orientation,
            values,
        })
    }

    pub fn trivial(graph: Arc<TrivalentGraph>) -> Self {
        let n = graph.edge_count();
        Connection {
            graph,
            orientation: Orientation::canonical(n),
            values: vec![GroupElement::IDENTITY; n],
        }
    }

    /// Independent Haar value on every edge, canonical orientation.
    pub fn random<R: Rng + ?Sized>(graph: Arc<TrivalentGraph>, rng: &mut R) -> Self {
        let n = graph.edge_count();
        let values = (0..n).map(|_| GroupElement::haar(rng)).collect();
        Connection {
            graph,
            orientation: Orientation::canonical(n),
            values,
        }
    }

    pub fn graph(&self) -> &Arc<TrivalentGraph> {
        &self.graph
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    /// Stored values, on the directions of `orientation()`.
    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    pub fn to_data(&self) -> ConnectionData {
        ConnectionData {
            orientation: self.orientation.clone(),
            values: self.values.clone(),
        }
    }

    pub fn from_data(graph: Arc<TrivalentGraph>, data: ConnectionData) -> Result<Self> {
        Connection::new(graph, data.orientation, data.values)
    }

    /// Value on an oriented edge; the reversed direction gives the inverse.
    pub fn evaluate(&self, step: OrientedEdge) -> Result<GroupElement> {
        self.graph.check_edge(step.edge)?;
        let stored = self.values[step.edge];
        Ok(if self.orientation.direction(step.edge) == step.direction {
            stored
        } else {
            stored.inverse()
        })
    }

    /// Ordered product of the values along the path, first step leftmost.
    pub fn holonomy(&self, path: &GraphPath) -> Result<GroupElement> {
        // Re-validate so paths built on a different graph are rejected.
        GraphPath::new(&self.graph, path.steps().to_vec()).map_err(|_| Error::ForeignPath)?;
        path.steps().iter().map(|&s| self.evaluate(s)).product()
    }

    /// The same connection expressed in another orientation.
    pub fn reoriented(&self, orientation: &Orientation) -> Result<Self> {
        if orientation.edge_count() != self.values.len() {
            return Err(Error::LengthMismatch {
                expected: self.values.len(),
                actual: orientation.edge_count(),
            });
        }
        let values = orientation
            .iter()
            .map(|step| self.evaluate(step))
            .collect::<Result<_>>()?;
        Ok(Connection {
            graph: self.graph.clone(),
            orientation: orientation.clone(),
            values,
        })
    }

    /// Pull back along the edge involutions of `edges`: values on those
    /// edges are inverted. All edges at once is the diagonal involution.
    pub fn edge_involution(&self, edges: &[usize]) -> Result<Self> {
        let mut values = self.values.clone();
        for &e in edges {
            self.graph.check_edge(e)?;
            values[e] = values[e].inverse();
        }
        Ok(Connection {
            graph: self.graph.clone(),
            orientation: self.orientation.clone(),
            values,
        })
    }

    pub fn conj_coords(&self) -> ConjCoordinates {
        ConjCoordinates(self.values.iter().map(|g| g.conj_class()).collect())
    }

    /// Holonomies of the spanning-tree generators at `base`.
    pub fn schottky_project(&self, base: usize) -> Result<SchottkyClass> {
        let generators = self.graph.spanning_tree_generators(base)?;
        let holonomies = generators
            .iter()
            .map(|p| self.holonomy(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(SchottkyClass::new(holonomies))
    }
}

/// A gauge transformation: one group element per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeTransformation {
    graph: Arc<TrivalentGraph>,
    values: Vec<GroupElement>,
}

impl GaugeTransformation {
    pub fn new(graph: Arc<TrivalentGraph>, values: Vec<GroupElement>) -> Result<Self> {
        if values.len() != graph.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: graph.vertex_count(),
                actual: values.len(),
            });
        }
        Ok(GaugeTransformation { graph, values })
    }

    pub fn identity(graph: Arc<TrivalentGraph>) -> Self {
        let n = graph.vertex_count();
        GaugeTransformation {
            graph,
            values: vec![GroupElement::IDENTITY; n],
        }
    }

    /// The constant transformation with value `h` everywhere.
    pub fn constant(graph: Arc<TrivalentGraph>, h: GroupElement) -> Self {
        let n = graph.vertex_count();
        GaugeTransformation {
            graph,
            values: vec![h; n],
        }
    }

    pub fn random<R: Rng + ?Sized>(graph: Arc<TrivalentGraph>, rng: &mut R) -> Self {
        let values = (0..graph.vertex_count())
            .map(|_| GroupElement::haar(rng))
            .collect();
        GaugeTransformation { graph, values }
    }

    /// Random transformation pinned to the identity at `framing`.
    pub fn random_framed<R: Rng + ?Sized>(
        graph: Arc<TrivalentGraph>,
        framing: usize,
        rng: &mut R,
    ) -> Self {
        let mut g = Self::random(graph, rng);
        g.values[framing] = GroupElement::IDENTITY;
        g
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    pub fn at(&self, vertex: usize) -> GroupElement {
        self.values[vertex]
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Pointwise product `(self * other)(v) = self(v) other(v)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(Error::ForeignGauge);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&g, &h)| g * h)
            .collect();
        Ok(GaugeTransformation {
            graph: self.graph.clone(),
            values,
        })
    }

    /// `a(e) -> g(source) a(e) g(target)^{-1}` on every oriented edge.
    pub fn apply(&self, conn: &Connection) -> Result<Connection> {
        if !same_graph(&self.graph, &conn.graph) {
            return Err(Error::ForeignGauge);
        }
        let values = conn
            .orientation
            .iter()
            .zip(&conn.values)
            .map(|(step, &a)| {
                let s = self.values[conn.graph.source(step)];
                let t = self.values[conn.graph.target(step)];
                s * a * t.inverse()
            })
            .collect();
        Ok(Connection {
            graph: conn.graph.clone(),
            orientation: conn.orientation.clone(),
            values,
        })
    }
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// A U(1) connection: one phase per edge on the oriented direction.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelianConnection {
    graph: Arc<TrivalentGraph>,
    orientation: Orientation,
    phases: Vec<f64>,
}

impl AbelianConnection {
    pub fn new(
        graph: Arc<TrivalentGraph>,
        orientation: Orientation,
        phases: Vec<f64>,
    ) -> Result<Self> {
        let expected = graph.edge_count();
        for actual in [orientation.edge_count(), phases.len()] {
            if actual != expected {
                return Err(Error::LengthMismatch { expected, actual });
            }
        }
        let phases = phases.into_iter().map(wrap_phase).collect();
        Ok(AbelianConnection {
            graph,
            orientation,
            phases,
        })
    }

    pub fn random<R: Rng + ?Sized>(graph: Arc<TrivalentGraph>, rng: &mut R) -> Self {
        let n = graph.edge_count();
        let phases = (0..n).map(|_| wrap_phase(rng.gen_range(-PI..PI))).collect();
        AbelianConnection {
            graph,
            orientation: Orientation::canonical(n),
            phases,
        }
    }

    pub fn graph(&self) -> &Arc<TrivalentGraph> {
        &self.graph
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    /// Phase on an oriented edge; reversal negates it.
    pub fn evaluate(&self, step: OrientedEdge) -> Result<f64> {
        self.graph.check_edge(step.edge)?;
        let stored = self.phases[step.edge];
        Ok(if self.orientation.direction(step.edge) == step.direction {
            stored
        } else {
            -stored
        })
    }

    pub fn edge_involution(&self, edges: &[usize]) -> Result<Self> {
        let mut phases = self.phases.clone();
        for &e in edges {
            self.graph.check_edge(e)?;
            phases[e] = wrap_phase(-phases[e]);
        }
        Ok(AbelianConnection {
            graph: self.graph.clone(),
            orientation: self.orientation.clone(),
            phases,
        })
    }

    /// `phi(e) -> phi(e) + u(source) - u(target)`.
    pub fn gauge(&self, u: &[f64]) -> Result<Self> {
        if u.len() != self.graph.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: self.graph.vertex_count(),
                actual: u.len(),
            });
        }
        let phases = self
            .orientation
            .iter()
            .zip(&self.phases)
            .map(|(step, &phi)| {
                wrap_phase(phi + u[self.graph.source(step)] - u[self.graph.target(step)])
            })
            .collect();
        Ok(AbelianConnection {
            graph: self.graph.clone(),
            orientation: self.orientation.clone(),
            phases,
        })
    }

    /// Diagonal embedding `phi -> diag(e^{i phi}, e^{-i phi})`.
    pub fn embed(&self) -> Connection {
        let values = self
            .phases
            .iter()
            .map(|&phi| {
                let (s, c) = phi.sin_cos();
                GroupElement::new(c, s, 0.0, 0.0)
            })
            .collect();
        Connection {
            graph: self.graph.clone(),
            orientation: self.orientation.clone(),
            values,
        }
    }

    /// Signed phase sums along the spanning-tree generators at `base`,
    /// reduced to `(-pi, pi]`. A complete invariant of the gauge orbit.
    pub fn project(&self, base: usize) -> Result<Vec<f64>> {
        self.graph
            .spanning_tree_generators(base)?
            .iter()
            .map(|p| {
                p.steps()
                    .iter()
                    .map(|&s| self.evaluate(s))
                    .sum::<Result<f64>>()
                    .map(wrap_phase)
            })
            .collect()
    }

    /// Solves for a vertex phase function `u` with `gauge(u) == other`,
    /// pinning `u(base) = 0` and propagating along the spanning tree. Returns
    /// `None` when the non-tree edges disagree by more than `tol`.
    pub fn gauge_equivalence(
        &self,
        other: &AbelianConnection,
        base: usize,
        tol: f64,
    ) -> Result<Option<Vec<f64>>> {
        if !same_graph(&self.graph, &other.graph) {
            return Err(Error::ForeignGauge);
        }
        let graph = &self.graph;
        let mut u = vec![0.0; graph.vertex_count()];
        for (v, slot) in u.iter_mut().enumerate() {
            let mut acc = 0.0;
            // Along the tree path base -> v: u(t) = u(s) + phi(e) - phi'(e).
            for step in graph.tree_path(base, v)? {
                acc += self.evaluate(step)? - other.evaluate(step)?;
            }
            *slot = wrap_phase(acc);
        }
        let moved = self.gauge(&u)?.reoriented_like(other)?;
        let worst = moved
            .phases
            .iter()
            .zip(&other.phases)
            .map(|(a, b)| wrap_phase(a - b).abs())
            .fold(0.0, f64::max);
        Ok((worst <= tol).then_some(u))
    }

    fn reoriented_like(&self, other: &AbelianConnection) -> Result<Self> {
        let phases = other
            .orientation
            .iter()
            .map(|s| self.evaluate(s))
            .collect::<Result<_>>()?;
        Ok(AbelianConnection {
            graph: self.graph.clone(),
            orientation: other.orientation.clone(),
            phases,
        })
    }
}

/// Outcome of the U(1) orbit classification check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbelianReport {
    pub graph: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    /// Trials where a gauge-moved copy had equal projection and a solved gauge.
    pub same_orbit_ok: usize,
    /// Trials where an independent connection had a different projection and
    /// no solvable gauge.
    pub distinct_ok: usize,
    /// Largest `|Tr h - 2 cos phi|` over generator holonomies of the embedding.
    pub max_trace_error: f64,
    pub passed: bool,
}

/// Checks on `n` random U(1) connections that equal projections and
/// constructible gauge equivalence coincide, and that the SU(2) embedding has
/// generator traces `2 cos` of the projection. Trial `i` draws from stream `i`
/// of `seed`.
pub fn verify_abelian(
    graph: &Arc<TrivalentGraph>,
    n: usize,
    seed: u64,
    tolerance: f64,
) -> Result<AbelianReport> {
    let mut report = AbelianReport {
        graph: graph.structural_id(),
        seed,
        samples: n,
        tolerance,
        same_orbit_ok: 0,
        distinct_ok: 0,
        max_trace_error: 0.0,
        passed: false,
    };
    let agree = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .all(|(x, y)| wrap_phase(x - y).abs() <= tolerance)
    };
    for i in 0..n {
        let mut rng = stream_rng(seed, i as u64);
        let phi = AbelianConnection::random(graph.clone(), &mut rng);
        let shift: Vec<f64> = (0..graph.vertex_count())
            .map(|_| rng.gen_range(-PI..PI))
            .collect();
        let moved = phi.gauge(&shift)?;
        let p = phi.project(0)?;
        if agree(&p, &moved.project(0)?) && phi.gauge_equivalence(&moved, 0, tolerance)?.is_some() {
            report.same_orbit_ok += 1;
        }
        let other = AbelianConnection::random(graph.clone(), &mut rng);
        if !agree(&p, &other.project(0)?) && phi.gauge_equivalence(&other, 0, tolerance)?.is_none()
        {
            report.distinct_ok += 1;
        }
        for (h, angle) in phi.embed().schottky_project(0)?.generators.iter().zip(&p) {
            report.max_trace_error = report
                .max_trace_error
                .max((h.trace() - 2.0 * angle.cos()).abs());
        }
    }
    report.passed =
        report.same_orbit_ok == n && report.distinct_ok == n && report.max_trace_error <= 1e-9;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::{stream_rng, ALGEBRA_TOL};

    fn theta() -> Arc<TrivalentGraph> {
        Arc::new(TrivalentGraph::theta())
    }

    #[test]
    fn trivial_connection_evaluates_to_identity() {
        let c = Connection::trivial(theta());
        for e in 0..3 {
            assert_eq!(
                c.evaluate(OrientedEdge::backward(e)).unwrap(),
                GroupElement::IDENTITY
            );
        }
        assert_eq!(c.conj_coords().0, vec![0.0; 3]);
        assert!(matches!(
            c.evaluate(OrientedEdge::forward(3)),
            Err(Error::ForeignEdge { .. })
        ));
    }

    #[test]
    fn reversal_inverts_and_reorientation_is_covariant() {
        let mut rng = stream_rng(3, 0);
        let c = Connection::random(theta(), &mut rng);
        let step = OrientedEdge::forward(1);
        let fwd = c.evaluate(step).unwrap();
        assert!(c
            .evaluate(step.reversed())
            .unwrap()
            .approx_eq(fwd.inverse(), ALGEBRA_TOL));
        let flipped = c.reoriented(&c.orientation().flipped(&[1])).unwrap();
        assert!(flipped.values()[1].approx_eq(c.values()[1].inverse(), ALGEBRA_TOL));
        assert!(flipped.evaluate(step).unwrap().approx_eq(fwd, ALGEBRA_TOL));
        assert_eq!(flipped.values()[0], c.values()[0]);
    }

    #[test]
    fn theta_loop_holonomy_is_b_a_inverse() {
        let mut rng = stream_rng(4, 0);
        let g = theta();
        let c = Connection::random(g.clone(), &mut rng);
        let (a, b) = (c.values()[0], c.values()[1]);
        let path = GraphPath::new(
            &g,
            vec![OrientedEdge::forward(1), OrientedEdge::backward(0)],
        )
        .unwrap();
        assert!(c.holonomy(&path).unwrap().approx_eq(b * a.inverse(), 1e-12));
        let there_and_back = path.concat(&path.reversed(), &g).unwrap();
        assert!(c
            .holonomy(&there_and_back)
            .unwrap()
            .approx_eq(GroupElement::IDENTITY, 1e-12));
    }

    #[test]
    fn holonomy_rejects_foreign_paths() {
        let g3 = TrivalentGraph::theta3();
        let path = GraphPath::new(&g3, vec![OrientedEdge::forward(3)]).unwrap();
        let c = Connection::trivial(theta());
        assert_eq!(c.holonomy(&path), Err(Error::ForeignPath));
    }

    #[test]
    fn gauge_examples() {
        let mut rng = stream_rng(5, 0);
        let g = theta();
        let c = Connection::random(g.clone(), &mut rng);
        let id = GaugeTransformation::identity(g.clone());
        assert_eq!(id.apply(&c).unwrap().values(), c.values());
        let h = GaugeTransformation::constant(g.clone(), GroupElement::haar(&mut rng));
        let triv = h.apply(&Connection::trivial(g.clone())).unwrap();
        for v in triv.values() {
            assert!(v.approx_eq(GroupElement::IDENTITY, 1e-12));
        }
        let other = GaugeTransformation::identity(Arc::new(TrivalentGraph::gamma2()));
        assert_eq!(other.apply(&c), Err(Error::ForeignGauge));
    }

    #[test]
    fn involution_examples() {
        let mut rng = stream_rng(6, 0);
        let c = Connection::random(theta(), &mut rng);
        assert_eq!(c.edge_involution(&[]).unwrap(), c);
        let twice = c
            .edge_involution(&[0, 2])
            .unwrap()
            .edge_involution(&[0, 2])
            .unwrap();
        assert_eq!(twice, c);
        let coords = c.edge_involution(&[1]).unwrap().conj_coords();
        assert!(coords.max_abs_diff(c.conj_coords().as_slice()) < 1e-15);
    }

    #[test]
    fn minus_identity_has_coordinate_one() {
        let g = Arc::new(TrivalentGraph::theta3());
        let mut values = vec![GroupElement::IDENTITY; 6];
        values[2] = -GroupElement::IDENTITY;
        let c = Connection::new(g, Orientation::canonical(6), values).unwrap();
        assert_eq!(c.conj_coords().0[2], 1.0);
    }

    #[test]
    fn abelian_embedding_examples() {
        let g = theta();
        let zero =
            AbelianConnection::new(g.clone(), Orientation::canonical(3), vec![0.0; 3]).unwrap();
        assert_eq!(zero.embed(), Connection::trivial(g.clone()));
        assert_eq!(zero.project(0).unwrap(), vec![0.0, 0.0]);
        let u = AbelianConnection::new(g, Orientation::canonical(3), vec![PI, -0.7, 0.3]).unwrap();
        let d = u.embed();
        assert!(d.values()[0].approx_eq(-GroupElement::IDENTITY, 1e-15));
        assert!((d.conj_coords().0[1] - 0.7 / PI).abs() < 1e-15);
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }
}
