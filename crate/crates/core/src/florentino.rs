//! The gauge-fixing section over the product of `V+` tetrahedra, its
//! edge-twisted variant, the induced map from the graph polytope to the
//! unitary Schottky space, and sampling checks of the section identity and
//! of injectivity.
//!
//! Tolerance checks are written as negated comparisons so NaN is a violation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::connection::{Connection, GaugeTransformation};
use crate::error::{Error, Result};
use crate::graph::{HyperbolicSplit, TrivalentGraph};
use crate::polytope::GraphPolytope;
use crate::schottky::{trinion_rep, SchottkyClass, TrinionRep};
use crate::su2::{icosian_grid, stream_rng, GroupElement};

/// Relation defect tolerated at each `V+` trinion after assembly.
pub const RELATION_TOL: f64 = 1e-10;
/// Reports keep at most this many violation records.
const MAX_RECORDED_VIOLATIONS: usize = 32;
/// Stream offset separating stabilizer trials from pair trials.
const STABILIZER_STREAM: u64 = 1 << 32;
/// Residual margin required between the identity and the rest of the grid.
pub const STABILIZER_MARGIN: f64 = 1e-4;
/// Points closer than this (in polytope slack) to the boundary are not interior.
const INTERIOR_SLACK: f64 = 1e-6;
/// Random joint configurations drawn from the grid per stabilizer point.
const JOINT_GRID_SAMPLES: usize = 64;

/// How the trinion representatives are built when assembling a section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionMode {
    /// Solve for the angle between the first two boundary axes.
    Exact,
    /// Put the second boundary element on a random axis. A broken builder
    /// used as a negative control.
    RandomAxis,
}

/// The split of `graph`, or `NotHyperbolic`.
pub fn hyperbolic(graph: &TrivalentGraph) -> Result<HyperbolicSplit> {
    graph.hyperbolic_split().ok_or(Error::NotHyperbolic)
}

/// Highest-id edge at every `V+` vertex.
pub fn default_twist(graph: &TrivalentGraph, split: &HyperbolicSplit) -> Vec<usize> {
    split
        .v_plus
        .iter()
        .map(|&v| graph.edge_slots(v)[2])
        .collect()
}

fn check_split(graph: &TrivalentGraph, split: &HyperbolicSplit) -> Result<()> {
    if graph.hyperbolic_split().is_none() {
        return Err(Error::NotHyperbolic);
    }
    if !split.is_valid_for(graph) {
        return Err(Error::SplitMismatch);
    }
    Ok(())
}

/// The section connection at `x`, a point of the product of the `V+`
/// tetrahedra. Edges are oriented out of `V+`; at each `V+` vertex the three
/// edges in ascending id order carry the trinion representative of their
/// coordinates.
pub fn section(
    graph: &Arc<TrivalentGraph>,
    split: &HyperbolicSplit,
    x: &[f64],
) -> Result<Connection> {
    build_section(graph, split, x, SectionMode::Exact, &mut stream_rng(0, 0))
}

/// Section assembly with a selectable trinion builder. `rng` is only drawn
/// from by [`SectionMode::RandomAxis`].
pub fn build_section<R: Rng + ?Sized>(
    graph: &Arc<TrivalentGraph>,
    split: &HyperbolicSplit,
    x: &[f64],
    mode: SectionMode,
    rng: &mut R,
) -> Result<Connection> {
    check_split(graph, split)?;
    let product = GraphPolytope::plus_product(graph, split)?;
    if let Some(vertex) = product.first_violation(x)? {
        return Err(Error::OutsidePolytope { vertex });
    }
    let orientation = graph.decay_orientation(split)?;
    let mut values = vec![GroupElement::IDENTITY; graph.edge_count()];
    for &v in &split.v_plus {
        let slots = graph.edge_slots(v);
        let [t1, t2, t3] = slots.map(|e| x[e]);
        let rep = match mode {
            SectionMode::Exact => trinion_rep(t1, t2, t3)?,
            SectionMode::RandomAxis => random_axis_rep(t1, t2, rng)?,
        };
        if mode == SectionMode::Exact {
            debug_assert!(rep.relation_defect() <= RELATION_TOL);
        }
        for (e, g) in slots.into_iter().zip(rep.as_array()) {
            values[e] = g;
        }
    }
    Connection::new(graph.clone(), orientation, values)
}

fn random_axis_rep<R: Rng + ?Sized>(t1: f64, t2: f64, rng: &mut R) -> Result<TrinionRep> {
    let a = GroupElement::from_class_axis(t1, [0.0, 0.0, 1.0])?;
    let axis = GroupElement::haar(rng).imaginary();
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let b = GroupElement::from_class_axis(t2, [axis[0] / n, axis[1] / n, axis[2] / n])?;
    Ok(TrinionRep {
        a,
        b,
        c: (a * b).inverse(),
    })
}

/// The section followed by the edge involutions of `twist`.
pub fn twisted_section(
    graph: &Arc<TrivalentGraph>,
    split: &HyperbolicSplit,
    x: &[f64],
    twist: &[usize],
) -> Result<Connection> {
    section(graph, split, x)?.edge_involution(twist)
}

/// The map from the graph polytope to the unitary Schottky space: project
/// the twisted section connection to its class of holonomies at vertex 0.
pub fn florentino_map(
    graph: &Arc<TrivalentGraph>,
    split: &HyperbolicSplit,
    x: &[f64],
    twist: &[usize],
) -> Result<SchottkyClass> {
    check_split(graph, split)?;
    if let Some(vertex) = GraphPolytope::of_graph(graph).first_violation(x)? {
        return Err(Error::OutsidePolytope { vertex });
    }
    twisted_section(graph, split, x, twist)?.schottky_project(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// Class coordinates of the section differ from the input point.
    SectionResidual,
    /// Boundary elements at a `V+` vertex do not multiply to the identity.
    RelationDefect,
    /// Two separated points map to classes closer than the tolerance.
    ClassCollision,
    /// A non-trivial gauge transformation fixes the section as well as the identity does.
    StabilizerMinimum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub sample: usize,
    pub kind: ViolationKind,
    pub value: f64,
}

/// Outcome of the gauge-stabilizer search at sampled points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilizerSummary {
    pub points: usize,
    pub interior_points: usize,
    /// Largest residual at the identity gauge (zero up to rounding).
    pub max_identity_residual: f64,
    /// Smallest residual over non-identity grid configurations.
    pub min_grid_residual: f64,
    /// Smallest margin `grid - identity` over interior points.
    pub min_interior_margin: f64,
    /// Largest distance from the identity reached by local refinement when it
    /// drove the residual below the margin.
    pub max_refined_distance: f64,
    pub passed: bool,
}

/// Verification record for the section identity or for injectivity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionReport {
    pub graph: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub mode: SectionMode,
    pub twist: Vec<usize>,
    pub max_section_residual: f64,
    pub max_relation_defect: f64,
    pub injectivity_pairs: usize,
    pub separation: Option<f64>,
    pub min_class_separation: Option<f64>,
    pub stabilizer: Option<StabilizerSummary>,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub passed: bool,
}

impl SectionReport {
    fn new(
        graph: &TrivalentGraph,
        seed: u64,
        samples: usize,
        tolerance: f64,
        mode: SectionMode,
    ) -> Self {
        SectionReport {
            graph: graph.structural_id(),
            seed,
            samples,
            tolerance,
            mode,
            twist: Vec::new(),
            max_section_residual: 0.0,
            max_relation_defect: 0.0,
            injectivity_pairs: 0,
            separation: None,
            min_class_separation: None,
            stabilizer: None,
            violation_count: 0,
            violations: Vec::new(),
            passed: true,
        }
    }

    fn record(&mut self, violations: impl IntoIterator<Item = Violation>) {
        for v in violations {
            self.violation_count += 1;
            if self.violations.len() < MAX_RECORDED_VIOLATIONS {
                self.violations.push(v);
            }
        }
        self.passed = self.violation_count == 0;
    }
}

/// Samples `n` points of the product of `V+` tetrahedra and checks that the
/// section reproduces their class coordinates to `tolerance` (sup norm).
pub fn verify_section(
    graph: &Arc<TrivalentGraph>,
    n: usize,
    seed: u64,
    tolerance: f64,
) -> Result<SectionReport> {
    verify_section_mode(graph, n, seed, tolerance, SectionMode::Exact)
}

pub fn verify_section_mode(
    graph: &Arc<TrivalentGraph>,
    n: usize,
    seed: u64,
    tolerance: f64,
    mode: SectionMode,
) -> Result<SectionReport> {
    let split = hyperbolic(graph)?;
    let product = GraphPolytope::plus_product(graph, &split)?;
    let trials: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = product.sample_point(&mut rng)?;
            let conn = build_section(graph, &split, &x, mode, &mut rng)?;
            let residual = conn.conj_coords().max_abs_diff(&x);
            let defect = split
                .v_plus
                .iter()
                .map(|&v| {
                    let [a, b, c] = graph.edge_slots(v).map(|e| conn.values()[e]);
                    (a * b * c).distance(GroupElement::IDENTITY)
                })
                .fold(0.0, f64::max);
            Ok((residual, defect))
        })
        .collect::<Result<_>>()?;

    let mut report = SectionReport::new(graph, seed, n, tolerance, mode);
    report.max_section_residual = trials.iter().map(|t| t.0).fold(0.0, f64::max);
    report.max_relation_defect = trials.iter().map(|t| t.1).fold(0.0, f64::max);
    let mut violations = Vec::new();
    for (i, &(residual, defect)) in trials.iter().enumerate() {
        if !(residual < tolerance) {
            violations.push(Violation {
                sample: i,
                kind: ViolationKind::SectionResidual,
                value: residual,
            });
        }
        if !(defect <= RELATION_TOL) {
            violations.push(Violation {
                sample: i,
                kind: ViolationKind::RelationDefect,
                value: defect,
            });
        }
    }
    report.record(violations);
    Ok(report)
}

/// Parameters of an injectivity run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivityCheck {
    pub pairs: usize,
    /// Minimum sup-norm distance between the two points of a pair.
    pub separation: f64,
    /// Class distances must exceed this.
    pub tolerance: f64,
    pub stabilizer_points: usize,
    /// Edges to twist; `None` selects [`default_twist`].
    pub twist: Option<Vec<usize>>,
}

impl InjectivityCheck {
    pub fn new(pairs: usize, separation: f64, tolerance: f64) -> Self {
        InjectivityCheck {
            pairs,
            separation,
            tolerance,
            stabilizer_points: 100,
            twist: None,
        }
    }
}

/// Samples pairs of separated points of the graph polytope and checks that
/// their images under [`florentino_map`] are distinct classes; then searches
/// the framed gauge group for transformations fixing the section.
pub fn verify_injectivity(
    graph: &Arc<TrivalentGraph>,
    check: &InjectivityCheck,
    seed: u64,
) -> Result<SectionReport> {
    let split = hyperbolic(graph)?;
    let twist = check
        .twist
        .clone()
        .unwrap_or_else(|| default_twist(graph, &split));
    for &e in &twist {
        graph.check_edge(e)?;
    }
    let poly = GraphPolytope::of_graph(graph);

    let distances: Vec<f64> = (0..check.pairs)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = poly.sample_point(&mut rng)?;
            let y = loop {
                let y = poly.sample_point(&mut rng)?;
                let gap = x
                    .iter()
                    .zip(&y)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                if gap >= check.separation {
                    break y;
                }
            };
            let fx = florentino_map(graph, &split, &x, &twist)?;
            let fy = florentino_map(graph, &split, &y, &twist)?;
            fx.class_distance(&fy)
        })
        .collect::<Result<_>>()?;

    let mut report = SectionReport::new(
        graph,
        seed,
        check.pairs,
        check.tolerance,
        SectionMode::Exact,
    );
    report.injectivity_pairs = check.pairs;
    report.separation = Some(check.separation);
    report.min_class_separation = distances.iter().copied().reduce(f64::min);
    report.twist = twist.clone();
    let mut violations: Vec<Violation> = distances
        .iter()
        .enumerate()
        .filter(|(_, &d)| !(d > check.tolerance))
        .map(|(i, &d)| Violation {
            sample: i,
            kind: ViolationKind::ClassCollision,
            value: d,
        })
        .collect();

    if check.stabilizer_points > 0 {
        let (summary, stab_violations) =
            stabilizer_search(graph, &split, &poly, &twist, check.stabilizer_points, seed)?;
        violations.extend(stab_violations);
        report.stabilizer = Some(summary);
    }
    report.record(violations);
    Ok(report)
}

/// Least-squares residual of `g . a = a`:
/// `sqrt(sum_e |g(s) a(e) g(t)^{-1} - a(e)|^2)`.
pub fn stabilizer_residual(conn: &Connection, gauge: &[GroupElement]) -> f64 {
    let graph = conn.graph();
    conn.orientation()
        .iter()
        .zip(conn.values())
        .map(|(step, &a)| {
            let moved = gauge[graph.source(step)] * a * gauge[graph.target(step)].inverse();
            let d = moved.distance(a);
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Lowest `V-` vertex of each component: the framing vertices pinned to the
/// identity to remove global conjugation.
pub fn framing_vertices(graph: &TrivalentGraph, split: &HyperbolicSplit) -> Vec<usize> {
    let components = graph.components();
    let count = components.iter().copied().max().map_or(0, |m| m + 1);
    let mut framing = vec![usize::MAX; count];
    for &v in &split.v_minus {
        let c = components[v];
        framing[c] = framing[c].min(v);
    }
    framing
}

struct PointOutcome {
    interior: bool,
    identity_residual: f64,
    grid_min: f64,
    refined_residual: f64,
    refined_distance: f64,
}

fn stabilizer_search(
    graph: &Arc<TrivalentGraph>,
    split: &HyperbolicSplit,
    poly: &GraphPolytope,
    twist: &[usize],
    points: usize,
    seed: u64,
) -> Result<(StabilizerSummary, Vec<Violation>)> {
    let framing = framing_vertices(graph, split);
    let free: Vec<usize> = (0..graph.vertex_count())
        .filter(|v| !framing.contains(v))
        .collect();
    let grid: Vec<GroupElement> = icosian_grid()
        .into_iter()
        .filter(|g| !g.approx_eq(GroupElement::IDENTITY, 1e-12))
        .collect();

    let outcomes: Vec<PointOutcome> = (0..points)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, STABILIZER_STREAM + i as u64);
            let x = poly.sample_point(&mut rng)?;
            let conn = twisted_section(graph, split, &x, twist)?;
            let identity = vec![GroupElement::IDENTITY; graph.vertex_count()];
            let identity_residual = stabilizer_residual(&conn, &identity);

            let mut best = (f64::INFINITY, identity.clone());
            let mut consider = |gauge: Vec<GroupElement>| {
                let r = stabilizer_residual(&conn, &gauge);
                if r < best.0 {
                    best = (r, gauge);
                }
            };
            for &w in &free {
                for &g in &grid {
                    let mut gauge = identity.clone();
                    gauge[w] = g;
                    consider(gauge);
                }
            }
            for _ in 0..JOINT_GRID_SAMPLES {
                let mut gauge = identity.clone();
                for &w in &free {
                    gauge[w] = grid[rng.gen_range(0..grid.len())];
                }
                consider(gauge);
            }
            let (grid_min, start) = best;
            let (refined_residual, refined) = refine(&conn, start, &free);
            let refined_distance = free
                .iter()
                .map(|&w| refined[w].distance(GroupElement::IDENTITY))
                .fold(0.0, f64::max);
            Ok(PointOutcome {
                interior: poly.slack(&x) > INTERIOR_SLACK,
                identity_residual,
                grid_min,
                refined_residual,
                refined_distance,
            })
        })
        .collect::<Result<_>>()?;

    let mut violations = Vec::new();
    let mut summary = StabilizerSummary {
        points,
        interior_points: 0,
        max_identity_residual: 0.0,
        min_grid_residual: f64::MAX,
        min_interior_margin: f64::MAX,
        max_refined_distance: 0.0,
        passed: true,
    };
    for (i, o) in outcomes.iter().enumerate() {
        summary.max_identity_residual = summary.max_identity_residual.max(o.identity_residual);
        summary.min_grid_residual = summary.min_grid_residual.min(o.grid_min);
        let margin = o.grid_min - o.identity_residual;
        let mut ok = margin >= 0.0;
        if o.interior {
            summary.interior_points += 1;
            summary.min_interior_margin = summary.min_interior_margin.min(margin);
            ok &= margin >= STABILIZER_MARGIN;
        }
        // Descent may only reach residuals below the margin near the identity.
        if o.refined_residual < STABILIZER_MARGIN {
            summary.max_refined_distance = summary.max_refined_distance.max(o.refined_distance);
            ok &= o.refined_distance <= 1e-3;
        }
        if !ok {
            violations.push(Violation {
                sample: i,
                kind: ViolationKind::StabilizerMinimum,
                value: margin,
            });
        }
    }
    summary.passed = violations.is_empty();
    Ok((summary, violations))
}

/// Coordinate descent over the free vertices with shrinking rotation steps.
fn refine(
    conn: &Connection,
    mut gauge: Vec<GroupElement>,
    free: &[usize],
) -> (f64, Vec<GroupElement>) {
    let mut current = stabilizer_residual(conn, &gauge);
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut step = 0.5;
    while step > 1e-7 {
        let mut improved = false;
        for &w in free {
            for axis in axes {
                for sign in [1.0, -1.0] {
                    let kick = GroupElement::rotation_about(axis, sign * step);
                    let old = gauge[w];
                    gauge[w] = kick * old;
                    let r = stabilizer_residual(conn, &gauge);
                    if r < current {
                        current = r;
                        improved = true;
                    } else {
                        gauge[w] = old;
                    }
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (current, gauge)
}

/// Applies a gauge transformation to the section connection and projects;
/// the class must not move.
pub fn gauge_moved_class(
    graph: &Arc<TrivalentGraph>,
    split: &HyperbolicSplit,
    x: &[f64],
    twist: &[usize],
    gauge: &GaugeTransformation,
) -> Result<SchottkyClass> {
    gauge
        .apply(&twisted_section(graph, split, x, twist)?)?
        .schottky_project(0)
}
