//! Trivalent multigraphs with loops.
//!
//! A graph is stored as a list of flags (edge ends). Edge `e` owns flags
//! `2e` and `2e + 1`; a loop owns two distinct flags at the same vertex, so
//! reversing a loop is still a well-defined involution on oriented edges.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unvalidated graph description: a vertex count and edge endpoint pairs.
/// Loops are written as `[i, i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGraph {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

/// An edge end: the vertex it sits at and the edge it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Flag {
    pub vertex: usize,
    pub edge: usize,
}

/// A validated trivalent multigraph of genus `g >= 2`, possibly disconnected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivalentGraph {
    vertex_count: usize,
    flags: Vec<Flag>,
    /// Flag ids incident to each vertex, sorted by (edge id, flag id).
    incidence: Vec<[usize; 3]>,
    genus: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    /// From the edge's first flag to its second.
    Forward,
    Backward,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

/// A path of length one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub edge: usize,
    pub direction: Direction,
}

impl OrientedEdge {
    pub fn forward(edge: usize) -> Self {
        OrientedEdge {
            edge,
            direction: Direction::Forward,
        }
    }

    pub fn backward(edge: usize) -> Self {
        OrientedEdge {
            edge,
            direction: Direction::Backward,
        }
    }

    /// The edge involution: same edge, opposite direction.
    pub fn reversed(self) -> Self {
        OrientedEdge {
            edge: self.edge,
            direction: self.direction.flipped(),
        }
    }

    pub fn source_flag(self) -> usize {
        match self.direction {
            Direction::Forward => 2 * self.edge,
            Direction::Backward => 2 * self.edge + 1,
        }
    }

    pub fn target_flag(self) -> usize {
        self.reversed().source_flag()
    }
}

impl fmt::Display for OrientedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.direction {
            Direction::Forward => write!(f, "e{}", self.edge),
            Direction::Backward => write!(f, "e{}'", self.edge),
        }
    }
}

/// A non-empty sequence of oriented edges, each starting where the previous ended.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphPath {
    steps: Vec<OrientedEdge>,
}

impl GraphPath {
    pub fn new(graph: &TrivalentGraph, steps: Vec<OrientedEdge>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::EmptyPath);
        }
        for step in &steps {
            graph.check_edge(step.edge)?;
        }
        for (i, pair) in steps.windows(2).enumerate() {
            if graph.target(pair[0]) != graph.source(pair[1]) {
                return Err(Error::BrokenPath { step: i + 1 });
            }
        }
        Ok(GraphPath { steps })
    }

    pub fn steps(&self) -> &[OrientedEdge] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn source(&self, graph: &TrivalentGraph) -> usize {
        graph.source(self.steps[0])
    }

    pub fn target(&self, graph: &TrivalentGraph) -> usize {
        graph.target(*self.steps.last().expect("non-empty path"))
    }

    pub fn is_closed(&self, graph: &TrivalentGraph) -> bool {
        self.source(graph) == self.target(graph)
    }

    /// The same path walked backwards.
    pub fn reversed(&self) -> Self {
        GraphPath {
            steps: self.steps.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    /// Concatenation; `None` unless `self` ends where `other` starts.
    pub fn concat(&self, other: &GraphPath, graph: &TrivalentGraph) -> Option<Self> {
        if self.target(graph) != other.source(graph) {
            return None;
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        Some(GraphPath { steps })
    }
}

impl fmt::Display for GraphPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.steps.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A choice of direction for every edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    directions: Vec<Direction>,
}

impl Orientation {
    /// Every edge oriented from its first flag to its second.
    pub fn canonical(edge_count: usize) -> Self {
        Orientation {
            directions: vec![Direction::Forward; edge_count],
        }
    }

    pub fn from_directions(directions: Vec<Direction>) -> Self {
        Orientation { directions }
    }

    pub fn edge_count(&self) -> usize {
        self.directions.len()
    }

    pub fn direction(&self, edge: usize) -> Direction {
        self.directions[edge]
    }

    pub fn oriented(&self, edge: usize) -> OrientedEdge {
        OrientedEdge {
            edge,
            direction: self.directions[edge],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = OrientedEdge> + '_ {
        (0..self.directions.len()).map(|e| self.oriented(e))
    }

    /// Flip the listed edges.
    pub fn flipped(&self, edges: &[usize]) -> Self {
        let mut directions = self.directions.clone();
        for &e in edges {
            directions[e] = directions[e].flipped();
        }
        Orientation { directions }
    }

    /// The diagonal involution: every edge flipped.
    pub fn reversed(&self) -> Self {
        Orientation {
            directions: self.directions.iter().map(|d| d.flipped()).collect(),
        }
    }
}

/// A bipartition of the vertices into two isotropic halves of equal size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperbolicSplit {
    pub v_plus: Vec<usize>,
    pub v_minus: Vec<usize>,
    /// Pairing `V+ -> V-` as `(plus, minus)` in ascending order of `plus`.
    pub matching: Vec<(usize, usize)>,
}

impl HyperbolicSplit {
    pub fn is_plus(&self, vertex: usize) -> bool {
        self.v_plus.binary_search(&vertex).is_ok()
    }

    /// Whether this split is a valid hyperbolic split of `graph`.
    pub fn is_valid_for(&self, graph: &TrivalentGraph) -> bool {
        let n = graph.vertex_count();
        let mut side = vec![None; n];
        for &v in &self.v_plus {
            if v >= n || side[v].is_some() {
                return false;
            }
            side[v] = Some(true);
        }
        for &v in &self.v_minus {
            if v >= n || side[v].is_some() {
                return false;
            }
            side[v] = Some(false);
        }
        if side.iter().any(Option::is_none) || self.v_plus.len() != self.v_minus.len() {
            return false;
        }
        (0..graph.edge_count()).all(|e| {
            let (a, b) = graph.endpoints(e);
            side[a] != side[b]
        })
    }
}

impl TrivalentGraph {
    pub fn validate(raw: &RawGraph) -> Result<Self> {
        if raw.vertices == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut flags = Vec::with_capacity(2 * raw.edges.len());
        for (edge, &[a, b]) in raw.edges.iter().enumerate() {
            for vertex in [a, b] {
                if vertex >= raw.vertices {
                    return Err(Error::DanglingFlag {
                        edge,
                        vertex,
                        vertex_count: raw.vertices,
                    });
                }
                flags.push(Flag { vertex, edge });
            }
        }
        let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); raw.vertices];
        for (id, flag) in flags.iter().enumerate() {
            per_vertex[flag.vertex].push(id);
        }
        let mut incidence = Vec::with_capacity(raw.vertices);
        for (vertex, local) in per_vertex.into_iter().enumerate() {
            let Ok(local) = <[usize; 3]>::try_from(local.as_slice()) else {
                return Err(Error::NonTrivalent {
                    vertex,
                    flags: local.len(),
                });
            };
            incidence.push(local);
        }
        // Trivalence gives 3|V| = 2|E|, so |V| is even and g = |V|/2 + 1.
        let genus = raw.vertices / 2 + 1;
        Ok(TrivalentGraph {
            vertex_count: raw.vertices,
            flags,
            incidence,
            genus,
        })
    }

    /// The theta graph: two vertices joined by three edges.
    pub fn theta() -> Self {
        Self::validate(&RawGraph {
            vertices: 2,
            edges: vec![[0, 1], [0, 1], [0, 1]],
        })
        .expect("theta is trivalent")
    }

    /// Two vertices, each carrying a loop, joined by a bridge.
    pub fn gamma2() -> Self {
        Self::validate(&RawGraph {
            vertices: 2,
            edges: vec![[0, 0], [0, 1], [1, 1]],
        })
        .expect("gamma2 is trivalent")
    }

    /// The genus 3 multi-theta graph: a 4-cycle with two doubled edges.
    pub fn theta3() -> Self {
        Self::validate(&RawGraph {
            vertices: 4,
            edges: vec![[0, 1], [0, 1], [0, 2], [1, 3], [2, 3], [2, 3]],
        })
        .expect("theta3 is trivalent")
    }

    /// `k` disjoint copies of the theta graph (genus `k + 1`).
    pub fn theta_power(k: usize) -> Self {
        assert!(k >= 1, "theta power needs k >= 1");
        let theta = Self::theta();
        (1..k).fold(theta.clone(), |acc, _| acc.disjoint_union(&theta))
    }

    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            vertices: self.vertex_count,
            edges: (0..self.edge_count())
                .map(|e| {
                    let (a, b) = self.endpoints(e);
                    [a, b]
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.flags.len() / 2
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    /// The three flags at `vertex`, sorted by edge id.
    pub fn flags_at(&self, vertex: usize) -> [usize; 3] {
        self.incidence[vertex]
    }

    /// The three edge slots at `vertex` in ascending edge order; a loop fills two slots.
    pub fn edge_slots(&self, vertex: usize) -> [usize; 3] {
        self.incidence[vertex].map(|f| self.flags[f].edge)
    }

    pub fn endpoints(&self, edge: usize) -> (usize, usize) {
        (self.flags[2 * edge].vertex, self.flags[2 * edge + 1].vertex)
    }

    pub fn is_loop(&self, edge: usize) -> bool {
        let (a, b) = self.endpoints(edge);
        a == b
    }

    pub fn loop_count(&self) -> usize {
        (0..self.edge_count()).filter(|&e| self.is_loop(e)).count()
    }

    pub fn source(&self, step: OrientedEdge) -> usize {
        self.flags[step.source_flag()].vertex
    }

    pub fn target(&self, step: OrientedEdge) -> usize {
        self.flags[step.target_flag()].vertex
    }

    /// Oriented edges leaving `vertex`, one per local flag.
    pub fn outgoing(&self, vertex: usize) -> [OrientedEdge; 3] {
        self.incidence[vertex].map(|f| OrientedEdge {
            edge: f / 2,
            direction: if f % 2 == 0 {
                Direction::Forward
            } else {
                Direction::Backward
            },
        })
    }

    pub(crate) fn check_edge(&self, edge: usize) -> Result<()> {
        if edge < self.edge_count() {
            Ok(())
        } else {
            Err(Error::ForeignEdge {
                edge,
                edge_count: self.edge_count(),
            })
        }
    }

    pub(crate) fn check_vertex(&self, vertex: usize) -> Result<()> {
        if vertex < self.vertex_count {
            Ok(())
        } else {
            Err(Error::ForeignVertex {
                vertex,
                vertex_count: self.vertex_count,
            })
        }
    }

    /// Symmetric vertex adjacency matrix: entry `(i, j)` counts edges joining
    /// `i` and `j`, and a loop adds 2 on the diagonal.
    pub fn adjacency_form(&self) -> Vec<Vec<u32>> {
        let n = self.vertex_count;
        let mut q = vec![vec![0u32; n]; n];
        for e in 0..self.edge_count() {
            let (a, b) = self.endpoints(e);
            q[a][b] += 1;
            q[b][a] += 1;
        }
        q
    }

    /// Component label per vertex, numbered in order of lowest vertex id.
    pub fn components(&self) -> Vec<usize> {
        let n = self.vertex_count;
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for step in self.outgoing(v) {
                    let w = self.target(step);
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Splits the vertices into two isotropic halves when the graph is
    /// loop-free and bipartite. The lowest vertex of every component lands in
    /// `v_plus`.
    pub fn hyperbolic_split(&self) -> Option<HyperbolicSplit> {
        if self.loop_count() > 0 {
            return None;
        }
        let n = self.vertex_count;
        let mut colour: Vec<Option<bool>> = vec![None; n];
        for start in 0..n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(true);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].expect("coloured on push");
                for step in self.outgoing(v) {
                    let w = self.target(step);
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let v_plus: Vec<usize> = (0..n).filter(|&v| colour[v] == Some(true)).collect();
        let v_minus: Vec<usize> = (0..n).filter(|&v| colour[v] == Some(false)).collect();
        let matching = self.default_matching(&v_plus, &v_minus);
        Some(HyperbolicSplit {
            v_plus,
            v_minus,
            matching,
        })
    }

    /// Pairs each `V+` vertex (ascending) with its lowest adjacent unmatched
    /// `V-` vertex; leftovers are paired by ascending id.
    fn default_matching(&self, v_plus: &[usize], v_minus: &[usize]) -> Vec<(usize, usize)> {
        let mut taken = vec![false; self.vertex_count];
        let mut partner: Vec<Option<usize>> = vec![None; v_plus.len()];
        for (i, &p) in v_plus.iter().enumerate() {
            let mut neighbours: Vec<usize> = self
                .outgoing(p)
                .iter()
                .map(|&s| self.target(s))
                .filter(|&w| !taken[w])
                .collect();
            neighbours.sort_unstable();
            if let Some(&m) = neighbours.first() {
                taken[m] = true;
                partner[i] = Some(m);
            }
        }
        let mut rest = v_minus.iter().copied().filter(|&m| !taken[m]);
        v_plus
            .iter()
            .zip(partner)
            .map(|(&p, m)| {
                (
                    p,
                    m.unwrap_or_else(|| rest.next().expect("halves have equal size")),
                )
            })
            .collect()
    }

    /// Orients every edge out of `V+`.
    pub fn decay_orientation(&self, split: &HyperbolicSplit) -> Result<Orientation> {
        if !split.is_valid_for(self) {
            return Err(Error::SplitMismatch);
        }
        let directions = (0..self.edge_count())
            .map(|e| {
                if split.is_plus(self.endpoints(e).0) {
                    Direction::Forward
                } else {
                    Direction::Backward
                }
            })
            .collect();
        Ok(Orientation::from_directions(directions))
    }

    /// Greedy spanning forest by ascending edge id. Returns a flag per edge.
    pub fn spanning_tree(&self) -> Vec<bool> {
        let mut parent: Vec<usize> = (0..self.vertex_count).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        (0..self.edge_count())
            .map(|e| {
                let (a, b) = self.endpoints(e);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    false
                } else {
                    parent[ra] = rb;
                    true
                }
            })
            .collect()
    }

    /// For every vertex of `base`'s component, the oriented tree edge leading
    /// back towards `base` (`None` at the base and outside the component).
    fn tree_parents(&self, tree: &[bool], base: usize) -> Vec<Option<OrientedEdge>> {
        let mut towards_base: Vec<Option<OrientedEdge>> = vec![None; self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        seen[base] = true;
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for step in self.outgoing(v) {
                let w = self.target(step);
                if tree[step.edge] && !seen[w] {
                    seen[w] = true;
                    towards_base[w] = Some(step.reversed());
                    queue.push_back(w);
                }
            }
        }
        towards_base
    }

    fn tree_path_to_base(
        parents: &[Option<OrientedEdge>],
        graph: &Self,
        mut v: usize,
    ) -> Vec<OrientedEdge> {
        let mut steps = Vec::new();
        while let Some(step) = parents[v] {
            steps.push(step);
            v = graph.target(step);
        }
        steps
    }

    /// Free generators of the fundamental group at `base`: one closed path
    /// per non-tree edge, running out along the tree, across the edge (in its
    /// forward direction) and back along the tree. The tree is the greedy
    /// ascending-edge-id spanning tree.
    pub fn spanning_tree_generators(&self, base: usize) -> Result<Vec<GraphPath>> {
        self.check_vertex(base)?;
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let tree = self.spanning_tree();
        let parents = self.tree_parents(&tree, base);
        let mut generators = Vec::with_capacity(self.genus);
        for e in (0..self.edge_count()).filter(|&e| !tree[e]) {
            let step = OrientedEdge::forward(e);
            let back_from_source = Self::tree_path_to_base(&parents, self, self.source(step));
            let mut steps: Vec<OrientedEdge> = back_from_source
                .iter()
                .rev()
                .map(|s| s.reversed())
                .collect();
            steps.push(step);
            steps.extend(Self::tree_path_to_base(&parents, self, self.target(step)));
            generators.push(GraphPath { steps });
        }
        Ok(generators)
    }

    /// Tree path from `base` to `vertex` as oriented edges (empty at the base).
    pub fn tree_path(&self, base: usize, vertex: usize) -> Result<Vec<OrientedEdge>> {
        self.check_vertex(base)?;
        self.check_vertex(vertex)?;
        let tree = self.spanning_tree();
        let parents = self.tree_parents(&tree, base);
        if vertex != base && parents[vertex].is_none() {
            return Err(Error::Disconnected);
        }
        let back = Self::tree_path_to_base(&parents, self, vertex);
        Ok(back.iter().rev().map(|s| s.reversed()).collect())
    }

    /// All closed paths of length `d` based at `vertex`, backtracks included.
    pub fn enumerate_loops(&self, vertex: usize, d: usize) -> Result<Vec<GraphPath>> {
        self.check_vertex(vertex)?;
        let mut out = Vec::new();
        if d == 0 {
            return Ok(out);
        }
        let mut stack = Vec::with_capacity(d);
        self.extend_walks(vertex, vertex, d, &mut stack, &mut out);
        Ok(out)
    }

    fn extend_walks(
        &self,
        at: usize,
        home: usize,
        remaining: usize,
        stack: &mut Vec<OrientedEdge>,
        out: &mut Vec<GraphPath>,
    ) {
        for step in self.outgoing(at) {
            let next = self.target(step);
            stack.push(step);
            if remaining == 1 {
                if next == home {
                    out.push(GraphPath {
                        steps: stack.clone(),
                    });
                }
            } else {
                self.extend_walks(next, home, remaining - 1, stack, out);
            }
            stack.pop();
        }
    }

    /// Disjoint union; the second graph's vertex and edge ids are shifted.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift_v = self.vertex_count;
        let mut raw = self.to_raw();
        raw.vertices += other.vertex_count;
        raw.edges.extend(
            other
                .to_raw()
                .edges
                .into_iter()
                .map(|[a, b]| [a + shift_v, b + shift_v]),
        );
        Self::validate(&raw).expect("union of trivalent graphs is trivalent")
    }

    /// Short, stable, human-readable identifier of the labelled structure.
    pub fn structural_id(&self) -> String {
        let edges: Vec<String> = (0..self.edge_count())
            .map(|e| {
                let (a, b) = self.endpoints(e);
                format!("{a}-{b}")
            })
            .collect();
        format!("g{}:{}", self.genus, edges.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(vertices: usize, edges: &[[usize; 2]]) -> RawGraph {
        RawGraph {
            vertices,
            edges: edges.to_vec(),
        }
    }

    #[test]
    fn validate_rejects_bad_descriptions() {
        assert_eq!(
            TrivalentGraph::validate(&raw(1, &[[0, 0]])),
            Err(Error::NonTrivalent {
                vertex: 0,
                flags: 2
            })
        );
        assert_eq!(
            TrivalentGraph::validate(&raw(0, &[])),
            Err(Error::EmptyGraph)
        );
        assert!(matches!(
            TrivalentGraph::validate(&raw(2, &[[0, 1], [0, 1], [0, 2]])),
            Err(Error::DanglingFlag {
                edge: 2,
                vertex: 2,
                ..
            })
        ));
    }

    #[test]
    fn builtin_genera() {
        assert_eq!(TrivalentGraph::theta().genus(), 2);
        assert_eq!(TrivalentGraph::gamma2().genus(), 2);
        assert_eq!(TrivalentGraph::theta3().genus(), 3);
        let tt = TrivalentGraph::theta().disjoint_union(&TrivalentGraph::theta());
        assert_eq!((tt.vertex_count(), tt.edge_count(), tt.genus()), (4, 6, 3));
    }

    #[test]
    fn adjacency_forms_of_builtins() {
        assert_eq!(
            TrivalentGraph::theta().adjacency_form(),
            vec![vec![0, 3], vec![3, 0]]
        );
        assert_eq!(
            TrivalentGraph::gamma2().adjacency_form(),
            vec![vec![2, 1], vec![1, 2]]
        );
        assert_eq!(
            TrivalentGraph::theta3().adjacency_form(),
            vec![
                vec![0, 2, 1, 0],
                vec![2, 0, 0, 1],
                vec![1, 0, 0, 2],
                vec![0, 1, 2, 0]
            ]
        );
    }

    #[test]
    fn splits() {
        let s = TrivalentGraph::theta().hyperbolic_split().unwrap();
        assert_eq!(
            (s.v_plus.as_slice(), s.v_minus.as_slice()),
            (&[0][..], &[1][..])
        );
        assert!(TrivalentGraph::gamma2().hyperbolic_split().is_none());
        let s = TrivalentGraph::theta3().hyperbolic_split().unwrap();
        assert_eq!(s.v_plus, vec![0, 3]);
        assert_eq!(s.v_minus, vec![1, 2]);
        assert_eq!(s.matching, vec![(0, 1), (3, 2)]);
    }

    #[test]
    fn decay_orientation_sources_in_plus() {
        let theta = TrivalentGraph::theta();
        let split = theta.hyperbolic_split().unwrap();
        let o = theta.decay_orientation(&split).unwrap();
        for step in o.iter() {
            assert_eq!((theta.source(step), theta.target(step)), (0, 1));
        }

        let t3 = TrivalentGraph::theta3();
        let split = t3.hyperbolic_split().unwrap();
        let o = t3.decay_orientation(&split).unwrap();
        let mut as_target = [0; 4];
        for step in o.iter() {
            assert!(split.is_plus(t3.source(step)));
            as_target[t3.target(step)] += 1;
        }
        assert_eq!(as_target, [0, 3, 3, 0]);

        let g2 = TrivalentGraph::gamma2();
        let bogus = HyperbolicSplit {
            v_plus: vec![0],
            v_minus: vec![1],
            matching: vec![(0, 1)],
        };
        assert_eq!(g2.decay_orientation(&bogus), Err(Error::SplitMismatch));
    }

    #[test]
    fn theta_generators() {
        let theta = TrivalentGraph::theta();
        let gens = theta.spanning_tree_generators(0).unwrap();
        let expect: Vec<Vec<OrientedEdge>> = vec![
            vec![OrientedEdge::forward(1), OrientedEdge::backward(0)],
            vec![OrientedEdge::forward(2), OrientedEdge::backward(0)],
        ];
        assert_eq!(
            gens.iter().map(|p| p.steps().to_vec()).collect::<Vec<_>>(),
            expect
        );
    }

    #[test]
    fn gamma2_generators_conjugate_across_bridge() {
        let g2 = TrivalentGraph::gamma2();
        let gens = g2.spanning_tree_generators(0).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].steps(), &[OrientedEdge::forward(0)]);
        assert_eq!(
            gens[1].steps(),
            &[
                OrientedEdge::forward(1),
                OrientedEdge::forward(2),
                OrientedEdge::backward(1)
            ]
        );
        for p in &gens {
            assert!(p.is_closed(&g2));
            assert_eq!(p.source(&g2), 0);
        }
    }

    #[test]
    fn generators_need_connectivity() {
        let tt = TrivalentGraph::theta_power(2);
        assert_eq!(tt.spanning_tree_generators(0), Err(Error::Disconnected));
        assert_eq!(
            TrivalentGraph::theta3()
                .spanning_tree_generators(0)
                .unwrap()
                .len(),
            3
        );
    }

    #[test]
    fn short_loops() {
        let theta = TrivalentGraph::theta();
        assert!(theta.enumerate_loops(0, 1).unwrap().is_empty());
        assert_eq!(
            TrivalentGraph::gamma2()
                .enumerate_loops(0, 1)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn path_validation() {
        let theta = TrivalentGraph::theta();
        assert_eq!(GraphPath::new(&theta, vec![]), Err(Error::EmptyPath));
        assert_eq!(
            GraphPath::new(
                &theta,
                vec![OrientedEdge::forward(0), OrientedEdge::forward(1)]
            ),
            Err(Error::BrokenPath { step: 1 })
        );
        let p = GraphPath::new(
            &theta,
            vec![OrientedEdge::forward(0), OrientedEdge::backward(1)],
        )
        .unwrap();
        assert_eq!(p.reversed().reversed(), p);
        assert_eq!(p.to_string(), "(e0, e1')");
    }

    #[test]
    fn oriented_edge_involution() {
        let g2 = TrivalentGraph::gamma2();
        let step = OrientedEdge::forward(0);
        assert_ne!(step, step.reversed());
        assert_eq!(step.reversed().reversed(), step);
        assert_eq!(g2.source(step), g2.target(step));
        let o = Orientation::canonical(3);
        assert_eq!(o.reversed(), o.flipped(&[0, 1, 2]));
    }

    #[test]
    fn theta_power_is_hyperbolic() {
        let g = TrivalentGraph::theta_power(3);
        assert_eq!((g.vertex_count(), g.edge_count(), g.genus()), (6, 9, 4));
        let split = g.hyperbolic_split().unwrap();
        assert_eq!(split.v_plus, vec![0, 2, 4]);
    }
}
