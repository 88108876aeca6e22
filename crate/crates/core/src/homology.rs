//! Integer homology of the surface, seen through the dual graph.
//!
//! The first homology of the surface decomposes into classes supported inside
//! single pieces, the classes of the circles themselves, and transversal
//! classes that cross circles. The crossing pattern of any class against the
//! circles is a flow-conserving vector on the edges (a cycle-lattice element),
//! and an integer combination of circle classes vanishes in homology exactly
//! when its coefficient vector is a cut-lattice element: the coboundary of an
//! integer potential on the vertices. Those two lattices are all this module
//! needs; no basis of the full homology group is ever materialized.
//!
//! On top of them sit the difference map of a multi-twist (its action on
//! homology minus the identity) and the Menger-style routing of transversal
//! circles through the graph.

use std::collections::BTreeMap;
use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::graph::{EdgeId, SurfaceGraph, VertexId};

/// Which lattice a coefficient vector is asserted to live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LatticeContext {
    /// Flow-conserving vectors: crossing patterns of transversal classes.
    Cycle,
    /// Coboundaries of vertex potentials: combinations of circle classes
    /// that vanish in homology.
    Cut,
    /// No assertion.
    Free,
}

/// Integer vector indexed by the circles of a graph. Zero entries are not
/// stored; absent circles have coefficient zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeVector {
    context: LatticeContext,
    coefficients: BTreeMap<EdgeId, i64>,
}

impl LatticeVector {
    pub fn new(context: LatticeContext, entries: impl IntoIterator<Item = (EdgeId, i64)>) -> Self {
        let coefficients = entries.into_iter().filter(|(_, c)| *c != 0).collect();
        LatticeVector {
            context,
            coefficients,
        }
    }

    pub fn unit(context: LatticeContext, edge: EdgeId) -> Self {
        LatticeVector::new(context, [(edge, 1)])
    }

    pub fn context(&self) -> LatticeContext {
        self.context
    }

    pub fn coefficient(&self, edge: &EdgeId) -> i64 {
        self.coefficients.get(edge).copied().unwrap_or(0)
    }

    /// Non-zero entries in circle-id order.
    pub fn entries(&self) -> impl Iterator<Item = (&EdgeId, i64)> {
        self.coefficients.iter().map(|(e, c)| (e, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.coefficients.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}*{e}")?;
        }
        Ok(())
    }
}

/// A multi-twist: an integer twist exponent for each circle. Circles without
/// an entry have exponent zero.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MultiTwist {
    exponents: BTreeMap<EdgeId, i64>,
}

impl MultiTwist {
    pub fn new(entries: impl IntoIterator<Item = (EdgeId, i64)>) -> Self {
        MultiTwist {
            exponents: entries.into_iter().collect(),
        }
    }

    pub fn exponent(&self, edge: &EdgeId) -> i64 {
        self.exponents.get(edge).copied().unwrap_or(0)
    }

    /// The stored entry, if the circle was mentioned at all.
    pub fn entry(&self, edge: &EdgeId) -> Option<i64> {
        self.exponents.get(edge).copied()
    }

    pub fn set(&mut self, edge: EdgeId, exponent: i64) {
        self.exponents.insert(edge, exponent);
    }

    /// Circles with a stored entry, in id order.
    pub fn circles(&self) -> impl Iterator<Item = &EdgeId> {
        self.exponents.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&EdgeId, i64)> {
        self.exponents.iter().map(|(e, m)| (e, *m))
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.values().all(|&m| m == 0)
    }
}

/// Traversal sense of one step through an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Tail to head.
    Forward,
    /// Head to tail.
    Backward,
}

/// One transversal crossing of a circle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkStep {
    pub edge: EdgeId,
    pub direction: Direction,
}

impl WalkStep {
    pub fn forward(edge: impl Into<EdgeId>) -> Self {
        WalkStep {
            edge: edge.into(),
            direction: Direction::Forward,
        }
    }

    pub fn backward(edge: impl Into<EdgeId>) -> Self {
        WalkStep {
            edge: edge.into(),
            direction: Direction::Backward,
        }
    }
}

/// A closed walk in the dual graph: the combinatorial shadow of a transversal
/// circle on the surface. Consecutive steps (cyclically) hand over at a
/// common piece.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedWalk {
    steps: Vec<WalkStep>,
}

impl ClosedWalk {
    /// Validates the steps against a graph: non-empty, every edge known, and
    /// each step departs from the piece the previous one arrived at.
    pub fn new(graph: &SurfaceGraph, steps: Vec<WalkStep>) -> Result<Self, Error> {
        if steps.is_empty() {
            return Err(Error::EmptyWalk);
        }
        let ends: Vec<(usize, usize)> = steps
            .iter()
            .map(|s| step_ends(graph, s))
            .collect::<Result<_, _>>()?;
        for i in 0..ends.len() {
            let j = (i + 1) % ends.len();
            if ends[i].1 != ends[j].0 {
                return Err(Error::BrokenWalk(i, j));
            }
        }
        Ok(ClosedWalk { steps })
    }

    pub fn steps(&self) -> &[WalkStep] {
        &self.steps
    }
}

fn step_ends(graph: &SurfaceGraph, step: &WalkStep) -> Result<(usize, usize), Error> {
    let i = graph
        .edge_index(&step.edge)
        .ok_or_else(|| Error::UnknownEdge(step.edge.clone()))?;
    let (tail, head) = graph.edge_slots(i);
    Ok(match step.direction {
        Direction::Forward => (tail, head),
        Direction::Backward => (head, tail),
    })
}

/// A simple (vertex-disjoint within itself) open walk between two pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphPath {
    pub steps: Vec<WalkStep>,
}

impl GraphPath {
    pub fn edges(&self) -> impl Iterator<Item = &EdgeId> {
        self.steps.iter().map(|s| &s.edge)
    }
}

/// Outcome of looking for `k` pairwise edge-disjoint paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathSearch {
    Found(Vec<GraphPath>),
    /// Fewer than `k` exist; by max-flow/min-cut duality, `max_paths` is also
    /// the size of the smallest edge set separating the two pieces.
    Blocked { max_paths: usize },
}

/// The difference map applied to one transversal class: the coefficient
/// vector of the resulting combination of circle classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferenceImage {
    pub coefficients: LatticeVector,
    /// Whether the combination vanishes in homology (cut-lattice membership).
    pub reduces_to_zero: bool,
}

struct SpanningTree {
    /// For each non-root vertex, the tree edge to its parent and whether the
    /// edge points from parent to child.
    link: Vec<Option<(usize, bool)>>,
    /// Vertices in discovery order (root first).
    order: Vec<usize>,
    in_tree: Vec<bool>,
}

fn spanning_tree(graph: &SurfaceGraph) -> Result<SpanningTree, Error> {
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let mut adjacency: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
    for i in 0..m {
        let (tail, head) = graph.edge_slots(i);
        if tail == head {
            continue;
        }
        adjacency[tail].push((i, head, true));
        adjacency[head].push((i, tail, false));
    }
    let mut link = vec![None; n];
    let mut in_tree = vec![false; m];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(e, w, forward) in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                link[w] = Some((e, forward));
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    if order.len() != n {
        return Err(Error::NotConnected);
    }
    Ok(SpanningTree {
        link,
        order,
        in_tree,
    })
}

/// Decides whether an integer combination of circle classes vanishes in the
/// homology of the surface: whether the vector is the coboundary of an
/// integer potential on the pieces. Loops must carry coefficient zero, since
/// both sides of such a circle meet the same piece.
pub fn cut_lattice_member(graph: &SurfaceGraph, vector: &LatticeVector) -> Result<bool, Error> {
    for (e, _) in vector.entries() {
        if !graph.has_edge(e) {
            return Err(Error::UnknownEdge(e.clone()));
        }
    }
    let tree = spanning_tree(graph)?;
    let mut potential = vec![0i64; graph.vertex_count()];
    for &v in &tree.order {
        if let Some((e, forward)) = tree.link[v] {
            let (tail, head) = graph.edge_slots(e);
            let value = vector.coefficient(graph.edge_id_at(e));
            let parent = if forward { tail } else { head };
            potential[v] = if forward {
                potential[parent] + value
            } else {
                potential[parent] - value
            };
        }
    }
    for i in 0..graph.edge_count() {
        let (tail, head) = graph.edge_slots(i);
        if vector.coefficient(graph.edge_id_at(i)) != potential[head] - potential[tail] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A basis of the lattice of crossing patterns: one fundamental cycle per
/// non-tree edge of a deterministic spanning tree (loops contribute their
/// unit vectors). The basis has E - V + 1 elements.
pub fn cycle_basis(graph: &SurfaceGraph) -> Result<Vec<LatticeVector>, Error> {
    let tree = spanning_tree(graph)?;
    let mut path_to_root: Vec<BTreeMap<usize, i64>> =
        vec![BTreeMap::new(); graph.vertex_count()];
    for &v in &tree.order {
        if let Some((e, forward)) = tree.link[v] {
            let (tail, head) = graph.edge_slots(e);
            let parent = if forward { tail } else { head };
            let mut path = path_to_root[parent].clone();
            *path.entry(e).or_insert(0) += if forward { 1 } else { -1 };
            path_to_root[v] = path;
        }
    }
    let mut basis = Vec::new();
    for i in 0..graph.edge_count() {
        if tree.in_tree[i] {
            continue;
        }
        let (tail, head) = graph.edge_slots(i);
        let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
        coeffs.insert(i, 1);
        for (&e, &c) in &path_to_root[tail] {
            *coeffs.entry(e).or_insert(0) += c;
        }
        for (&e, &c) in &path_to_root[head] {
            *coeffs.entry(e).or_insert(0) -= c;
        }
        basis.push(LatticeVector::new(
            LatticeContext::Cycle,
            coeffs
                .into_iter()
                .map(|(e, c)| (graph.edge_id_at(e).clone(), c)),
        ));
    }
    Ok(basis)
}

/// Crossing pattern of a closed walk: signed crossing count per circle.
/// The result always conserves flow at every piece.
pub fn crossing_vector(graph: &SurfaceGraph, walk: &ClosedWalk) -> Result<LatticeVector, Error> {
    // Revalidate: the walk may have been built against a different graph.
    let walk = ClosedWalk::new(graph, walk.steps().to_vec())?;
    let mut coeffs: BTreeMap<EdgeId, i64> = BTreeMap::new();
    for step in walk.steps() {
        let delta = match step.direction {
            Direction::Forward => 1,
            Direction::Backward => -1,
        };
        *coeffs.entry(step.edge.clone()).or_insert(0) += delta;
    }
    Ok(LatticeVector::new(LatticeContext::Cycle, coeffs))
}

/// Whether two non-separating circles are homology equivalent: equal, or
/// their pair disconnects the graph. Cross-checked in debug builds against
/// the lattice characterization (their unit vectors agree up to sign modulo
/// the cut lattice).
pub fn homology_equivalent(graph: &SurfaceGraph, a: &EdgeId, b: &EdgeId) -> Result<bool, Error> {
    if !graph.is_connected() {
        return Err(Error::NotConnected);
    }
    let ai = graph
        .edge_index(a)
        .ok_or_else(|| Error::UnknownEdge(a.clone()))?;
    let bi = graph
        .edge_index(b)
        .ok_or_else(|| Error::UnknownEdge(b.clone()))?;
    for (id, i) in [(a, ai), (b, bi)] {
        let (count, _) = graph.components_skipping(|e| e == i);
        if count > 1 {
            return Err(Error::SeparatingCircle(id.clone()));
        }
    }
    if ai == bi {
        return Ok(true);
    }
    let (count, _) = graph.components_skipping(|e| e == ai || e == bi);
    let equivalent = count > 1;
    debug_assert_eq!(equivalent, {
        let difference = LatticeVector::new(
            LatticeContext::Free,
            [(a.clone(), 1), (b.clone(), -1)],
        );
        let sum = LatticeVector::new(LatticeContext::Free, [(a.clone(), 1), (b.clone(), 1)]);
        cut_lattice_member(graph, &difference)? || cut_lattice_member(graph, &sum)?
    });
    Ok(equivalent)
}

/// Decides whether the multi-twist acts trivially on the homology of the
/// surface: for every basis crossing pattern, the twisted combination of
/// circle classes must vanish. This is the independent membership oracle the
/// necklace criterion is checked against.
pub fn difference_map_trivial(graph: &SurfaceGraph, twist: &MultiTwist) -> Result<bool, Error> {
    for e in twist.circles() {
        if !graph.has_edge(e) {
            return Err(Error::UnknownEdge(e.clone()));
        }
    }
    for pattern in cycle_basis(graph)? {
        if !scaled_image(graph, twist, &pattern)?.reduces_to_zero {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The difference map of the multi-twist applied to the class of one
/// transversal walk: coefficient `twist(e) * crossings(e)` on each circle.
pub fn difference_image(
    graph: &SurfaceGraph,
    twist: &MultiTwist,
    walk: &ClosedWalk,
) -> Result<DifferenceImage, Error> {
    for e in twist.circles() {
        if !graph.has_edge(e) {
            return Err(Error::UnknownEdge(e.clone()));
        }
    }
    let pattern = crossing_vector(graph, walk)?;
    scaled_image(graph, twist, &pattern)
}

fn scaled_image(
    graph: &SurfaceGraph,
    twist: &MultiTwist,
    pattern: &LatticeVector,
) -> Result<DifferenceImage, Error> {
    let coefficients = LatticeVector::new(
        LatticeContext::Free,
        pattern
            .entries()
            .map(|(e, c)| (e.clone(), twist.exponent(e) * c)),
    );
    let reduces_to_zero = cut_lattice_member(graph, &coefficients)?;
    Ok(DifferenceImage {
        coefficients,
        reduces_to_zero,
    })
}

/// Looks for `k` pairwise edge-disjoint simple paths between two distinct
/// pieces, by unit-capacity max-flow with cancellation. On failure reports
/// the maximum available, which equals the smallest number of circles whose
/// removal separates the two pieces.
pub fn edge_disjoint_paths(
    graph: &SurfaceGraph,
    from: &VertexId,
    to: &VertexId,
    k: usize,
) -> Result<PathSearch, Error> {
    let source = graph
        .vertex_index(from)
        .ok_or_else(|| Error::UnknownVertex(from.clone()))?;
    let sink = graph
        .vertex_index(to)
        .ok_or_else(|| Error::UnknownVertex(to.clone()))?;
    if source == sink {
        return Err(Error::SamePiece(from.clone()));
    }
    if !graph.is_connected() {
        return Err(Error::NotConnected);
    }

    let m = graph.edge_count();
    let n = graph.vertex_count();
    let mut adjacency: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
    for i in 0..m {
        let (tail, head) = graph.edge_slots(i);
        if tail == head {
            continue;
        }
        adjacency[tail].push((i, head, true));
        adjacency[head].push((i, tail, false));
    }

    // flow[e] is the net flow in the edge's forward sense, always in -1..=1.
    let mut flow = vec![0i64; m];
    let mut value = 0usize;
    while value < k {
        let mut pred: Vec<Option<(usize, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        'bfs: while let Some(v) = queue.pop_front() {
            for &(e, w, forward) in &adjacency[v] {
                let residual = if forward { 1 - flow[e] } else { 1 + flow[e] };
                if residual <= 0 || seen[w] {
                    continue;
                }
                seen[w] = true;
                pred[w] = Some((e, forward));
                if w == sink {
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        if !seen[sink] {
            break;
        }
        let mut v = sink;
        while v != source {
            let (e, forward) = pred[v].expect("augmenting path reaches the source");
            flow[e] += if forward { 1 } else { -1 };
            let (tail, head) = graph.edge_slots(e);
            v = if forward { tail } else { head };
        }
        value += 1;
    }
    if value < k {
        return Ok(PathSearch::Blocked { max_paths: value });
    }

    // Decompose the flow into vertex-simple paths, stripping incidental
    // cycles. Each unit of flow on an edge belongs to exactly one path.
    let mut used = vec![false; m];
    let mut paths = Vec::with_capacity(k);
    for _ in 0..k {
        let mut steps: Vec<WalkStep> = Vec::new();
        let mut trail: Vec<usize> = vec![source];
        let mut v = source;
        while v != sink {
            let mut advanced = false;
            for &(e, w, forward) in &adjacency[v] {
                if used[e] {
                    continue;
                }
                let carries = if forward { flow[e] == 1 } else { flow[e] == -1 };
                if !carries {
                    continue;
                }
                used[e] = true;
                if let Some(pos) = trail.iter().position(|&t| t == w) {
                    // Entered a cycle: drop it, its edges stay consumed.
                    trail.truncate(pos + 1);
                    steps.truncate(pos);
                } else {
                    trail.push(w);
                    steps.push(WalkStep {
                        edge: graph.edge_id_at(e).clone(),
                        direction: if forward {
                            Direction::Forward
                        } else {
                            Direction::Backward
                        },
                    });
                }
                v = w;
                advanced = true;
                break;
            }
            assert!(advanced, "flow conservation leads every path to the sink");
        }
        paths.push(GraphPath { steps });
    }
    Ok(PathSearch::Found(paths))
}

/// For one circle D of a family in which every circle is non-separating and
/// no two are homology equivalent, produces two transversal circles A and B
/// that each cross D exactly once, cross every circle at most once, and share
/// no other crossed circle. Built from D itself when D is a loop, otherwise
/// from two edge-disjoint paths between D's endpoints avoiding D.
pub fn two_transversal_circles(
    graph: &SurfaceGraph,
    target: &EdgeId,
) -> Result<(ClosedWalk, ClosedWalk), Error> {
    if !graph.is_connected() {
        return Err(Error::NotConnected);
    }
    let ti = graph
        .edge_index(target)
        .ok_or_else(|| Error::UnknownEdge(target.clone()))?;
    let ids: Vec<EdgeId> = graph.edge_ids().cloned().collect();
    for id in &ids {
        if graph.is_separating(id)? {
            return Err(Error::SeparatingCircle(id.clone()));
        }
    }
    for (i, a) in ids.iter().enumerate() {
        for b in &ids[i + 1..] {
            if homology_equivalent(graph, a, b)? {
                return Err(Error::EquivalentCircles(a.clone(), b.clone()));
            }
        }
    }

    let (tail, head) = graph.edge_slots(ti);
    if tail == head {
        let walk = ClosedWalk::new(graph, vec![WalkStep::forward(target.clone())])?;
        return Ok((walk.clone(), walk));
    }

    let rest = graph.without_edge(ti);
    let from = graph.vertex_id_at(tail).clone();
    let to = graph.vertex_id_at(head).clone();
    let search = edge_disjoint_paths(&rest, &from, &to, 2)?;
    let paths = match search {
        PathSearch::Found(paths) => paths,
        PathSearch::Blocked { .. } => unreachable!(
            "a blocking circle would be homology equivalent to the target, \
             which the precondition rules out"
        ),
    };
    let close = |path: &GraphPath| {
        let mut steps = path.steps.clone();
        steps.push(WalkStep::backward(target.clone()));
        ClosedWalk::new(graph, steps)
    };
    Ok((close(&paths[0])?, close(&paths[1])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::graph::Mode;

    fn lv(entries: &[(&str, i64)]) -> LatticeVector {
        LatticeVector::new(
            LatticeContext::Free,
            entries.iter().map(|(e, c)| (EdgeId::new(*e), *c)),
        )
    }

    fn tw(entries: &[(&str, i64)]) -> MultiTwist {
        MultiTwist::new(entries.iter().map(|(e, c)| (EdgeId::new(*e), *c)))
    }

    #[test]
    fn cut_lattice_matches_potentials() {
        let theta = families::theta(1, 1);
        // All three circles bound the same pair of pieces with one common
        // orientation: their sum vanishes in homology.
        assert!(cut_lattice_member(&theta, &lv(&[("C", 1), ("D", 1), ("E", 1)])).unwrap());
        assert!(cut_lattice_member(&theta, &lv(&[("C", -2), ("D", -2), ("E", -2)])).unwrap());
        assert!(!cut_lattice_member(&theta, &lv(&[("C", 1), ("D", -1)])).unwrap());
        assert!(!cut_lattice_member(&theta, &lv(&[("C", 1)])).unwrap());
        assert!(cut_lattice_member(&theta, &lv(&[])).unwrap());
    }

    #[test]
    fn loops_block_cut_membership() {
        let lp = families::single_loop();
        assert!(!cut_lattice_member(&lp, &lv(&[("C", 1)])).unwrap());
        assert!(cut_lattice_member(&lp, &lv(&[])).unwrap());
    }

    #[test]
    fn bridges_give_unit_cut_vectors() {
        let tree = families::separating_tree(3);
        for id in tree.edge_ids() {
            let unit = LatticeVector::unit(LatticeContext::Free, id.clone());
            assert!(cut_lattice_member(&tree, &unit).unwrap());
        }
    }

    #[test]
    fn cut_membership_requires_connectivity() {
        let g = SurfaceGraph::new(
            Mode::System,
            vec![(VertexId::new("a"), 1), (VertexId::new("b"), 1)],
            vec![],
        )
        .unwrap();
        assert_eq!(cut_lattice_member(&g, &lv(&[])), Err(Error::NotConnected));
    }

    #[test]
    fn cycle_basis_has_first_betti_rank() {
        assert_eq!(cycle_basis(&families::theta(1, 1)).unwrap().len(), 2);
        assert_eq!(cycle_basis(&families::single_loop()).unwrap().len(), 1);
        assert_eq!(cycle_basis(&families::separating_tree(4)).unwrap().len(), 0);
        assert_eq!(cycle_basis(&families::torus_cycle(5)).unwrap().len(), 1);
    }

    #[test]
    fn cycle_basis_vectors_conserve_flow() {
        for g in [
            families::theta(1, 1),
            families::pants_cycle_with_leaves(4),
            families::torus_cycle(4),
        ] {
            for z in cycle_basis(&g).unwrap() {
                // Net flow at each piece must vanish; loops contribute nothing.
                for v in g.vertex_ids() {
                    let mut net = 0i64;
                    for (e, tail, head) in g.edges() {
                        if tail == head {
                            continue;
                        }
                        if head == v {
                            net += z.coefficient(e);
                        }
                        if tail == v {
                            net -= z.coefficient(e);
                        }
                    }
                    assert_eq!(net, 0);
                }
            }
        }
    }

    #[test]
    fn crossing_vector_counts_signed_steps() {
        let theta = families::theta(1, 1);
        let walk = ClosedWalk::new(
            &theta,
            vec![WalkStep::forward("C"), WalkStep::backward("D")],
        )
        .unwrap();
        let z = crossing_vector(&theta, &walk).unwrap();
        assert_eq!(z.coefficient(&EdgeId::new("C")), 1);
        assert_eq!(z.coefficient(&EdgeId::new("D")), -1);
        assert_eq!(z.coefficient(&EdgeId::new("E")), 0);
    }

    #[test]
    fn broken_walks_are_rejected() {
        let theta = families::theta(1, 1);
        // Both steps leave the same piece: the walk cannot close.
        let bad = ClosedWalk::new(
            &theta,
            vec![WalkStep::forward("C"), WalkStep::forward("D")],
        );
        assert_eq!(bad, Err(Error::BrokenWalk(0, 1)));
        assert_eq!(ClosedWalk::new(&theta, vec![]), Err(Error::EmptyWalk));
    }

    #[test]
    fn bounding_pairs_are_homology_equivalent() {
        let bp = families::bounding_pair(1, 1);
        assert!(homology_equivalent(&bp, &EdgeId::new("C"), &EdgeId::new("D")).unwrap());
        let theta = families::theta(1, 1);
        assert!(!homology_equivalent(&theta, &EdgeId::new("C"), &EdgeId::new("D")).unwrap());
        assert!(homology_equivalent(&theta, &EdgeId::new("C"), &EdgeId::new("C")).unwrap());
    }

    #[test]
    fn distinct_loops_are_never_equivalent() {
        let g = SurfaceGraph::new(
            Mode::System,
            vec![(VertexId::new("a"), 0)],
            vec![
                (EdgeId::new("C"), VertexId::new("a"), VertexId::new("a")),
                (EdgeId::new("D"), VertexId::new("a"), VertexId::new("a")),
            ],
        )
        .unwrap();
        assert!(!homology_equivalent(&g, &EdgeId::new("C"), &EdgeId::new("D")).unwrap());
    }

    #[test]
    fn equivalence_rejects_separating_circles() {
        let tree = families::separating_tree(3);
        let first = tree.edge_ids().next().unwrap().clone();
        assert_eq!(
            homology_equivalent(&tree, &first, &first),
            Err(Error::SeparatingCircle(first.clone()))
        );
    }

    #[test]
    fn difference_map_detects_the_theta_relation() {
        let theta = families::theta(1, 1);
        assert!(difference_map_trivial(&theta, &tw(&[])).unwrap());
        assert!(!difference_map_trivial(&theta, &tw(&[("C", 1), ("D", 1), ("E", 1)])).unwrap());
        assert!(!difference_map_trivial(&theta, &tw(&[("C", 1)])).unwrap());
        assert!(!difference_map_trivial(&theta, &tw(&[("C", 1), ("D", -1)])).unwrap());
    }

    #[test]
    fn difference_map_accepts_balanced_bounding_pairs() {
        let bp = families::bounding_pair(1, 1);
        assert!(difference_map_trivial(&bp, &tw(&[("C", 1), ("D", -1)])).unwrap());
        assert!(difference_map_trivial(&bp, &tw(&[("C", 5), ("D", -5)])).unwrap());
        assert!(!difference_map_trivial(&bp, &tw(&[("C", 1), ("D", 1)])).unwrap());
        assert!(!difference_map_trivial(&bp, &tw(&[("C", 1)])).unwrap());
    }

    #[test]
    fn difference_image_on_a_bounding_pair_crossing() {
        let bp = families::bounding_pair(1, 1);
        // The fixture orients C and D head-to-tail, so a walk crossing both
        // forward closes up.
        let walk = ClosedWalk::new(
            &bp,
            vec![WalkStep::forward("C"), WalkStep::forward("D")],
        )
        .unwrap();
        let image = difference_image(&bp, &tw(&[("C", 1), ("D", -1)]), &walk).unwrap();
        assert_eq!(image.coefficients.coefficient(&EdgeId::new("C")), 1);
        assert_eq!(image.coefficients.coefficient(&EdgeId::new("D")), -1);
        assert!(image.reduces_to_zero);

        let unbalanced = difference_image(&bp, &tw(&[("C", 1), ("D", 1)]), &walk).unwrap();
        assert!(!unbalanced.reduces_to_zero);
    }

    #[test]
    fn separating_exponents_never_matter() {
        let tree = families::separating_tree(4);
        let all_ones = MultiTwist::new(tree.edge_ids().map(|e| (e.clone(), 1)));
        assert!(difference_map_trivial(&tree, &all_ones).unwrap());
    }

    #[test]
    fn theta_admits_three_disjoint_paths() {
        let theta = families::theta(1, 1);
        let (a, b) = (VertexId::new("a"), VertexId::new("b"));
        match edge_disjoint_paths(&theta, &a, &b, 3).unwrap() {
            PathSearch::Found(paths) => {
                assert_eq!(paths.len(), 3);
                let mut used: Vec<&EdgeId> = paths.iter().flat_map(|p| p.edges()).collect();
                used.sort();
                used.dedup();
                assert_eq!(used.len(), 3);
            }
            PathSearch::Blocked { .. } => panic!("theta has three parallel circles"),
        }
        match edge_disjoint_paths(&theta, &a, &b, 4).unwrap() {
            PathSearch::Blocked { max_paths } => assert_eq!(max_paths, 3),
            PathSearch::Found(_) => panic!("only three circles exist"),
        }
    }

    #[test]
    fn bridges_block_second_paths() {
        let tree = families::separating_tree(3);
        let mut leaves = tree
            .vertex_ids()
            .filter(|v| tree.degree(v).unwrap() == 1)
            .cloned();
        let (a, b) = (leaves.next().unwrap(), leaves.next().unwrap());
        match edge_disjoint_paths(&tree, &a, &b, 2).unwrap() {
            PathSearch::Blocked { max_paths } => assert_eq!(max_paths, 1),
            PathSearch::Found(_) => panic!("a tree has no two disjoint paths"),
        }
        assert!(matches!(
            edge_disjoint_paths(&tree, &a, &b, 1).unwrap(),
            PathSearch::Found(_)
        ));
        assert_eq!(
            edge_disjoint_paths(&tree, &a, &a, 2),
            Err(Error::SamePiece(a.clone()))
        );
    }

    #[test]
    fn transversal_circles_cross_the_target_once() {
        let theta = families::theta(1, 1);
        let (a, b) = two_transversal_circles(&theta, &EdgeId::new("C")).unwrap();
        let za = crossing_vector(&theta, &a).unwrap();
        let zb = crossing_vector(&theta, &b).unwrap();
        let c = EdgeId::new("C");
        assert_eq!(za.coefficient(&c).abs(), 1);
        assert_eq!(zb.coefficient(&c).abs(), 1);
        for id in theta.edge_ids() {
            assert!(za.coefficient(id).abs() <= 1);
            assert!(zb.coefficient(id).abs() <= 1);
            if *id != c {
                assert_eq!(za.coefficient(id) * zb.coefficient(id), 0);
            }
        }
    }

    #[test]
    fn transversal_circles_through_a_loop() {
        let lp = families::single_loop();
        let (a, b) = two_transversal_circles(&lp, &EdgeId::new("C")).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.steps().len(), 1);
    }

    #[test]
    fn transversal_circles_reject_bad_families() {
        let bp = families::bounding_pair(1, 1);
        assert_eq!(
            two_transversal_circles(&bp, &EdgeId::new("C")),
            Err(Error::EquivalentCircles(EdgeId::new("C"), EdgeId::new("D")))
        );
        let tree = families::separating_tree(3);
        let first = tree.edge_ids().next().unwrap().clone();
        assert!(matches!(
            two_transversal_circles(&tree, &first),
            Err(Error::SeparatingCircle(_))
        ));
    }
}
