//! Genus-labeled dual multigraphs of circle families on closed oriented surfaces.
//!
//! A family of disjoint circles c on a closed oriented surface S is encoded by
//! its dual graph: one vertex per piece of the cut surface S // c, labeled with
//! the genus of that piece, and one edge per circle, joining the vertices of
//! the pieces on its two sides (a loop when both sides meet the same piece).
//! The graph plus its [`Mode`] determines the pair (S, c) up to homeomorphism,
//! so every question about multi-twists along c is answered here combinatorially.
//!
//! Two modes are distinguished. In [`Mode::General`] the circles form an
//! arbitrary closed 1-submanifold: components may bound discs or cobound
//! annuli. In [`Mode::System`] they must form a system of circles (every
//! component essential, no two isotopic), which in the dual graph means no
//! genus-0 vertex of degree 1 and no genus-0 vertex of degree 2 with two
//! distinct incident edges. A genus-0 vertex whose single edge is a loop is
//! the torus cut along a non-separating circle and is legal.
//!
//! Edge orientations (the tail/head split) are an arbitrary bookkeeping
//! choice: every decision computed from the graph is independent of them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::homology::MultiTwist;

/// Opaque name of a piece of the cut surface.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(String);

/// Opaque name of a circle of the family.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Self {
        VertexId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl EdgeId {
    pub fn new(name: impl Into<String>) -> Self {
        EdgeId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s)
    }
}

impl From<&str> for EdgeId {
    fn from(s: &str) -> Self {
        EdgeId::new(s)
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId::new(s)
    }
}

impl From<String> for EdgeId {
    fn from(s: String) -> Self {
        EdgeId::new(s)
    }
}

/// Which circle families the graph is allowed to encode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    /// Arbitrary closed 1-submanifold.
    General,
    /// System of circles: every circle essential, no two isotopic.
    System,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::General => f.write_str("general"),
            Mode::System => f.write_str("system"),
        }
    }
}

/// Homeomorphism type of a piece, read off from its genus and boundary count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PieceType {
    Disc,
    Annulus,
    Pants,
    FourHoledSphere,
    OneHoledTorus,
    TwoHoledTorus,
    Other,
}

impl fmt::Display for PieceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            PieceType::Disc => "disc",
            PieceType::Annulus => "annulus",
            PieceType::Pants => "pants",
            PieceType::FourHoledSphere => "four-holed sphere",
            PieceType::OneHoledTorus => "one-holed torus",
            PieceType::TwoHoledTorus => "two-holed torus",
            PieceType::Other => "other",
        };
        f.write_str(name)
    }
}

/// A way the graph fails the rules of its mode. Violations are answers, not
/// errors: `validate` reports all of them in deterministic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    Disconnected,
    /// Genus-0 piece with one boundary circle: the circle bounds a disc.
    DiscPiece { vertex: VertexId, edge: EdgeId },
    /// Genus-0 piece between two distinct circles: the circles are isotopic.
    AnnulusPiece {
        vertex: VertexId,
        first: EdgeId,
        second: EdgeId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Disconnected => f.write_str("graph is not connected"),
            Violation::DiscPiece { vertex, edge } => {
                write!(f, "piece `{vertex}` is a disc bounded by circle `{edge}`")
            }
            Violation::AnnulusPiece {
                vertex,
                first,
                second,
            } => write!(
                f,
                "piece `{vertex}` is an annulus between circles `{first}` and `{second}`"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Vertex {
    id: VertexId,
    genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Edge {
    id: EdgeId,
    tail: usize,
    head: usize,
}

/// The dual graph of a circle family on a closed oriented surface.
///
/// Vertices and edges are stored sorted by identifier, so structural equality
/// of two graphs is equality of their canonical forms (orientations included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceGraph {
    mode: Mode,
    verts: Vec<Vertex>,
    edges: Vec<Edge>,
}

/// Result of cutting the surface along a chosen subfamily of circles.
#[derive(Debug, Clone)]
pub struct CutResult {
    /// Connected components of the graph minus the chosen edges, ordered by
    /// smallest vertex id. Genus labels and surviving edges are untouched.
    pub components: Vec<SurfaceGraph>,
    /// One entry per chosen edge (sorted by id): where its two dangling
    /// boundary circles ended up.
    pub seams: Vec<CutSeam>,
}

/// The two boundary circles produced by cutting along one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSeam {
    pub edge: EdgeId,
    /// Component index and piece holding the tail-side boundary circle.
    pub tail: (usize, VertexId),
    /// Component index and piece holding the head-side boundary circle.
    pub head: (usize, VertexId),
}

/// Result of deleting one circle and capping the two boundary circles of the
/// cut with discs.
#[derive(Debug, Clone)]
pub struct CapResult {
    /// One part if the deleted circle was non-separating (genus drops by one),
    /// two parts if it was separating (genera add up), ordered by smallest
    /// vertex id.
    pub parts: Vec<SurfaceGraph>,
    /// Surviving circles that bound a disc after the capping.
    pub trivialized: Vec<EdgeId>,
    /// Surviving circle pairs that cobound an annulus after the capping.
    pub isotopic: Vec<(EdgeId, EdgeId)>,
}

impl SurfaceGraph {
    /// Builds a graph from vertex and edge declarations.
    ///
    /// Only malformed data is rejected here (duplicate ids, unknown endpoints,
    /// no vertices at all). Semantic rules, connectedness included, are the
    /// business of [`SurfaceGraph::validate`].
    pub fn new(
        mode: Mode,
        vertices: Vec<(VertexId, u32)>,
        edges: Vec<(EdgeId, VertexId, VertexId)>,
    ) -> Result<Self, Error> {
        if vertices.is_empty() {
            return Err(Error::NoVertices);
        }
        let mut verts: Vec<Vertex> = vertices
            .into_iter()
            .map(|(id, genus)| Vertex { id, genus })
            .collect();
        verts.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in verts.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateVertex(pair[0].id.clone()));
            }
        }
        let vindex = |id: &VertexId| verts.binary_search_by(|v| v.id.cmp(id)).ok();
        let mut resolved: Vec<Edge> = Vec::with_capacity(edges.len());
        for (id, tail, head) in edges {
            let t = vindex(&tail).ok_or_else(|| Error::UnknownVertex(tail.clone()))?;
            let h = vindex(&head).ok_or_else(|| Error::UnknownVertex(head.clone()))?;
            resolved.push(Edge {
                id,
                tail: t,
                head: h,
            });
        }
        resolved.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in resolved.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateEdge(pair[0].id.clone()));
            }
        }
        Ok(SurfaceGraph {
            mode,
            verts,
            edges: resolved,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertices in canonical (sorted) order, with their genus labels.
    pub fn vertices(&self) -> impl Iterator<Item = (&VertexId, u32)> {
        self.verts.iter().map(|v| (&v.id, v.genus))
    }

    /// Edges in canonical (sorted) order, with their endpoint ids.
    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &VertexId, &VertexId)> {
        self.edges
            .iter()
            .map(|e| (&e.id, &self.verts[e.tail].id, &self.verts[e.head].id))
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> {
        self.verts.iter().map(|v| &v.id)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> {
        self.edges.iter().map(|e| &e.id)
    }

    pub fn has_vertex(&self, id: &VertexId) -> bool {
        self.vertex_index(id).is_some()
    }

    pub fn has_edge(&self, id: &EdgeId) -> bool {
        self.edge_index(id).is_some()
    }

    pub fn genus_of(&self, id: &VertexId) -> Result<u32, Error> {
        let i = self
            .vertex_index(id)
            .ok_or_else(|| Error::UnknownVertex(id.clone()))?;
        Ok(self.verts[i].genus)
    }

    pub fn endpoints(&self, id: &EdgeId) -> Result<(&VertexId, &VertexId), Error> {
        let i = self
            .edge_index(id)
            .ok_or_else(|| Error::UnknownEdge(id.clone()))?;
        let e = &self.edges[i];
        Ok((&self.verts[e.tail].id, &self.verts[e.head].id))
    }

    pub fn is_loop(&self, id: &EdgeId) -> Result<bool, Error> {
        let i = self
            .edge_index(id)
            .ok_or_else(|| Error::UnknownEdge(id.clone()))?;
        Ok(self.edges[i].tail == self.edges[i].head)
    }

    /// Number of boundary circles of the piece; a loop contributes two.
    pub fn degree(&self, id: &VertexId) -> Result<usize, Error> {
        let i = self
            .vertex_index(id)
            .ok_or_else(|| Error::UnknownVertex(id.clone()))?;
        Ok(self.degree_at(i))
    }

    /// Reports every rule of the graph's mode that fails, in deterministic
    /// order: connectedness first, then per-piece rules by vertex id.
    pub fn validate(&self) -> Vec<Violation> {
        self.violations_for(self.mode)
    }

    /// Checks the system-of-circles rules regardless of the stored mode flag:
    /// a general-mode graph that happens to satisfy them is accepted.
    pub(crate) fn ensure_valid_system(&self) -> Result<(), Error> {
        let violations = self.violations_for(Mode::System);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSystem(violations))
        }
    }

    fn violations_for(&self, mode: Mode) -> Vec<Violation> {
        let mut out = Vec::new();
        if !self.is_connected() {
            out.push(Violation::Disconnected);
        }
        if mode == Mode::System {
            for (vi, v) in self.verts.iter().enumerate() {
                if v.genus != 0 {
                    continue;
                }
                let incident = self.incident_edges(vi);
                match self.degree_at(vi) {
                    1 => out.push(Violation::DiscPiece {
                        vertex: v.id.clone(),
                        edge: self.edges[incident[0]].id.clone(),
                    }),
                    2 if incident.len() == 2 => {
                        let mut ids = [
                            self.edges[incident[0]].id.clone(),
                            self.edges[incident[1]].id.clone(),
                        ];
                        ids.sort();
                        let [first, second] = ids;
                        out.push(Violation::AnnulusPiece {
                            vertex: v.id.clone(),
                            first,
                            second,
                        });
                    }
                    _ => {}
                }
            }
        }
        out
    }

    /// Genus of the closed surface the graph encodes: sum of piece genera plus
    /// the cycle rank E - V + 1 of the graph.
    pub fn genus(&self) -> Result<u32, Error> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        let pieces: u32 = self.verts.iter().map(|v| v.genus).sum();
        let rank = (self.edges.len() + 1 - self.verts.len()) as u32;
        Ok(pieces + rank)
    }

    /// Homeomorphism type of one piece, from its genus and boundary count.
    pub fn piece_type(&self, id: &VertexId) -> Result<PieceType, Error> {
        let i = self
            .vertex_index(id)
            .ok_or_else(|| Error::UnknownVertex(id.clone()))?;
        Ok(self.piece_type_at(i))
    }

    /// Whether the circle separates the surface, i.e. the edge is a bridge.
    /// Loops are never separating.
    pub fn is_separating(&self, id: &EdgeId) -> Result<bool, Error> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        let i = self
            .edge_index(id)
            .ok_or_else(|| Error::UnknownEdge(id.clone()))?;
        let (count, _) = self.components_skipping(|e| e == i);
        Ok(count > 1)
    }

    /// Cuts the surface along the chosen circles: deletes the edges and
    /// returns the components with seam bookkeeping.
    pub fn cut(&self, along: &[EdgeId]) -> Result<CutResult, Error> {
        let mut chosen = vec![false; self.edges.len()];
        for id in along {
            let i = self
                .edge_index(id)
                .ok_or_else(|| Error::UnknownEdge(id.clone()))?;
            if chosen[i] {
                return Err(Error::RepeatedEdge(id.clone()));
            }
            chosen[i] = true;
        }
        let (count, comp) = self.components_skipping(|e| chosen[e]);
        let mut components = Vec::with_capacity(count);
        for c in 0..count {
            components.push(self.subgraph(|v| comp[v] == c, |e| !chosen[e]));
        }
        let seams = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| chosen[*i])
            .map(|(_, e)| CutSeam {
                edge: e.id.clone(),
                tail: (comp[e.tail], self.verts[e.tail].id.clone()),
                head: (comp[e.head], self.verts[e.head].id.clone()),
            })
            .collect();
        Ok(CutResult { components, seams })
    }

    /// Deletes one circle and caps the two resulting boundary circles with
    /// discs. A non-separating circle leaves one closed surface of genus one
    /// less; a separating circle leaves two closed surfaces whose genera add
    /// up. Also reports which surviving circles the capping made trivial or
    /// isotopic, by inspecting the endpoints of the deleted edge.
    pub fn cap_and_delete(&self, circle: &EdgeId) -> Result<CapResult, Error> {
        if !self.is_connected() {
            return Err(Error::NotConnected);
        }
        let ei = self
            .edge_index(circle)
            .ok_or_else(|| Error::UnknownEdge(circle.clone()))?;
        let (count, comp) = self.components_skipping(|e| e == ei);
        let mut parts = Vec::with_capacity(count);
        for c in 0..count {
            parts.push(self.subgraph(|v| comp[v] == c, |e| e != ei));
        }

        let mut trivialized = Vec::new();
        let mut isotopic = Vec::new();
        let mut touched: Vec<usize> = vec![self.edges[ei].tail, self.edges[ei].head];
        touched.dedup();
        for &v in &touched {
            if self.verts[v].genus != 0 {
                continue;
            }
            let remaining: Vec<usize> = self
                .incident_edges(v)
                .into_iter()
                .filter(|&e| e != ei)
                .collect();
            let degree: usize = remaining
                .iter()
                .map(|&e| if self.edges[e].tail == self.edges[e].head { 2 } else { 1 })
                .sum();
            match (degree, remaining.len()) {
                (1, 1) => trivialized.push(self.edges[remaining[0]].id.clone()),
                (2, 2) => {
                    let mut ids = [
                        self.edges[remaining[0]].id.clone(),
                        self.edges[remaining[1]].id.clone(),
                    ];
                    ids.sort();
                    let [a, b] = ids;
                    isotopic.push((a, b));
                }
                _ => {}
            }
        }
        Ok(CapResult {
            parts,
            trivialized,
            isotopic,
        })
    }

    /// Reduces a general circle family to the system of circles it represents:
    /// circles bounding discs are deleted (their twist exponents dropped) and
    /// maximal runs of isotopic circles are fused into one circle (their
    /// exponents summed). The fused circle keeps the smallest participating
    /// id. The result is in system mode and the operation is idempotent.
    pub fn normalized(&self, twist: &MultiTwist) -> Result<(SurfaceGraph, MultiTwist), Error> {
        for id in twist.circles() {
            if !self.has_edge(id) {
                return Err(Error::UnknownEdge(id.clone()));
            }
        }

        #[derive(Clone)]
        struct WorkEdge {
            id: EdgeId,
            tail: VertexId,
            head: VertexId,
            exponent: Option<i64>,
        }

        let mut verts: BTreeMap<VertexId, u32> =
            self.verts.iter().map(|v| (v.id.clone(), v.genus)).collect();
        let mut edges: Vec<WorkEdge> = self
            .edges
            .iter()
            .map(|e| WorkEdge {
                id: e.id.clone(),
                tail: self.verts[e.tail].id.clone(),
                head: self.verts[e.head].id.clone(),
                exponent: twist.entry(&e.id),
            })
            .collect();

        'reduce: loop {
            for (v, &genus) in verts.iter() {
                if genus != 0 {
                    continue;
                }
                let incident: Vec<usize> = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.tail == *v || e.head == *v)
                    .map(|(i, _)| i)
                    .collect();
                let degree: usize = incident
                    .iter()
                    .map(|&i| if edges[i].tail == edges[i].head { 2 } else { 1 })
                    .sum();
                if degree == 1 {
                    let v = v.clone();
                    edges.remove(incident[0]);
                    verts.remove(&v);
                    continue 'reduce;
                }
                if degree == 2 && incident.len() == 2 {
                    let v = v.clone();
                    let (ka, kb) = (incident[0], incident[1]);
                    let (kept_i, other_i) = if edges[ka].id <= edges[kb].id {
                        (ka, kb)
                    } else {
                        (kb, ka)
                    };
                    let far = |e: &WorkEdge| {
                        if e.tail == v {
                            e.head.clone()
                        } else {
                            e.tail.clone()
                        }
                    };
                    let merged = WorkEdge {
                        id: edges[kept_i].id.clone(),
                        tail: far(&edges[kept_i]),
                        head: far(&edges[other_i]),
                        exponent: match (edges[kept_i].exponent, edges[other_i].exponent) {
                            (None, None) => None,
                            (a, b) => Some(a.unwrap_or(0) + b.unwrap_or(0)),
                        },
                    };
                    let (first, second) = (kept_i.min(other_i), kept_i.max(other_i));
                    edges.remove(second);
                    edges.remove(first);
                    edges.push(merged);
                    verts.remove(&v);
                    continue 'reduce;
                }
            }
            break;
        }

        let graph = SurfaceGraph::new(
            Mode::System,
            verts.into_iter().collect(),
            edges
                .iter()
                .map(|e| (e.id.clone(), e.tail.clone(), e.head.clone()))
                .collect(),
        )?;
        let reduced = MultiTwist::new(
            edges
                .into_iter()
                .filter_map(|e| e.exponent.map(|m| (e.id, m))),
        );
        Ok((graph, reduced))
    }

    /// Copy with the listed edges' tail/head swapped. Decisions computed from
    /// the graph do not depend on orientations, so this only changes the
    /// bookkeeping.
    pub fn reoriented(&self, flip: &[EdgeId]) -> Result<SurfaceGraph, Error> {
        let mut out = self.clone();
        for id in flip {
            let i = self
                .edge_index(id)
                .ok_or_else(|| Error::UnknownEdge(id.clone()))?;
            let edge = &mut out.edges[i];
            std::mem::swap(&mut edge.tail, &mut edge.head);
        }
        Ok(out)
    }

    /// Copy with identifiers renamed (identity where a map has no entry).
    pub fn relabeled(
        &self,
        vertex_map: &BTreeMap<VertexId, VertexId>,
        edge_map: &BTreeMap<EdgeId, EdgeId>,
    ) -> Result<SurfaceGraph, Error> {
        let rename_v = |id: &VertexId| vertex_map.get(id).unwrap_or(id).clone();
        let rename_e = |id: &EdgeId| edge_map.get(id).unwrap_or(id).clone();
        let mut seen_v = BTreeSet::new();
        for v in &self.verts {
            if !seen_v.insert(rename_v(&v.id)) {
                return Err(Error::RelabelCollision(rename_v(&v.id).to_string()));
            }
        }
        let mut seen_e = BTreeSet::new();
        for e in &self.edges {
            if !seen_e.insert(rename_e(&e.id)) {
                return Err(Error::RelabelCollision(rename_e(&e.id).to_string()));
            }
        }
        SurfaceGraph::new(
            self.mode,
            self.verts
                .iter()
                .map(|v| (rename_v(&v.id), v.genus))
                .collect(),
            self.edges
                .iter()
                .map(|e| {
                    (
                        rename_e(&e.id),
                        rename_v(&self.verts[e.tail].id),
                        rename_v(&self.verts[e.head].id),
                    )
                })
                .collect(),
        )
    }

    pub fn is_connected(&self) -> bool {
        let (count, _) = self.components_skipping(|_| false);
        count == 1
    }

    pub(crate) fn vertex_index(&self, id: &VertexId) -> Option<usize> {
        self.verts.binary_search_by(|v| v.id.cmp(id)).ok()
    }

    pub(crate) fn edge_index(&self, id: &EdgeId) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.cmp(id)).ok()
    }

    pub(crate) fn edge_slots(&self, i: usize) -> (usize, usize) {
        (self.edges[i].tail, self.edges[i].head)
    }

    pub(crate) fn edge_id_at(&self, i: usize) -> &EdgeId {
        &self.edges[i].id
    }

    pub(crate) fn vertex_id_at(&self, i: usize) -> &VertexId {
        &self.verts[i].id
    }

    pub(crate) fn genus_at(&self, i: usize) -> u32 {
        self.verts[i].genus
    }

    pub(crate) fn degree_at(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.tail == v) as usize + (e.head == v) as usize)
            .sum()
    }

    pub(crate) fn piece_type_at(&self, i: usize) -> PieceType {
        match (self.verts[i].genus, self.degree_at(i)) {
            (0, 1) => PieceType::Disc,
            (0, 2) => PieceType::Annulus,
            (0, 3) => PieceType::Pants,
            (0, 4) => PieceType::FourHoledSphere,
            (1, 1) => PieceType::OneHoledTorus,
            (1, 2) => PieceType::TwoHoledTorus,
            _ => PieceType::Other,
        }
    }

    /// Indices of edges meeting vertex `v`, each listed once (loops included).
    pub(crate) fn incident_edges(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.tail == v || e.head == v)
            .map(|(i, _)| i)
            .collect()
    }

    /// Connected components of the graph with some edges skipped. Returns the
    /// component count and the component index of every vertex; components are
    /// numbered in order of their smallest vertex.
    pub(crate) fn components_skipping(&self, skip: impl Fn(usize) -> bool) -> (usize, Vec<usize>) {
        let n = self.verts.len();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            if skip(i) || e.tail == e.head {
                continue;
            }
            adjacency[e.tail].push(e.head);
            adjacency[e.head].push(e.tail);
        }
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut queue = vec![start];
            comp[start] = count;
            while let Some(v) = queue.pop() {
                for &w in &adjacency[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    /// Copy without one edge, all vertices kept.
    pub(crate) fn without_edge(&self, drop: usize) -> SurfaceGraph {
        self.subgraph(|_| true, |e| e != drop)
    }

    fn subgraph(&self, keep_vertex: impl Fn(usize) -> bool, keep_edge: impl Fn(usize) -> bool) -> SurfaceGraph {
        let vertices = self
            .verts
            .iter()
            .enumerate()
            .filter(|(i, _)| keep_vertex(*i))
            .map(|(_, v)| (v.id.clone(), v.genus))
            .collect();
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, e)| keep_edge(*i) && keep_vertex(e.tail) && keep_vertex(e.head))
            .map(|(_, e)| {
                (
                    e.id.clone(),
                    self.verts[e.tail].id.clone(),
                    self.verts[e.head].id.clone(),
                )
            })
            .collect();
        SurfaceGraph::new(self.mode, vertices, edges)
            .expect("a subgraph of a well-formed graph is well-formed")
    }
}
