//! Necklaces: the homology-equivalence classes of non-separating circles.
//!
//! Homology equivalence partitions the non-separating circles of a valid
//! system; each class is a necklace. Separating circles stand outside the
//! partition. Cutting the surface along one whole necklace of size at least
//! two always yields a cyclic chain of pieces, each with exactly two boundary
//! circles; that shape is what `is_bp_necklace` recognizes.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::Error;
use crate::graph::{EdgeId, SurfaceGraph};
use crate::homology::homology_equivalent;

/// The circles of a system, split into necklaces and separating circles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecklacePartition {
    /// Each necklace sorted by circle id; necklaces ordered by smallest
    /// member.
    pub necklaces: Vec<Vec<EdgeId>>,
    /// Separating circles, sorted.
    pub separating: Vec<EdgeId>,
}

impl NecklacePartition {
    /// The necklace containing the given circle, if it is non-separating.
    pub fn necklace_of(&self, circle: &EdgeId) -> Option<&[EdgeId]> {
        self.necklaces
            .iter()
            .find(|n| n.contains(circle))
            .map(|n| n.as_slice())
    }
}

/// Partitions the circles of a valid system into necklaces (classes of
/// homology-equivalent non-separating circles) and separating circles.
pub fn necklace_partition(graph: &SurfaceGraph) -> Result<NecklacePartition, Error> {
    graph.ensure_valid_system()?;
    let ids: Vec<EdgeId> = graph.edge_ids().cloned().collect();
    let mut separating = Vec::new();
    let mut loose: Vec<EdgeId> = Vec::new();
    for id in &ids {
        if graph.is_separating(id)? {
            separating.push(id.clone());
        } else {
            loose.push(id.clone());
        }
    }

    let mut class = (0..loose.len()).collect::<Vec<usize>>();
    fn root(class: &mut [usize], mut i: usize) -> usize {
        while class[i] != i {
            class[i] = class[class[i]];
            i = class[i];
        }
        i
    }
    for i in 0..loose.len() {
        for j in i + 1..loose.len() {
            if homology_equivalent(graph, &loose[i], &loose[j])? {
                let (a, b) = (root(&mut class, i), root(&mut class, j));
                class[a.max(b)] = a.min(b);
            }
        }
    }

    let mut necklaces: Vec<Vec<EdgeId>> = Vec::new();
    let mut index_of: Vec<Option<usize>> = vec![None; loose.len()];
    for i in 0..loose.len() {
        let r = root(&mut class, i);
        match index_of[r] {
            Some(k) => necklaces[k].push(loose[i].clone()),
            None => {
                index_of[r] = Some(necklaces.len());
                necklaces.push(vec![loose[i].clone()]);
            }
        }
    }
    Ok(NecklacePartition {
        necklaces,
        separating,
    })
}

/// Whether the graph is the dual graph of a necklace surface: a single cycle
/// of at least two pieces, each with exactly two boundary circles.
pub fn is_bp_necklace(graph: &SurfaceGraph) -> bool {
    graph.vertex_count() >= 2
        && graph.is_connected()
        && graph.vertex_ids().all(|v| graph.degree(v).unwrap() == 2)
}

/// Cuts the surface along the chosen circles only, fusing everything else:
/// pieces of the result are the components left after deleting the chosen
/// edges, with genus equal to the genus of the fused subsurface, and the
/// chosen edges run between them. Fused pieces keep their smallest vertex id.
pub fn cut_along_only(graph: &SurfaceGraph, circles: &[EdgeId]) -> Result<SurfaceGraph, Error> {
    let mut chosen = vec![false; graph.edge_count()];
    for id in circles {
        let i = graph
            .edge_index(id)
            .ok_or_else(|| Error::UnknownEdge(id.clone()))?;
        if chosen[i] {
            return Err(Error::RepeatedEdge(id.clone()));
        }
        chosen[i] = true;
    }
    let (count, comp) = graph.components_skipping(|e| chosen[e]);

    let mut genus = vec![0u32; count];
    let mut vertices = vec![0usize; count];
    let mut inner_edges = vec![0usize; count];
    let mut name: Vec<Option<&crate::graph::VertexId>> = vec![None; count];
    for (i, v) in graph.vertex_ids().enumerate() {
        let c = comp[i];
        vertices[c] += 1;
        genus[c] += graph.genus_at(i);
        if name[c].is_none() {
            name[c] = Some(v);
        }
    }
    for e in 0..graph.edge_count() {
        if !chosen[e] {
            let (tail, _) = graph.edge_slots(e);
            inner_edges[comp[tail]] += 1;
        }
    }

    let piece_list = (0..count)
        .map(|c| {
            let rank = (inner_edges[c] + 1 - vertices[c]) as u32;
            (name[c].unwrap().clone(), genus[c] + rank)
        })
        .collect();
    let edge_list = (0..graph.edge_count())
        .filter(|&e| chosen[e])
        .map(|e| {
            let (tail, head) = graph.edge_slots(e);
            (
                graph.edge_id_at(e).clone(),
                name[comp[tail]].unwrap().clone(),
                name[comp[head]].unwrap().clone(),
            )
        })
        .collect();
    SurfaceGraph::new(graph.mode(), piece_list, edge_list)
}

/// Checks that the given circles form one necklace of the system with at
/// least two members, then cuts along that necklace alone and decides
/// whether the result is the shape of a necklace surface.
pub fn necklace_is_bp(graph: &SurfaceGraph, circles: &[EdgeId]) -> Result<bool, Error> {
    let partition = necklace_partition(graph)?;
    let given: BTreeSet<&EdgeId> = circles.iter().collect();
    let first = circles.first().ok_or(Error::NecklaceTooSmall)?;
    let necklace = partition
        .necklace_of(first)
        .ok_or_else(|| Error::NotANecklace(first.clone()))?;
    let actual: BTreeSet<&EdgeId> = necklace.iter().collect();
    if given != actual {
        let mismatch = given
            .symmetric_difference(&actual)
            .next()
            .expect("unequal sets differ somewhere");
        return Err(Error::NotANecklace((*mismatch).clone()));
    }
    if circles.len() < 2 {
        return Err(Error::NecklaceTooSmall);
    }
    Ok(is_bp_necklace(&cut_along_only(graph, circles)?))
}
