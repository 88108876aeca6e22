//! Membership of multi-twists in the Torelli group, and rank bounds.
//!
//! A multi-twist along a system of circles acts trivially on homology exactly
//! when its exponents sum to zero over every necklace; separating circles are
//! unconstrained. The multi-twists that pass form a free abelian group of
//! rank E - n (circles minus necklaces), with an explicit basis: one unit
//! twist per separating circle and, inside each necklace, the differences
//! against its smallest member.
//!
//! The defect d(Q) = 2 genus(Q) - 3 + boundary(Q) of a piece measures how
//! many circles can still be added inside it. Summing defects and counting
//! the pieces with positive defect yields the upper bounds on the rank of the
//! twist group, and of any abelian subgroup of the Torelli group reducing
//! along the system: the generic 2g - 3, the refined 2g - 3 - (total -
//! positive), the pure multi-twist 2g - 3 - total, and a conditional 2g - 4.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::Error;
use crate::graph::{EdgeId, PieceType, SurfaceGraph, VertexId};
use crate::homology::MultiTwist;
use crate::necklace::{necklace_partition, NecklacePartition};

/// One necklace whose exponent sum is non-zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecklaceViolation {
    pub circles: Vec<EdgeId>,
    pub exponent_sum: i64,
}

/// Outcome of the membership test, with every failing necklace listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorelliReport {
    pub member: bool,
    pub violations: Vec<NecklaceViolation>,
}

/// Decides whether the multi-twist acts trivially on the homology of the
/// surface: every necklace's exponents must sum to zero.
pub fn torelli_membership(graph: &SurfaceGraph, twist: &MultiTwist) -> Result<TorelliReport, Error> {
    for e in twist.circles() {
        if !graph.has_edge(e) {
            return Err(Error::UnknownEdge(e.clone()));
        }
    }
    let partition = necklace_partition(graph)?;
    let mut violations = Vec::new();
    for necklace in &partition.necklaces {
        let sum: i64 = necklace.iter().map(|e| twist.exponent(e)).sum();
        if sum != 0 {
            violations.push(NecklaceViolation {
                circles: necklace.clone(),
                exponent_sum: sum,
            });
        }
    }
    Ok(TorelliReport {
        member: violations.is_empty(),
        violations,
    })
}

/// Rank and basis of the group of homologically trivial multi-twists along
/// the system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    /// Unit twists on separating circles, then per necklace the differences
    /// against its smallest circle, in deterministic order.
    pub basis: Vec<MultiTwist>,
    pub necklace_count: usize,
    pub separating_count: usize,
}

/// Computes the rank E - n of the homologically trivial multi-twists and an
/// explicit basis generating their full lattice.
pub fn multitwist_subgroup_rank(graph: &SurfaceGraph) -> Result<RankReport, Error> {
    let partition = necklace_partition(graph)?;
    let mut basis = Vec::new();
    for e in &partition.separating {
        basis.push(MultiTwist::new([(e.clone(), 1)]));
    }
    for necklace in &partition.necklaces {
        let smallest = &necklace[0];
        for other in &necklace[1..] {
            basis.push(MultiTwist::new([(other.clone(), 1), (smallest.clone(), -1)]));
        }
    }
    let rank = graph.edge_count() - partition.necklaces.len();
    debug_assert_eq!(rank, basis.len());
    Ok(RankReport {
        rank,
        basis,
        necklace_count: partition.necklaces.len(),
        separating_count: partition.separating.len(),
    })
}

/// The defect 2 genus(Q) - 3 + boundary(Q) of one piece: the number of
/// circles a maximal system adds inside it. Defined for pieces with boundary
/// that are neither discs nor annuli.
pub fn piece_defect(graph: &SurfaceGraph, piece: &VertexId) -> Result<i64, Error> {
    let genus = graph.genus_of(piece)?;
    let boundary = graph.degree(piece)?;
    if boundary == 0 {
        return Err(Error::ClosedPiece(piece.clone()));
    }
    match graph.piece_type(piece)? {
        t @ (PieceType::Disc | PieceType::Annulus) => {
            Err(Error::DegeneratePiece(piece.clone(), t))
        }
        _ => Ok(2 * genus as i64 - 3 + boundary as i64),
    }
}

/// Defects of all pieces of a valid system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectInvariants {
    pub defects: BTreeMap<VertexId, i64>,
    /// Sum of all defects.
    pub total: i64,
    /// Number of pieces with positive defect: those that are neither pants
    /// nor one-holed tori.
    pub positive: usize,
}

/// Computes every piece defect, their sum, and the count of pieces with
/// positive defect.
pub fn defect_invariants(graph: &SurfaceGraph) -> Result<DefectInvariants, Error> {
    graph.ensure_valid_system()?;
    let mut defects = BTreeMap::new();
    let mut total = 0;
    let mut positive = 0;
    for v in graph.vertex_ids() {
        let d = piece_defect(graph, v)?;
        total += d;
        if d > 0 {
            positive += 1;
        }
        defects.insert(v.clone(), d);
    }
    debug_assert!(total >= positive as i64);
    Ok(DefectInvariants {
        defects,
        total,
        positive,
    })
}

/// Why the conditional 2g - 4 bound applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BoundTrigger {
    /// A genus-0 piece without loops whose removal leaves the rest connected:
    /// the piece embeds and its complement is one subsurface.
    SpherePieceWithConnectedComplement { piece: VertexId },
    /// A piece of defect at least two: more room than a four-holed sphere or
    /// a two-holed torus.
    PieceWithDefectAtLeastTwo { piece: VertexId },
}

/// The family of upper bounds on abelian-subgroup ranks along the system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub genus: u32,
    pub invariants: DefectInvariants,
    /// 2g - 3: bound for any abelian subgroup reducing along the system.
    pub generic: i64,
    /// 2g - 3 - (total - positive): sharper form of the same bound.
    pub refined: i64,
    /// 2g - 3 - total: bound for the pure multi-twist group.
    pub multitwist: i64,
    /// 2g - 4 where a trigger applies.
    pub conditional: Option<ConditionalBound>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionalBound {
    pub value: i64,
    pub triggers: Vec<BoundTrigger>,
}

/// Computes the bound family for a valid system on a surface of genus at
/// least 2.
pub fn rank_upper_bounds(graph: &SurfaceGraph) -> Result<BoundReport, Error> {
    graph.ensure_valid_system()?;
    let genus = graph.genus()?;
    if genus < 2 {
        return Err(Error::GenusBelowTwo(genus));
    }
    let invariants = defect_invariants(graph)?;
    let g = genus as i64;

    let mut triggers = Vec::new();
    for v in graph.vertex_ids() {
        if sphere_piece_with_connected_complement(graph, v) {
            triggers.push(BoundTrigger::SpherePieceWithConnectedComplement { piece: v.clone() });
        }
    }
    for (v, d) in &invariants.defects {
        if *d >= 2 {
            triggers.push(BoundTrigger::PieceWithDefectAtLeastTwo { piece: v.clone() });
        }
    }
    let conditional = if triggers.is_empty() {
        None
    } else {
        Some(ConditionalBound {
            value: 2 * g - 4,
            triggers,
        })
    };

    Ok(BoundReport {
        genus,
        generic: 2 * g - 3,
        refined: 2 * g - 3 - (invariants.total - invariants.positive as i64),
        multitwist: 2 * g - 3 - invariants.total,
        conditional,
        invariants,
    })
}

fn sphere_piece_with_connected_complement(graph: &SurfaceGraph, piece: &VertexId) -> bool {
    if graph.genus_of(piece) != Ok(0) {
        return false;
    }
    let vi = match graph.vertex_index(piece) {
        Some(i) => i,
        None => return false,
    };
    let incident = graph.incident_edges(vi);
    let has_loop = incident.iter().any(|&e| {
        let (t, h) = graph.edge_slots(e);
        t == h
    });
    if has_loop || graph.vertex_count() < 2 {
        return false;
    }
    // Components of the graph minus the piece and its circles: count the
    // components among the remaining vertices.
    let (_, comp) = graph.components_skipping(|e| incident.contains(&e));
    let mut rest: BTreeSet<usize> = BTreeSet::new();
    for i in 0..graph.vertex_count() {
        if i != vi {
            rest.insert(comp[i]);
        }
    }
    rest.len() == 1
}

/// Pieces marked as carrying a pseudo-Anosov restriction.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Decoration {
    pub marked: BTreeSet<VertexId>,
}

impl Decoration {
    pub fn new(marked: impl IntoIterator<Item = VertexId>) -> Self {
        Decoration {
            marked: marked.into_iter().collect(),
        }
    }

    /// Checks the marks against the graph: pants never carry a
    /// pseudo-Anosov, and in the Torelli context one-holed tori cannot
    /// contribute one either.
    pub fn check(&self, graph: &SurfaceGraph) -> Result<(), Error> {
        for v in &self.marked {
            let ty = graph.piece_type(v)?;
            if matches!(ty, PieceType::Pants | PieceType::OneHoledTorus) {
                return Err(Error::UnmarkablePiece(v.clone(), ty));
            }
        }
        Ok(())
    }
}

/// Bound on the rank of an abelian subgroup of the Torelli group that
/// reduces along the system with the given pseudo-Anosov marks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianBound {
    pub marked_pieces: usize,
    pub twist_rank: usize,
    /// marked + twist rank, before capping.
    pub raw: i64,
    /// The raw value capped by every applicable bound of the family.
    pub value: i64,
}

/// Computes marked + (E - n), capped by the generic, refined and (when
/// triggered) conditional bounds.
pub fn abelian_rank_bound(graph: &SurfaceGraph, decoration: &Decoration) -> Result<AbelianBound, Error> {
    decoration.check(graph)?;
    let rank = multitwist_subgroup_rank(graph)?;
    let bounds = rank_upper_bounds(graph)?;
    let raw = decoration.marked.len() as i64 + rank.rank as i64;
    let mut value = raw.min(bounds.generic).min(bounds.refined);
    if let Some(conditional) = &bounds.conditional {
        value = value.min(conditional.value);
    }
    Ok(AbelianBound {
        marked_pieces: decoration.marked.len(),
        twist_rank: rank.rank,
        raw,
        value,
    })
}

/// One necklace-count lower bound, applied or skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CountCheck {
    Applied { bound: u32, margin: i64, holds: bool },
    Skipped { reason: String },
}

/// Lower bounds on the number of necklaces of systems cutting the surface
/// into genus-0 pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecklaceCountReport {
    pub genus: u32,
    pub necklaces: usize,
    /// All pieces genus 0: at least g necklaces.
    pub base: CountCheck,
    /// Additionally some piece embeds with connected complement: at least
    /// g + 1 necklaces.
    pub strengthened: CountCheck,
}

/// Applies the necklace-count lower bounds where their hypotheses hold.
pub fn necklace_count_check(graph: &SurfaceGraph) -> Result<NecklaceCountReport, Error> {
    let partition: NecklacePartition = necklace_partition(graph)?;
    let genus = graph.genus()?;
    let necklaces = partition.necklaces.len();
    let all_sphere_pieces = graph.vertices().all(|(_, g)| g == 0);

    let base = if all_sphere_pieces {
        CountCheck::Applied {
            bound: genus,
            margin: necklaces as i64 - genus as i64,
            holds: necklaces as u32 >= genus,
        }
    } else {
        CountCheck::Skipped {
            reason: "some piece has positive genus".to_owned(),
        }
    };
    let strengthened = if !all_sphere_pieces {
        CountCheck::Skipped {
            reason: "some piece has positive genus".to_owned(),
        }
    } else if graph
        .vertex_ids()
        .any(|v| sphere_piece_with_connected_complement(graph, v))
    {
        CountCheck::Applied {
            bound: genus + 1,
            margin: necklaces as i64 - (genus as i64 + 1),
            holds: necklaces as u32 >= genus + 1,
        }
    } else {
        CountCheck::Skipped {
            reason: "no loop-free piece with connected complement".to_owned(),
        }
    };
    Ok(NecklaceCountReport {
        genus,
        necklaces,
        base,
        strengthened,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::graph::Mode;

    fn tw(entries: &[(&str, i64)]) -> MultiTwist {
        MultiTwist::new(entries.iter().map(|(e, c)| (EdgeId::new(*e), *c)))
    }

    #[test]
    fn theta_membership_needs_all_zero_exponents() {
        let theta = families::theta(1, 1);
        assert!(torelli_membership(&theta, &tw(&[])).unwrap().member);
        let report = torelli_membership(&theta, &tw(&[("C", 1), ("D", 1), ("E", 1)])).unwrap();
        assert!(!report.member);
        assert_eq!(report.violations.len(), 3);
        assert!(!torelli_membership(&theta, &tw(&[("C", 2), ("D", -2)]))
            .unwrap()
            .member);
    }

    #[test]
    fn bounding_pair_membership_needs_opposite_exponents() {
        let bp = families::bounding_pair(1, 1);
        assert!(torelli_membership(&bp, &tw(&[("C", 3), ("D", -3)]))
            .unwrap()
            .member);
        let report = torelli_membership(&bp, &tw(&[("C", 1), ("D", 1)])).unwrap();
        assert!(!report.member);
        assert_eq!(report.violations[0].exponent_sum, 2);
    }

    #[test]
    fn separating_circles_are_unconstrained() {
        let tree = families::separating_tree(5);
        let twist = MultiTwist::new(tree.edge_ids().map(|e| (e.clone(), 9)));
        assert!(torelli_membership(&tree, &twist).unwrap().member);
    }

    #[test]
    fn unknown_twist_circles_are_rejected() {
        let theta = families::theta(1, 1);
        assert_eq!(
            torelli_membership(&theta, &tw(&[("missing", 1)])),
            Err(Error::UnknownEdge(EdgeId::new("missing")))
        );
    }

    #[test]
    fn rank_counts_circles_minus_necklaces() {
        assert_eq!(multitwist_subgroup_rank(&families::theta(1, 1)).unwrap().rank, 0);
        assert_eq!(
            multitwist_subgroup_rank(&families::bounding_pair(1, 1)).unwrap().rank,
            1
        );
        for g in 3..9 {
            let tree = families::separating_tree(g);
            assert_eq!(
                multitwist_subgroup_rank(&tree).unwrap().rank as u32,
                2 * g - 3
            );
            let cycle = families::pants_cycle_with_leaves(g);
            assert_eq!(
                multitwist_subgroup_rank(&cycle).unwrap().rank as u32,
                2 * g - 3
            );
            let necklace = families::torus_cycle(g);
            assert_eq!(
                multitwist_subgroup_rank(&necklace).unwrap().rank as u32,
                g - 2
            );
        }
    }

    #[test]
    fn basis_members_pass_membership() {
        for graph in [
            families::theta(1, 1),
            families::bounding_pair(1, 2),
            families::pants_cycle_with_leaves(5),
            families::torus_cycle(5),
        ] {
            let report = multitwist_subgroup_rank(&graph).unwrap();
            for twist in &report.basis {
                assert!(torelli_membership(&graph, twist).unwrap().member);
            }
        }
    }

    #[test]
    fn defects_of_the_small_piece_types() {
        let theta = families::theta(1, 1);
        assert_eq!(piece_defect(&theta, &VertexId::new("a")).unwrap(), 2);
        let invariants = defect_invariants(&theta).unwrap();
        assert_eq!(invariants.total, 4);
        assert_eq!(invariants.positive, 2);

        for g in 3..8 {
            let fig = families::pants_cycle_with_leaves(g);
            let invariants = defect_invariants(&fig).unwrap();
            assert_eq!(invariants.total, 0);
            assert_eq!(invariants.positive, 0);

            let necklace = families::torus_cycle(g);
            let invariants = defect_invariants(&necklace).unwrap();
            assert_eq!(invariants.total, g as i64 - 1);
            assert_eq!(invariants.positive, g as usize - 1);
        }
    }

    #[test]
    fn defect_rejects_degenerate_pieces() {
        let lp = families::single_loop();
        assert!(matches!(
            piece_defect(&lp, &VertexId::new("a")),
            Err(Error::DegeneratePiece(_, PieceType::Annulus))
        ));
        let closed = SurfaceGraph::new(Mode::System, vec![(VertexId::new("a"), 2)], vec![]).unwrap();
        assert_eq!(
            piece_defect(&closed, &VertexId::new("a")),
            Err(Error::ClosedPiece(VertexId::new("a")))
        );
    }

    #[test]
    fn bound_family_on_the_worked_fixtures() {
        let theta = families::theta(1, 1);
        let bounds = rank_upper_bounds(&theta).unwrap();
        assert_eq!(bounds.genus, 4);
        assert_eq!(bounds.generic, 5);
        assert_eq!(bounds.refined, 3);
        assert_eq!(bounds.multitwist, 1);
        // Each three-holed torus has defect 2.
        assert!(bounds.conditional.is_some());

        for g in 3..9 {
            let necklace = families::torus_cycle(g);
            let bounds = rank_upper_bounds(&necklace).unwrap();
            let gi = g as i64;
            assert_eq!(bounds.generic, 2 * gi - 3);
            assert_eq!(bounds.refined, 2 * gi - 3);
            assert_eq!(bounds.multitwist, gi - 2);
            assert!(bounds.conditional.is_none());
            // The bound is attained by the actual rank.
            assert_eq!(
                multitwist_subgroup_rank(&necklace).unwrap().rank as i64,
                bounds.multitwist
            );
        }
    }

    #[test]
    fn conditional_bound_triggers_on_embedded_sphere_pieces() {
        let theta = families::theta(1, 0);
        let bounds = rank_upper_bounds(&theta).unwrap();
        let triggers = &bounds.conditional.as_ref().unwrap().triggers;
        assert!(triggers.iter().any(|t| matches!(
            t,
            BoundTrigger::SpherePieceWithConnectedComplement { piece } if piece == &VertexId::new("b")
        )));

        // The pants cycle's pants all carry a leaf that their removal would
        // orphan, so the conditional bound must not trigger: its rank is
        // exactly 2g - 3.
        for g in 3..8 {
            let fig = families::pants_cycle_with_leaves(g);
            assert!(rank_upper_bounds(&fig).unwrap().conditional.is_none());
        }
        for g in 3..8 {
            let tree = families::separating_tree(g);
            assert!(rank_upper_bounds(&tree).unwrap().conditional.is_none());
        }
    }

    #[test]
    fn genus_gate_on_bounds() {
        let lp = families::single_loop();
        assert!(matches!(
            rank_upper_bounds(&lp),
            Err(Error::InvalidSystem(_) | Error::GenusBelowTwo(_))
        ));
    }

    #[test]
    fn decoration_rules() {
        let theta = families::theta(1, 1);
        // Three-holed tori are markable.
        let dec = Decoration::new([VertexId::new("a")]);
        assert!(dec.check(&theta).is_ok());

        let tree = families::separating_tree(4);
        let pants = VertexId::new("p01");
        assert!(matches!(
            Decoration::new([pants]).check(&tree),
            Err(Error::UnmarkablePiece(_, PieceType::Pants))
        ));
        let torus_leaf = VertexId::new("t01");
        assert!(matches!(
            Decoration::new([torus_leaf]).check(&tree),
            Err(Error::UnmarkablePiece(_, PieceType::OneHoledTorus))
        ));
    }

    #[test]
    fn abelian_bound_on_the_necklace_cycle() {
        for g in 3..9 {
            let necklace = families::torus_cycle(g);
            let marks = Decoration::new(necklace.vertex_ids().cloned());
            let bound = abelian_rank_bound(&necklace, &marks).unwrap();
            let gi = g as i64;
            assert_eq!(bound.raw, (gi - 1) + (gi - 2));
            assert_eq!(bound.value, 2 * gi - 3);
        }
    }

    #[test]
    fn necklace_count_checks_apply_to_sphere_decompositions() {
        let theta0 = families::theta(0, 0);
        let report = necklace_count_check(&theta0).unwrap();
        assert_eq!(report.genus, 2);
        assert_eq!(report.necklaces, 3);
        assert!(matches!(
            report.base,
            CountCheck::Applied { bound: 2, margin: 1, holds: true }
        ));
        assert!(matches!(
            report.strengthened,
            CountCheck::Applied { bound: 3, margin: 0, holds: true }
        ));

        let mixed = families::theta(1, 1);
        let report = necklace_count_check(&mixed).unwrap();
        assert!(matches!(report.base, CountCheck::Skipped { .. }));
    }
}
