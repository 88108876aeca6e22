use crate::graph::{EdgeId, PieceType, VertexId, Violation};

/// Errors shared by every operation in the crate.
///
/// Decisions that are part of an operation's answer (a twist failing
/// membership, a system violating the circle rules) are returned as data, not
/// as errors; this enum covers inputs an operation cannot interpret at all.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph has no vertices")]
    NoVertices,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(EdgeId),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("unknown edge `{0}`")]
    UnknownEdge(EdgeId),
    #[error("edge `{0}` listed more than once")]
    RepeatedEdge(EdgeId),
    #[error("relabeling maps two identifiers to `{0}`")]
    RelabelCollision(String),
    #[error("not a valid system of circles: {}", describe_violations(.0))]
    InvalidSystem(Vec<Violation>),
    #[error("circle `{0}` is separating")]
    SeparatingCircle(EdgeId),
    #[error("circles `{0}` and `{1}` are homology equivalent")]
    EquivalentCircles(EdgeId, EdgeId),
    #[error("walk has no steps")]
    EmptyWalk,
    #[error("walk breaks between step {0} and step {1}")]
    BrokenWalk(usize, usize),
    #[error("start and end pieces coincide (`{0}`)")]
    SamePiece(VertexId),
    #[error("surface genus {0} is below 2")]
    GenusBelowTwo(u32),
    #[error("piece `{0}` is a {1} and has no defect")]
    DegeneratePiece(VertexId, PieceType),
    #[error("piece `{0}` has no boundary circles")]
    ClosedPiece(VertexId),
    #[error("edges do not form a necklace of this system (first mismatch: `{0}`)")]
    NotANecklace(EdgeId),
    #[error("a necklace surface needs at least two circles")]
    NecklaceTooSmall,
    #[error("marked piece `{0}` is a {1}, which carries no suitable pseudo-Anosov here")]
    UnmarkablePiece(VertexId, PieceType),
    #[error("edge budget {0} exceeds the maximal system size {1} for genus {2}")]
    EdgeBudgetTooLarge(u32, u32, u32),
    #[error("enumeration genus {0} must be at least 2")]
    EnumGenusBelowTwo(u32),
}

fn describe_violations(violations: &[Violation]) -> String {
    match violations.first() {
        None => "no violations recorded".to_owned(),
        Some(first) if violations.len() == 1 => first.to_string(),
        Some(first) => format!("{} violations, first: {}", violations.len(), first),
    }
}
