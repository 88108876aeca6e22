//! Dehn multi-twists on closed oriented surfaces, decided combinatorially.
//!
//! A family of disjoint circles on a closed oriented surface is encoded by
//! its genus-labeled dual multigraph ([`graph`]). On that graph the crate
//! decides whether a multi-twist along the circles acts trivially on
//! homology, in two independent ways: through the necklace partition of the
//! circles ([`necklace`], [`torelli`]) and through the difference map on an
//! explicit homology model ([`homology`]). It also computes the rank of the
//! group of homologically trivial multi-twists, the defect invariants and
//! rank bounds attached to a system, and enumerates all systems of a given
//! genus to verify the structure theorems exhaustively ([`enumerate`]).

pub mod enumerate;
pub mod error;
pub mod families;
pub mod format;
pub mod graph;
pub mod homology;
pub mod necklace;
pub mod torelli;

pub use error::Error;
pub use graph::{
    CapResult, CutResult, CutSeam, EdgeId, Mode, PieceType, SurfaceGraph, VertexId, Violation,
};
pub use homology::{
    ClosedWalk, DifferenceImage, Direction, GraphPath, LatticeContext, LatticeVector, MultiTwist,
    PathSearch, WalkStep,
};
