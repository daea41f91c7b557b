//! Rank, independence and generic rigidity of 2D point-line frameworks.
//!
//! The combinatorial side decides independence in the rigidity matroid
//! `M(ρ + ν_L − 1)` with an orientation-based matroid-union algorithm
//! ([`rank`]). The other modules are independent oracles: a rank formula
//! enumerating partitions ([`formula`]) and exact ranks of rigidity and
//! frame matrices at random realizations ([`numeric`]).

pub mod formula;
pub mod graph;
pub mod numeric;
pub mod orient;
pub mod rank;
pub mod union;

pub use graph::{EdgeClass, EdgeId, GraphError, PointLineGraph, VertexId, VertexKind};
pub use orient::{CountParams, Insertion, OrientationState};
pub use rank::{is_rigid, rank, rank_of, Membership, RankError, SharpState};
pub use union::{union_rank, Part, UnionCertificate};
