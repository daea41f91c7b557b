//! The point-line rigidity matroid `M(ρ + ν_L − 1)`.
//!
//! `I + e` is independent in the truncation exactly when `I + e + e'` is
//! independent in `M(ρ + ν_L) = M(2ν_P + ν_L − 2) ∨ M(ν_L)`, where `e'` is a
//! parallel copy of `e`. [`SharpState`] runs that doubled-edge test on top of
//! a [`UnionCertificate`] and keeps the copy only for the duration of the test.

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, PointLineGraph};
use crate::union::{AugmentResult, UnionCertificate, UnionError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RankError {
    #[error("edge {0} is already accepted")]
    AlreadyAccepted(EdgeId),
    #[error("edge {0} is not an edge of the graph")]
    UnknownEdge(EdgeId),
    #[error("edge {0} is independent of the accepted set")]
    NotDependent(EdgeId),
    #[error(transparent)]
    Union(#[from] UnionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Independent,
    Dependent,
}

/// A greedy independent set of the rigidity matroid and its union certificate.
#[derive(Clone, Debug)]
pub struct SharpState {
    graph: PointLineGraph,
    cert: UnionCertificate,
    accepted: Vec<bool>,
    size: usize,
}

impl SharpState {
    pub fn new(g: &PointLineGraph) -> Self {
        SharpState {
            graph: g.clone(),
            cert: UnionCertificate::new(g),
            accepted: vec![false; g.edge_count()],
            size: 0,
        }
    }

    pub fn graph(&self) -> &PointLineGraph {
        &self.graph
    }

    /// The `(T, S)` split of the accepted set.
    pub fn certificate(&self) -> &UnionCertificate {
        &self.cert
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn is_accepted(&self, e: EdgeId) -> bool {
        self.accepted.get(e.0).copied().unwrap_or(false)
    }

    /// Accepted edges, ascending.
    pub fn accepted(&self) -> Vec<EdgeId> {
        self.graph
            .edge_ids()
            .filter(|e| self.accepted[e.0])
            .collect()
    }

    /// Adds `e` when the accepted set stays independent.
    pub fn test_and_add(&mut self, e: EdgeId) -> Result<Membership, RankError> {
        if e.0 >= self.accepted.len() {
            return Err(RankError::UnknownEdge(e));
        }
        if self.accepted[e.0] {
            return Err(RankError::AlreadyAccepted(e));
        }
        let snap = self.cert.snapshot();
        if self.cert.augment(&self.graph, e)? == AugmentResult::Blocked {
            return Ok(Membership::Dependent);
        }
        let copy = self.graph.add_parallel_copy(e)?;
        let outcome = self.cert.augment(&self.graph, copy.edge);
        let membership = match outcome {
            Ok(AugmentResult::Augmented { .. }) => {
                self.cert.remove(copy.edge)?;
                Membership::Independent
            }
            Ok(AugmentResult::Blocked) => {
                self.cert.rollback(&snap)?;
                Membership::Dependent
            }
            Err(err) => {
                self.cert.rollback(&snap)?;
                self.graph.undo_parallel_copy(copy)?;
                return Err(err.into());
            }
        };
        self.graph.undo_parallel_copy(copy)?;
        if membership == Membership::Independent {
            self.accepted[e.0] = true;
            self.size += 1;
        }
        Ok(membership)
    }

    /// The unique circuit in `accepted + e`, found by deleting elements whose
    /// removal keeps the set dependent.
    pub fn circuit(&self, e: EdgeId) -> Result<Vec<EdgeId>, RankError> {
        if e.0 >= self.accepted.len() {
            return Err(RankError::UnknownEdge(e));
        }
        if self.accepted[e.0] {
            return Err(RankError::AlreadyAccepted(e));
        }
        let mut current = self.accepted();
        current.push(e);
        current.sort();
        if rank_of(&self.graph, &current)? == current.len() {
            return Err(RankError::NotDependent(e));
        }
        let candidates: Vec<EdgeId> = current.iter().copied().filter(|f| *f != e).collect();
        for f in candidates {
            let trial: Vec<EdgeId> = current.iter().copied().filter(|x| *x != f).collect();
            if rank_of(&self.graph, &trial)? < trial.len() {
                current = trial;
            }
        }
        Ok(current)
    }
}

/// Streams `edges` through a fresh [`SharpState`].
pub fn independent_subset(g: &PointLineGraph, edges: &[EdgeId]) -> Result<SharpState, RankError> {
    let mut st = SharpState::new(g);
    for &e in edges {
        st.test_and_add(e)?;
    }
    Ok(st)
}

/// Rank of an edge subset in the rigidity matroid.
pub fn rank_of(g: &PointLineGraph, edges: &[EdgeId]) -> Result<usize, RankError> {
    Ok(independent_subset(g, edges)?.len())
}

/// Greedy maximal independent set over all edges in file order.
pub fn maximal_independent(g: &PointLineGraph) -> Result<SharpState, RankError> {
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    independent_subset(g, &edges)
}

pub fn rank(g: &PointLineGraph) -> Result<usize, RankError> {
    Ok(maximal_independent(g)?.len())
}

/// Generic rigidity: rank `2|V| − 3`, with graphs on at most one vertex
/// counted as rigid.
pub fn is_rigid(g: &PointLineGraph) -> Result<bool, RankError> {
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(true);
    }
    Ok(rank(g)? == 2 * n - 3)
}
