//! Independence oracle and fundamental circuits for the count matroids
//! `M(i·ν_P + j·ν_L − k)`, maintained through in-degree bounded orientations.
//!
//! Every independent set `I` is stored with an orientation in which each
//! vertex `v` has in-degree at most `g(v)`, where `g(v) = i` for points and
//! `g(v) = j` for lines. An edge `wz` can join `I` exactly when the
//! orientation can be rearranged so that `w` and `z` together have at least
//! `k + 1` spare in-degree. Rearranging means reversing directed paths that
//! end in `{w, z}` and start at a vertex with spare capacity. When no such
//! path exists, the vertices that can reach `{w, z}` span the fundamental
//! circuit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, PointLineGraph, VertexId, VertexKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrientError {
    #[error("count parameters ({i},{j},{k}) need k <= min(2i, 2j)")]
    InvalidParams { i: u32, j: u32, k: u32 },
    #[error("edge {0} is already in the independent set")]
    AlreadyPresent(EdgeId),
    #[error("edge {0} is not in the independent set")]
    NotPresent(EdgeId),
    #[error("edge {0} does not exist in the graph")]
    UnknownEdge(EdgeId),
    #[error("edge {0} does not close a circuit")]
    NotDependent(EdgeId),
    #[error("vertex {head} is not an endpoint of edge {edge}")]
    InvalidHead { edge: EdgeId, head: VertexId },
    #[error("in-degree of vertex {0} exceeds its capacity")]
    CapacityExceeded(VertexId),
    #[error("edge {0} makes the oriented set dependent")]
    DependentSet(EdgeId),
}

/// The triple `(i, j, k)` of the count matroid `M(i·ν_P + j·ν_L − k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CountParams {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl CountParams {
    /// `M(2ν_P + ν_L − 2)`.
    pub const POINT_PART: CountParams = CountParams { i: 2, j: 1, k: 2 };
    /// `M(ν_L)`.
    pub const LINE_PART: CountParams = CountParams { i: 0, j: 1, k: 0 };

    pub fn new(i: u32, j: u32, k: u32) -> Result<Self, OrientError> {
        if k > 2 * i.min(j) {
            return Err(OrientError::InvalidParams { i, j, k });
        }
        Ok(CountParams { i, j, k })
    }

    pub fn capacity(&self, kind: VertexKind) -> u32 {
        match kind {
            VertexKind::Point => self.i,
            VertexKind::Line => self.j,
        }
    }

    /// `i·points + j·lines − k`, the largest size a set spanning that many
    /// vertices may have.
    pub fn bound(&self, points: usize, lines: usize) -> i64 {
        self.i as i64 * points as i64 + self.j as i64 * lines as i64 - self.k as i64
    }
}

/// The fundamental circuit `C(I, e)` and the vertex set it spans.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitReport {
    /// Sorted, contains the probed edge.
    pub circuit: Vec<EdgeId>,
    /// Vertices from which the probed edge's endpoints are reachable, sorted.
    pub reachable: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Insertion {
    Accepted,
    Rejected(CircuitReport),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Arc {
    tail: VertexId,
    head: VertexId,
}

enum Search {
    /// The endpoints have enough spare in-degree; the edge may enter here.
    Ready(VertexId),
    Blocked(CircuitReport),
}

/// An independent set of `M(i,j,k)` together with a `g_{i,j}`-orientation.
#[derive(Clone, Debug)]
pub struct OrientationState {
    params: CountParams,
    capacity: Vec<u32>,
    arcs: BTreeMap<EdgeId, Arc>,
    /// Per vertex, the edges entering it with their tails, sorted by edge.
    incoming: Vec<Vec<(EdgeId, VertexId)>>,
    // BFS scratch
    mark: Vec<u64>,
    pred: Vec<EdgeId>,
    epoch: u64,
}

impl PartialEq for OrientationState {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.capacity == other.capacity && self.arcs == other.arcs
    }
}

impl Eq for OrientationState {}

impl OrientationState {
    pub fn new(g: &PointLineGraph, params: CountParams) -> Result<Self, OrientError> {
        let params = CountParams::new(params.i, params.j, params.k)?;
        let n = g.vertex_count();
        Ok(OrientationState {
            params,
            capacity: g.vertices().map(|v| params.capacity(g.kind(v))).collect(),
            arcs: BTreeMap::new(),
            incoming: vec![Vec::new(); n],
            mark: vec![0; n],
            pred: vec![EdgeId(usize::MAX); n],
            epoch: 0,
        })
    }

    /// Rebuilds a state from explicit head assignments, checking that the
    /// result is a valid orientation of an independent set.
    pub fn from_heads(
        g: &PointLineGraph,
        params: CountParams,
        heads: &[(EdgeId, VertexId)],
    ) -> Result<Self, OrientError> {
        let mut check = Self::new(g, params)?;
        for &(e, _) in heads {
            if check.try_insert(g, e)? != Insertion::Accepted {
                return Err(OrientError::DependentSet(e));
            }
        }
        let mut st = Self::new(g, params)?;
        for &(e, head) in heads {
            let (a, b) = g.edge(e).ok_or(OrientError::UnknownEdge(e))?.ends;
            let tail = if head == a {
                b
            } else if head == b {
                a
            } else {
                return Err(OrientError::InvalidHead { edge: e, head });
            };
            st.attach(e, Arc { tail, head });
            if st.indegree(head) > st.capacity[head.0] as usize {
                return Err(OrientError::CapacityExceeded(head));
            }
        }
        Ok(st)
    }

    pub fn params(&self) -> CountParams {
        self.params
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.arcs.contains_key(&e)
    }

    /// Edges of the independent set in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.arcs.keys().copied()
    }

    pub fn head(&self, e: EdgeId) -> Option<VertexId> {
        self.arcs.get(&e).map(|a| a.head)
    }

    /// `(edge, head)` pairs in ascending edge order.
    pub fn heads(&self) -> Vec<(EdgeId, VertexId)> {
        self.arcs.iter().map(|(e, a)| (*e, a.head)).collect()
    }

    pub fn indegree(&self, v: VertexId) -> usize {
        self.incoming[v.0].len()
    }

    pub fn capacity(&self, v: VertexId) -> u32 {
        self.capacity[v.0]
    }

    /// Adds `e` if the set stays independent; otherwise leaves the state as
    /// it was and reports the fundamental circuit.
    pub fn try_insert(&mut self, g: &PointLineGraph, e: EdgeId) -> Result<Insertion, OrientError> {
        let mut undo = Vec::new();
        match self.search(g, e, &mut undo)? {
            Search::Ready(head) => {
                let (a, b) = g.ends(e);
                let tail = if head == a { b } else { a };
                self.attach(e, Arc { tail, head });
                Ok(Insertion::Accepted)
            }
            Search::Blocked(report) => {
                self.rollback(undo);
                Ok(Insertion::Rejected(report))
            }
        }
    }

    /// The circuit closed by `e`. Fails if `I + e` is independent. The state
    /// is unchanged in both cases.
    pub fn fundamental_circuit(
        &mut self,
        g: &PointLineGraph,
        e: EdgeId,
    ) -> Result<CircuitReport, OrientError> {
        let mut undo = Vec::new();
        let outcome = self.search(g, e, &mut undo)?;
        self.rollback(undo);
        match outcome {
            Search::Ready(_) => Err(OrientError::NotDependent(e)),
            Search::Blocked(report) => Ok(report),
        }
    }

    /// Removes `e` and returns the vertex it was entering.
    pub fn remove(&mut self, e: EdgeId) -> Result<VertexId, OrientError> {
        let arc = self.arcs.remove(&e).ok_or(OrientError::NotPresent(e))?;
        let list = &mut self.incoming[arc.head.0];
        let pos = list
            .binary_search_by_key(&e, |(f, _)| *f)
            .expect("incoming lists mirror arcs");
        list.remove(pos);
        Ok(arc.head)
    }

    fn attach(&mut self, e: EdgeId, arc: Arc) {
        self.arcs.insert(e, arc);
        let list = &mut self.incoming[arc.head.0];
        let pos = list.partition_point(|(f, _)| *f < e);
        list.insert(pos, (e, arc.tail));
    }

    fn rollback(&mut self, undo: Vec<(EdgeId, VertexId)>) {
        for (e, old_head) in undo.into_iter().rev() {
            let arc = self.arcs[&e];
            debug_assert_ne!(arc.head, old_head);
            self.remove(e).expect("logged edge is oriented");
            self.attach(
                e,
                Arc {
                    tail: arc.head,
                    head: old_head,
                },
            );
        }
    }

    fn search(
        &mut self,
        g: &PointLineGraph,
        e: EdgeId,
        undo: &mut Vec<(EdgeId, VertexId)>,
    ) -> Result<Search, OrientError> {
        if self.arcs.contains_key(&e) {
            return Err(OrientError::AlreadyPresent(e));
        }
        let (w, z) = g.edge(e).ok_or(OrientError::UnknownEdge(e))?.ends;
        if w.0 >= self.capacity.len() || z.0 >= self.capacity.len() {
            return Err(OrientError::UnknownEdge(e));
        }
        let budget =
            self.capacity[w.0] as i64 + self.capacity[z.0] as i64 - (self.params.k as i64 + 1);
        if budget < 0 {
            // {e} alone is dependent
            let mut reachable = vec![w, z];
            reachable.sort();
            return Ok(Search::Blocked(CircuitReport {
                circuit: vec![e],
                reachable,
            }));
        }
        loop {
            let load = (self.indegree(w) + self.indegree(z)) as i64;
            if load <= budget {
                return Ok(Search::Ready(self.pick_head(w, z)));
            }
            let (found, reached) = self.backward_bfs(w, z);
            match found {
                Some(y) => {
                    let mut v = y;
                    while v != w && v != z {
                        let edge = self.pred[v.0];
                        let arc = self.arcs[&edge];
                        debug_assert_eq!(arc.tail, v);
                        self.remove(edge).expect("path edge is oriented");
                        self.attach(
                            edge,
                            Arc {
                                tail: arc.head,
                                head: v,
                            },
                        );
                        undo.push((edge, arc.head));
                        v = arc.head;
                    }
                }
                None => {
                    let mut circuit: Vec<EdgeId> = reached
                        .iter()
                        .flat_map(|y| self.incoming[y.0].iter().map(|(f, _)| *f))
                        .collect();
                    circuit.push(e);
                    circuit.sort();
                    let mut reachable = reached;
                    reachable.sort();
                    return Ok(Search::Blocked(CircuitReport { circuit, reachable }));
                }
            }
        }
    }

    /// Breadth-first search against edge directions from `{w, z}`. Returns the
    /// first vertex with spare capacity (lowest id within the earliest layer)
    /// and every vertex visited.
    fn backward_bfs(&mut self, w: VertexId, z: VertexId) -> (Option<VertexId>, Vec<VertexId>) {
        self.epoch += 1;
        let epoch = self.epoch;
        self.mark[w.0] = epoch;
        self.mark[z.0] = epoch;
        let mut layer = vec![w.min(z), w.max(z)];
        let mut reached = layer.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &v in &layer {
                for &(edge, tail) in &self.incoming[v.0] {
                    if self.mark[tail.0] != epoch {
                        self.mark[tail.0] = epoch;
                        self.pred[tail.0] = edge;
                        next.push(tail);
                    }
                }
            }
            next.sort();
            if let Some(&y) = next
                .iter()
                .find(|y| self.indegree(**y) < self.capacity[y.0] as usize)
            {
                return (Some(y), reached);
            }
            reached.extend_from_slice(&next);
            layer = next;
        }
        (None, reached)
    }

    /// Endpoint with spare capacity and the smaller load ratio, ties to the
    /// lower id.
    fn pick_head(&self, w: VertexId, z: VertexId) -> VertexId {
        let (lo, hi) = (w.min(z), w.max(z));
        let spare = |v: VertexId| self.indegree(v) < self.capacity[v.0] as usize;
        match (spare(lo), spare(hi)) {
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => unreachable!("budget check guarantees spare capacity"),
            (true, true) => {
                let lhs = self.indegree(lo) as u64 * self.capacity[hi.0] as u64;
                let rhs = self.indegree(hi) as u64 * self.capacity[lo.0] as u64;
                if lhs <= rhs {
                    lo
                } else {
                    hi
                }
            }
        }
    }
}
