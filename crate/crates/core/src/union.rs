//! Augmenting paths for the union `M(2ν_P + ν_L − 2) ∨ M(ν_L)`.
//!
//! A [`UnionCertificate`] keeps an independent set of the union split into
//! the part `T` (independent in `M(2,1,2)`) and the part `S` (independent in
//! `M(0,1,0)`). [`UnionCertificate::augment`] searches the exchange graph
//! breadth-first, so the path it finds is a shortest one and has no short
//! cuts.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeClass, EdgeId, PointLineGraph, VertexId};
use crate::orient::{CountParams, Insertion, OrientError, OrientationState};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UnionError {
    #[error("edge {0} is already in the certificate")]
    AlreadyPresent(EdgeId),
    #[error("snapshot belongs to a different certificate")]
    ForeignSnapshot,
    #[error(transparent)]
    Orient(#[from] OrientError),
    #[error("malformed certificate dump: {0}")]
    Dump(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Part {
    /// Independent in `M(2ν_P + ν_L − 2)`.
    T,
    /// Independent in `M(ν_L)`.
    S,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::T => Part::S,
            Part::S => Part::T,
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::T => "T",
            Part::S => "S",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AugmentResult {
    /// `path[0]` is the new edge; each later element was displaced by its
    /// predecessor. `entered` is the part the new edge ended up in.
    Augmented {
        path: Vec<EdgeId>,
        entered: Part,
    },
    Blocked,
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

#[derive(Debug)]
pub struct UnionCertificate {
    id: u64,
    t: OrientationState,
    s: OrientationState,
}

impl Clone for UnionCertificate {
    fn clone(&self) -> Self {
        UnionCertificate {
            id: fresh_id(),
            t: self.t.clone(),
            s: self.s.clone(),
        }
    }
}

impl PartialEq for UnionCertificate {
    fn eq(&self, other: &Self) -> bool {
        self.t == other.t && self.s == other.s
    }
}

impl Eq for UnionCertificate {}

/// Deep copy of both parts, restorable with [`UnionCertificate::rollback`].
#[derive(Clone, Debug)]
pub struct Snapshot {
    owner: u64,
    t: OrientationState,
    s: OrientationState,
}

/// One `(edge, head)` entry of a certificate listing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeadEntry {
    pub edge: usize,
    pub head: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateView {
    #[serde(rename = "T")]
    pub t: Vec<HeadEntry>,
    #[serde(rename = "S")]
    pub s: Vec<HeadEntry>,
}

impl UnionCertificate {
    pub fn new(g: &PointLineGraph) -> Self {
        UnionCertificate {
            id: fresh_id(),
            t: OrientationState::new(g, CountParams::POINT_PART).expect("valid parameters"),
            s: OrientationState::new(g, CountParams::LINE_PART).expect("valid parameters"),
        }
    }

    pub fn part(&self, p: Part) -> &OrientationState {
        match p {
            Part::T => &self.t,
            Part::S => &self.s,
        }
    }

    fn part_mut(&mut self, p: Part) -> &mut OrientationState {
        match p {
            Part::T => &mut self.t,
            Part::S => &mut self.s,
        }
    }

    pub fn len(&self) -> usize {
        self.t.len() + self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.t.contains(e) || self.s.contains(e)
    }

    pub fn part_of(&self, e: EdgeId) -> Option<Part> {
        if self.t.contains(e) {
            Some(Part::T)
        } else if self.s.contains(e) {
            Some(Part::S)
        } else {
            None
        }
    }

    /// All edges of the independent set, ascending.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut all: Vec<EdgeId> = self.t.edges().chain(self.s.edges()).collect();
        all.sort();
        all
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            owner: self.id,
            t: self.t.clone(),
            s: self.s.clone(),
        }
    }

    pub fn rollback(&mut self, snap: &Snapshot) -> Result<(), UnionError> {
        if snap.owner != self.id {
            return Err(UnionError::ForeignSnapshot);
        }
        self.t = snap.t.clone();
        self.s = snap.s.clone();
        Ok(())
    }

    /// Removes `e` from whichever part holds it.
    pub fn remove(&mut self, e: EdgeId) -> Result<Part, UnionError> {
        let part = self.part_of(e).ok_or(OrientError::NotPresent(e))?;
        self.part_mut(part).remove(e)?;
        Ok(part)
    }

    /// Tries to add `e` to the union independent set.
    pub fn augment(&mut self, g: &PointLineGraph, e: EdgeId) -> Result<AugmentResult, UnionError> {
        if self.contains(e) {
            return Err(UnionError::AlreadyPresent(e));
        }
        // BFS over (element, part it would enter); parity keys the visited set
        let mut nodes: Vec<(EdgeId, Part, Option<usize>)> = Vec::new();
        let mut seen: HashSet<(EdgeId, Part)> = HashSet::new();
        let mut queue = VecDeque::new();
        for part in [Part::T, Part::S] {
            seen.insert((e, part));
            nodes.push((e, part, None));
            queue.push_back(nodes.len() - 1);
        }
        while let Some(idx) = queue.pop_front() {
            let (f, part, _) = nodes[idx];
            match self.part_mut(part).try_insert(g, f)? {
                Insertion::Accepted => {
                    let path = self.apply_path(g, &nodes, idx)?;
                    self.check_loops(g)?;
                    let entered = self.part_of(e).expect("augmented edge is present");
                    return Ok(AugmentResult::Augmented { path, entered });
                }
                Insertion::Rejected(report) => {
                    for &c in &report.circuit {
                        let key = (c, part.other());
                        if c != f && seen.insert(key) {
                            nodes.push((c, part.other(), Some(idx)));
                            queue.push_back(nodes.len() - 1);
                        }
                    }
                }
            }
        }
        Ok(AugmentResult::Blocked)
    }

    /// Applies the exchanges along the path ending at `last`, whose element
    /// has already been inserted into its part.
    fn apply_path(
        &mut self,
        g: &PointLineGraph,
        nodes: &[(EdgeId, Part, Option<usize>)],
        last: usize,
    ) -> Result<Vec<EdgeId>, UnionError> {
        let mut chain = vec![last];
        while let Some(parent) = nodes[*chain.last().unwrap()].2 {
            chain.push(parent);
        }
        chain.reverse();
        // walk backwards: element i displaces element i+1 from part i
        for w in chain.windows(2).rev() {
            let (enter, part, _) = nodes[w[0]];
            let (leave, _, _) = nodes[w[1]];
            self.part_mut(part).remove(leave)?;
            if self.part_mut(part).try_insert(g, enter)? != Insertion::Accepted {
                return Err(UnionError::Invariant(format!(
                    "exchange of {leave} for {enter} in part {part} lost independence"
                )));
            }
        }
        Ok(chain.iter().map(|&i| nodes[i].0).collect())
    }

    /// Fails if a loop of either part (LL in `T`, PP in `S`) was placed there.
    pub fn check_loops(&self, g: &PointLineGraph) -> Result<(), UnionError> {
        for e in self.t.edges() {
            if g.edge_class(e) == Ok(EdgeClass::LL) {
                return Err(UnionError::Invariant(format!("LL edge {e} in part T")));
            }
        }
        for e in self.s.edges() {
            if g.edge_class(e) == Ok(EdgeClass::PP) {
                return Err(UnionError::Invariant(format!("PP edge {e} in part S")));
            }
        }
        Ok(())
    }

    pub fn view(&self, g: &PointLineGraph) -> CertificateView {
        let list = |st: &OrientationState| {
            st.heads()
                .into_iter()
                .map(|(e, h)| HeadEntry {
                    edge: e.0,
                    head: g.name(h).to_string(),
                })
                .collect()
        };
        CertificateView {
            t: list(&self.t),
            s: list(&self.s),
        }
    }

    /// Text dump: `T:` and `S:` lines of `edge:head` entries in edge order.
    pub fn dump(&self, g: &PointLineGraph) -> String {
        let view = self.view(g);
        let line = |label: &str, entries: &[HeadEntry]| {
            let mut s = label.to_string();
            for entry in entries {
                s.push_str(&format!(" {}:{}", entry.edge, entry.head));
            }
            s.push('\n');
            s
        };
        line("T:", &view.t) + &line("S:", &view.s)
    }

    /// Inverse of [`dump`](Self::dump); orientations and independence are
    /// re-validated.
    pub fn from_dump(g: &PointLineGraph, text: &str) -> Result<Self, UnionError> {
        let mut parts: [Option<Vec<(EdgeId, VertexId)>>; 2] = [None, None];
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (label, rest) = line
                .split_once(':')
                .ok_or_else(|| UnionError::Dump(format!("missing label in `{line}`")))?;
            let slot = match label.trim() {
                "T" => 0,
                "S" => 1,
                other => return Err(UnionError::Dump(format!("unknown part `{other}`"))),
            };
            let mut entries = Vec::new();
            for item in rest.split_whitespace() {
                let (edge, head) = item
                    .split_once(':')
                    .ok_or_else(|| UnionError::Dump(format!("bad entry `{item}`")))?;
                let edge: usize = edge
                    .parse()
                    .map_err(|_| UnionError::Dump(format!("bad edge `{edge}`")))?;
                let head = g
                    .vertex_by_name(head)
                    .ok_or_else(|| UnionError::Dump(format!("unknown vertex `{head}`")))?;
                entries.push((EdgeId(edge), head));
            }
            parts[slot] = Some(entries);
        }
        let [Some(t), Some(s)] = parts else {
            return Err(UnionError::Dump("expected both T: and S: lines".into()));
        };
        if t.iter().any(|(e, _)| s.iter().any(|(f, _)| f == e)) {
            return Err(UnionError::Dump("parts overlap".into()));
        }
        Ok(UnionCertificate {
            id: fresh_id(),
            t: OrientationState::from_heads(g, CountParams::POINT_PART, &t)?,
            s: OrientationState::from_heads(g, CountParams::LINE_PART, &s)?,
        })
    }
}

/// Rank of `edges` in the union matroid, by streaming augments.
pub fn union_rank(g: &PointLineGraph, edges: &[EdgeId]) -> Result<usize, UnionError> {
    let mut cert = UnionCertificate::new(g);
    let mut rank = 0;
    for &e in edges {
        if let AugmentResult::Augmented { .. } = cert.augment(g, e)? {
            rank += 1;
        }
    }
    Ok(rank)
}
