//! Brute-force oracles for the rigidity matroid: the partition rank formula
//! and the necessary subset counts.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{EdgeId, PointLineGraph, VertexId, VertexKind};

/// Largest edge set the partition enumeration accepts (Bell(10) = 115975).
pub const DEFAULT_PARTITION_LIMIT: usize = 10;
/// Largest edge set the subset-count check accepts.
pub const DEFAULT_COUNT_LIMIT: usize = 16;

const MASK_EDGES: usize = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{size} edges exceed the oracle limit of {limit}")]
    LimitExceeded { size: usize, limit: usize },
    #[error("edge {0} appears in more than one part")]
    OverlappingParts(EdgeId),
    #[error("partition contains an empty part")]
    EmptyPart,
}

/// A partition of an edge set with its rank-formula value
/// `ν_L(A) + Σ (2ν_P(A_i) + ν_L(A_i) − 2) − c_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionValue {
    pub partition: Vec<Vec<EdgeId>>,
    pub value: i64,
}

/// Edge endpoints as bit masks over the vertices the edges touch.
struct LocalMasks {
    points: Vec<u64>,
    lines: Vec<u64>,
}

impl LocalMasks {
    fn new(g: &PointLineGraph, edges: &[EdgeId]) -> Self {
        let mut local: HashMap<VertexId, u32> = HashMap::new();
        let mut points = Vec::with_capacity(edges.len());
        let mut lines = Vec::with_capacity(edges.len());
        for &e in edges {
            let (a, b) = g.ends(e);
            let (mut pm, mut lm) = (0u64, 0u64);
            for v in [a, b] {
                let next = local.len() as u32;
                let bit = 1u64 << *local.entry(v).or_insert(next);
                match g.kind(v) {
                    VertexKind::Point => pm |= bit,
                    VertexKind::Line => lm |= bit,
                }
            }
            points.push(pm);
            lines.push(lm);
        }
        LocalMasks { points, lines }
    }
}

struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
            self.sets -= 1;
        }
    }
}

/// Components of the part graph on `line_masks`: parts sharing a line-vertex
/// are adjacent.
fn components(line_masks: &[u64]) -> usize {
    let mut uf = UnionFind::new(line_masks.len());
    for a in 0..line_masks.len() {
        for b in a + 1..line_masks.len() {
            if line_masks[a] & line_masks[b] != 0 {
                uf.union(a, b);
            }
        }
    }
    uf.sets
}

fn check_parts(parts: &[Vec<EdgeId>]) -> Result<(), OracleError> {
    let mut seen = std::collections::HashSet::new();
    for part in parts {
        if part.is_empty() {
            return Err(OracleError::EmptyPart);
        }
        for &e in part {
            if !seen.insert(e) {
                return Err(OracleError::OverlappingParts(e));
            }
        }
    }
    Ok(())
}

/// Number of components of the part graph in which parts sharing a
/// line-vertex are adjacent. Parts without line-vertices are isolated.
pub fn c_l(g: &PointLineGraph, parts: &[Vec<EdgeId>]) -> Result<usize, OracleError> {
    check_parts(parts)?;
    let mut uf = UnionFind::new(parts.len());
    let mut owner: HashMap<VertexId, usize> = HashMap::new();
    for (i, part) in parts.iter().enumerate() {
        for &e in part {
            let (a, b) = g.ends(e);
            for v in [a, b] {
                if g.kind(v) == VertexKind::Line {
                    match owner.get(&v) {
                        Some(&j) => uf.union(i, j),
                        None => {
                            owner.insert(v, i);
                        }
                    }
                }
            }
        }
    }
    Ok(uf.sets)
}

/// Evaluates the rank formula on a given partition of the union of `parts`.
pub fn partition_value(
    g: &PointLineGraph,
    parts: &[Vec<EdgeId>],
) -> Result<PartitionValue, OracleError> {
    check_parts(parts)?;
    let all: Vec<EdgeId> = parts.iter().flatten().copied().collect();
    let (_, total_lines) = g.induced_counts(&all);
    let mut value = total_lines as i64 - c_l(g, parts)? as i64;
    for part in parts {
        let (p, l) = g.induced_counts(part);
        value += 2 * p as i64 + l as i64 - 2;
    }
    Ok(PartitionValue {
        partition: parts.to_vec(),
        value,
    })
}

/// Minimum of the rank formula over all set partitions of `edges`.
pub fn rank_formula_oracle(
    g: &PointLineGraph,
    edges: &[EdgeId],
    limit: usize,
) -> Result<PartitionValue, OracleError> {
    // local vertex masks are 64 bits wide
    let limit = limit.min(MASK_EDGES);
    if edges.len() > limit {
        return Err(OracleError::LimitExceeded {
            size: edges.len(),
            limit,
        });
    }
    if edges.is_empty() {
        return Ok(PartitionValue {
            partition: Vec::new(),
            value: 0,
        });
    }
    let masks = LocalMasks::new(g, edges);
    let total_lines = masks.lines.iter().fold(0, |acc, m| acc | m).count_ones() as i64;
    let mut search = PartitionSearch {
        masks: &masks,
        assignment: vec![0; edges.len()],
        block_points: Vec::new(),
        block_lines: Vec::new(),
        best: i64::MAX,
        best_assignment: Vec::new(),
        total_lines,
    };
    search.descend(0);
    let blocks = search.best_assignment.iter().copied().max().unwrap_or(0) + 1;
    let mut partition = vec![Vec::new(); blocks];
    for (i, &b) in search.best_assignment.iter().enumerate() {
        partition[b].push(edges[i]);
    }
    for part in &mut partition {
        part.sort();
    }
    Ok(PartitionValue {
        partition,
        value: search.best,
    })
}

struct PartitionSearch<'a> {
    masks: &'a LocalMasks,
    assignment: Vec<usize>,
    block_points: Vec<u64>,
    block_lines: Vec<u64>,
    best: i64,
    best_assignment: Vec<usize>,
    total_lines: i64,
}

impl PartitionSearch<'_> {
    // restricted growth strings: edge i joins an existing block or opens one
    fn descend(&mut self, i: usize) {
        if i == self.assignment.len() {
            let mut value = self.total_lines - components(&self.block_lines) as i64;
            for (p, l) in self.block_points.iter().zip(&self.block_lines) {
                value += 2 * p.count_ones() as i64 + l.count_ones() as i64 - 2;
            }
            if value < self.best {
                self.best = value;
                self.best_assignment = self.assignment.clone();
            }
            return;
        }
        let (pm, lm) = (self.masks.points[i], self.masks.lines[i]);
        for b in 0..self.block_points.len() {
            let saved = (self.block_points[b], self.block_lines[b]);
            self.block_points[b] |= pm;
            self.block_lines[b] |= lm;
            self.assignment[i] = b;
            self.descend(i + 1);
            (self.block_points[b], self.block_lines[b]) = saved;
        }
        self.block_points.push(pm);
        self.block_lines.push(lm);
        self.assignment[i] = self.block_points.len() - 1;
        self.descend(i + 1);
        self.block_points.pop();
        self.block_lines.pop();
    }
}

/// Checks `|S'| ≤ 2ν(S') − 3` for every nonempty `S' ⊆ edges`, and
/// `|S'| ≤ ν(S') − 1` when `S'` touches no point-vertex.
///
/// These counts are necessary for independence but not sufficient.
pub fn subset_count_oracle(
    g: &PointLineGraph,
    edges: &[EdgeId],
    limit: usize,
) -> Result<bool, OracleError> {
    let limit = limit.min(MASK_EDGES);
    if edges.len() > limit {
        return Err(OracleError::LimitExceeded {
            size: edges.len(),
            limit,
        });
    }
    let masks = LocalMasks::new(g, edges);
    for subset in 1u32..(1u32 << edges.len()) {
        let (mut pm, mut lm) = (0u64, 0u64);
        for i in 0..edges.len() {
            if subset >> i & 1 == 1 {
                pm |= masks.points[i];
                lm |= masks.lines[i];
            }
        }
        let size = subset.count_ones() as i64;
        let nv = (pm | lm).count_ones() as i64;
        if size > 2 * nv - 3 || (pm == 0 && size > nv - 1) {
            return Ok(false);
        }
    }
    Ok(true)
}
