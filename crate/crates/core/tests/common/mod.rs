//! Brute-force reference implementations used by the integration tests.
//! Nothing here calls into the algorithms under test.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use plrigid::graph::{EdgeId, PointLineGraph, VertexKind};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn load(name: &str) -> PointLineGraph {
    PointLineGraph::read(&fixture(name)).expect("fixture parses")
}

pub fn all_edges(g: &PointLineGraph) -> Vec<EdgeId> {
    g.edge_ids().collect()
}

/// Number of distinct point- and line-vertices touched by `edges`.
pub fn touched(g: &PointLineGraph, edges: &[EdgeId]) -> (i64, i64) {
    let mut seen = BTreeSet::new();
    for &e in edges {
        let (a, b) = g.ends(e);
        seen.insert(a);
        seen.insert(b);
    }
    let points = seen
        .iter()
        .filter(|v| g.kind(**v) == VertexKind::Point)
        .count() as i64;
    (points, seen.len() as i64 - points)
}

pub fn subsets(edges: &[EdgeId]) -> impl Iterator<Item = Vec<EdgeId>> + '_ {
    (1u32..(1 << edges.len())).map(move |mask| {
        edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect()
    })
}

/// Independence in `M(i·ν_P + j·ν_L − k)` by checking every nonempty subset.
pub fn count_independent(g: &PointLineGraph, edges: &[EdgeId], (i, j, k): (i64, i64, i64)) -> bool {
    subsets(edges).all(|s| {
        let (p, l) = touched(g, &s);
        s.len() as i64 <= i * p + j * l - k
    })
}

/// Rank in a count matroid, greedily with brute-force independence.
pub fn count_rank(g: &PointLineGraph, edges: &[EdgeId], params: (i64, i64, i64)) -> usize {
    let mut basis = Vec::new();
    for &e in edges {
        basis.push(e);
        if !count_independent(g, &basis, params) {
            basis.pop();
        }
    }
    basis.len()
}

/// Rank of `M(2,1,2) ∨ M(0,1,0)` by the matroid union theorem:
/// `min_B r₁(B) + r₂(B) + |A ∖ B|`.
pub fn union_rank_brute(g: &PointLineGraph, edges: &[EdgeId]) -> usize {
    let mut best = edges.len();
    for mask in 0u32..(1 << edges.len()) {
        let b: Vec<EdgeId> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let value =
            count_rank(g, &b, (2, 1, 2)) + count_rank(g, &b, (0, 1, 0)) + edges.len() - b.len();
        best = best.min(value);
    }
    best
}

/// All set partitions of `items`, by placing each item into an existing
/// block or a new one.
pub fn set_partitions(items: &[EdgeId]) -> Vec<Vec<Vec<EdgeId>>> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<EdgeId>> = Vec::new();
    fn go(items: &[EdgeId], blocks: &mut Vec<Vec<EdgeId>>, out: &mut Vec<Vec<Vec<EdgeId>>>) {
        let Some((&first, rest)) = items.split_first() else {
            out.push(blocks.clone());
            return;
        };
        for i in 0..blocks.len() {
            blocks[i].push(first);
            go(rest, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![first]);
        go(rest, blocks, out);
        blocks.pop();
    }
    go(items, &mut blocks, &mut out);
    out
}

/// Components of the graph on parts where two parts are adjacent when they
/// share a line-vertex.
pub fn line_components(g: &PointLineGraph, parts: &[Vec<EdgeId>]) -> usize {
    let lines: Vec<BTreeSet<usize>> = parts
        .iter()
        .map(|p| {
            p.iter()
                .flat_map(|&e| {
                    let (a, b) = g.ends(e);
                    [a, b]
                })
                .filter(|v| g.kind(*v) == VertexKind::Line)
                .map(|v| v.0)
                .collect()
        })
        .collect();
    let mut seen = vec![false; parts.len()];
    let mut count = 0;
    for start in 0..parts.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for y in 0..parts.len() {
                if !seen[y] && !lines[x].is_disjoint(&lines[y]) {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    count
}

/// `ν_L(A) + Σ (2ν_P(Aᵢ) + ν_L(Aᵢ) − 2) − c_L(F)` for a partition `F` of `A`.
pub fn formula_value(g: &PointLineGraph, parts: &[Vec<EdgeId>]) -> i64 {
    let all: Vec<EdgeId> = parts.iter().flatten().copied().collect();
    let (_, lines) = touched(g, &all);
    let sum: i64 = parts
        .iter()
        .map(|p| {
            let (np, nl) = touched(g, p);
            2 * np + nl - 2
        })
        .sum();
    lines + sum - line_components(g, parts) as i64
}

/// The rank formula minimized over every partition.
pub fn formula_rank(g: &PointLineGraph, edges: &[EdgeId]) -> i64 {
    if edges.is_empty() {
        return 0;
    }
    set_partitions(edges)
        .iter()
        .map(|f| formula_value(g, f))
        .min()
        .expect("at least one partition")
}

/// Lovász–Yemini rank of a point-only edge set: `min_F Σ (2ν(Aᵢ) − 3)`.
pub fn lovasz_yemini(g: &PointLineGraph, edges: &[EdgeId]) -> i64 {
    if edges.is_empty() {
        return 0;
    }
    set_partitions(edges)
        .iter()
        .map(|f| f.iter().map(|p| 2 * touched(g, p).0 - 3).sum::<i64>())
        .min()
        .expect("at least one partition")
}

/// Graph with `points` point-vertices `u*`, `lines` line-vertices `v*` and
/// `edges` distinct pairs drawn uniformly.
pub fn random_graph(
    rng: &mut impl Rng,
    points: usize,
    lines: usize,
    edges: usize,
) -> PointLineGraph {
    let mut g = PointLineGraph::new();
    let mut vs = Vec::new();
    for i in 0..points {
        vs.push(g.add_point(format!("u{i}")));
    }
    for i in 0..lines {
        vs.push(g.add_line(format!("v{i}")));
    }
    let mut pairs = Vec::new();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            pairs.push((vs[a], vs[b]));
        }
    }
    pairs.shuffle(rng);
    pairs.truncate(edges);
    for (a, b) in pairs {
        g.add_edge(a, b);
    }
    g
}

/// Random mixed graph with at most `max_edges` edges.
pub fn random_mixed(rng: &mut impl Rng, max_edges: usize) -> PointLineGraph {
    let points: usize = rng.gen_range(0..=5);
    let lines: usize = rng.gen_range(0..=5);
    let n = points + lines;
    let capacity = n * n.saturating_sub(1) / 2;
    let edges = rng.gen_range(0..=max_edges.min(capacity));
    random_graph(rng, points, lines, edges)
}

/// Random point-line bipartite multigraph with at most `max_edges` edges.
pub fn random_bipartite(rng: &mut impl Rng, max_edges: usize) -> PointLineGraph {
    let points = rng.gen_range(1..=4);
    let lines = rng.gen_range(1..=4);
    let mut g = PointLineGraph::new();
    let us: Vec<_> = (0..points).map(|i| g.add_point(format!("u{i}"))).collect();
    let vs: Vec<_> = (0..lines).map(|i| g.add_line(format!("v{i}"))).collect();
    let edges = rng.gen_range(1..=max_edges);
    for _ in 0..edges {
        let u = us[rng.gen_range(0..points)];
        let v = vs[rng.gen_range(0..lines)];
        g.add_edge(u, v);
    }
    g
}

/// The unique circuit of `independent + e`, by brute force.
pub fn brute_circuit(
    g: &PointLineGraph,
    independent: &[EdgeId],
    e: EdgeId,
    params: (i64, i64, i64),
) -> Vec<EdgeId> {
    let mut best: Option<Vec<EdgeId>> = None;
    for s in subsets(independent).chain(std::iter::once(Vec::new())) {
        let mut c = s.clone();
        c.push(e);
        c.sort();
        if !count_independent(g, &c, params) && best.as_ref().is_none_or(|b| c.len() < b.len()) {
            best = Some(c);
        }
    }
    best.expect("set is dependent")
}
