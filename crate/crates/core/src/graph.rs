//! Point-line multigraphs: vertex kinds, edge classes, incidence counts and
//! the line-oriented / JSON file formats.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex index, assigned in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

/// Dense edge index. Parallel copies get fresh indices at the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexKind {
    Point,
    Line,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    PP,
    PL,
    LL,
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeClass::PP => "PP",
            EdgeClass::PL => "PL",
            EdgeClass::LL => "LL",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub ends: (VertexId, VertexId),
    /// Shared by an edge and all of its parallel copies.
    pub group: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: syntax error: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {msg}")]
    Semantic { line: usize, msg: String },
    #[error("invalid JSON graph: {0}")]
    Json(String),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("parallel copy {0} does not match the last added edge")]
    StaleCopy(EdgeId),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
}

/// A loopless graph whose vertices are points or lines.
///
/// Graphs read from files are simple. The builder methods accept parallel
/// edges, which the frame matrices and the doubled-edge test need.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointLineGraph {
    names: Vec<String>,
    kinds: Vec<VertexKind>,
    edges: Vec<Edge>,
    groups: usize,
}

/// Undo token for [`PointLineGraph::add_parallel_copy`].
#[derive(Debug, PartialEq, Eq)]
#[must_use]
pub struct ParallelCopy {
    pub edge: EdgeId,
}

impl PointLineGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>, kind: VertexKind) -> VertexId {
        self.names.push(name.into());
        self.kinds.push(kind);
        VertexId(self.kinds.len() - 1)
    }

    pub fn add_point(&mut self, name: impl Into<String>) -> VertexId {
        self.add_vertex(name, VertexKind::Point)
    }

    pub fn add_line(&mut self, name: impl Into<String>) -> VertexId {
        self.add_vertex(name, VertexKind::Line)
    }

    /// Adds a new edge class of its own. Panics on loops or unknown endpoints;
    /// use the parser for untrusted input.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> EdgeId {
        assert!(a != b, "loop at vertex {a}");
        assert!(
            a.0 < self.kinds.len() && b.0 < self.kinds.len(),
            "unknown endpoint"
        );
        self.edges.push(Edge {
            ends: (a, b),
            group: self.groups,
        });
        self.groups += 1;
        EdgeId(self.edges.len() - 1)
    }

    /// Appends a copy of `e` sharing its endpoints and parallel group.
    pub fn add_parallel_copy(&mut self, e: EdgeId) -> Result<ParallelCopy, GraphError> {
        let edge = self
            .edges
            .get(e.0)
            .ok_or(GraphError::UnknownEdge(e))?
            .clone();
        self.edges.push(edge);
        Ok(ParallelCopy {
            edge: EdgeId(self.edges.len() - 1),
        })
    }

    /// Reverts the most recent [`add_parallel_copy`](Self::add_parallel_copy).
    pub fn undo_parallel_copy(&mut self, token: ParallelCopy) -> Result<(), GraphError> {
        if token.edge.0 + 1 != self.edges.len() {
            return Err(GraphError::StaleCopy(token.edge));
        }
        self.edges.pop();
        Ok(())
    }

    /// Value-semantics variant of [`add_parallel_copy`](Self::add_parallel_copy).
    pub fn with_parallel_copy(&self, e: EdgeId) -> Result<(PointLineGraph, EdgeId), GraphError> {
        let mut g = self.clone();
        let copy = g.add_parallel_copy(e)?;
        Ok((g, copy.edge))
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn point_count(&self) -> usize {
        self.kinds
            .iter()
            .filter(|k| **k == VertexKind::Point)
            .count()
    }

    pub fn line_count(&self) -> usize {
        self.vertex_count() - self.point_count()
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.kinds[v.0]
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.kinds.len()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge(&self, e: EdgeId) -> Option<&Edge> {
        self.edges.get(e.0)
    }

    pub fn ends(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e.0].ends
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn edge_class(&self, e: EdgeId) -> Result<EdgeClass, GraphError> {
        let edge = self.edge(e).ok_or(GraphError::UnknownEdge(e))?;
        let (a, b) = edge.ends;
        Ok(match (self.kind(a), self.kind(b)) {
            (VertexKind::Point, VertexKind::Point) => EdgeClass::PP,
            (VertexKind::Line, VertexKind::Line) => EdgeClass::LL,
            _ => EdgeClass::PL,
        })
    }

    /// Number of distinct point- and line-vertices incident to `edges`.
    pub fn induced_counts(&self, edges: &[EdgeId]) -> (usize, usize) {
        let mut seen = vec![false; self.vertex_count()];
        let (mut points, mut lines) = (0, 0);
        for &e in edges {
            let (a, b) = self.ends(e);
            for v in [a, b] {
                if !seen[v.0] {
                    seen[v.0] = true;
                    match self.kind(v) {
                        VertexKind::Point => points += 1,
                        VertexKind::Line => lines += 1,
                    }
                }
            }
        }
        (points, lines)
    }

    /// True if every edge joins a point-vertex to a line-vertex.
    pub fn is_naturally_bipartite(&self) -> bool {
        self.edge_ids()
            .all(|e| self.edge_class(e) == Ok(EdgeClass::PL))
    }

    /// Parses the line-oriented format:
    ///
    /// ```text
    /// # comment
    /// point u1
    /// line v1
    /// edge u1 v1
    /// ```
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut g = PointLineGraph::new();
        let mut index: HashMap<String, VertexId> = HashMap::new();
        let mut pairs: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            let syntax = |msg: String| GraphError::Syntax { line, msg };
            match words[0] {
                kw @ ("point" | "line") => {
                    if words.len() != 2 {
                        return Err(syntax(format!("`{kw}` takes exactly one name")));
                    }
                    let name = words[1];
                    check_name(name).map_err(syntax)?;
                    if index.contains_key(name) {
                        return Err(GraphError::Semantic {
                            line,
                            msg: format!("duplicate vertex `{name}`"),
                        });
                    }
                    let kind = if kw == "point" {
                        VertexKind::Point
                    } else {
                        VertexKind::Line
                    };
                    let v = g.add_vertex(name, kind);
                    index.insert(name.to_string(), v);
                }
                "edge" => {
                    if words.len() != 3 {
                        return Err(syntax("`edge` takes exactly two names".into()));
                    }
                    check_name(words[1]).map_err(syntax)?;
                    check_name(words[2]).map_err(syntax)?;
                    let lookup = |name: &str| {
                        index
                            .get(name)
                            .copied()
                            .ok_or_else(|| GraphError::Semantic {
                                line,
                                msg: format!("unknown vertex `{name}`"),
                            })
                    };
                    let a = lookup(words[1])?;
                    let b = lookup(words[2])?;
                    g.checked_edge(a, b, line, &mut pairs)?;
                }
                other => return Err(syntax(format!("unknown keyword `{other}`"))),
            }
        }
        Ok(g)
    }

    /// Parses the JSON mirror `{"points": [..], "lines": [..], "edges": [[a, b], ..]}`.
    /// Points are declared before lines.
    pub fn parse_json(text: &str) -> Result<Self, GraphError> {
        let file: JsonGraph =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let mut g = PointLineGraph::new();
        let mut index = HashMap::new();
        let declared = file
            .points
            .iter()
            .map(|n| (n, VertexKind::Point))
            .chain(file.lines.iter().map(|n| (n, VertexKind::Line)));
        for (i, (name, kind)) in declared.enumerate() {
            let line = i + 1;
            check_name(name).map_err(|msg| GraphError::Syntax { line, msg })?;
            if index.contains_key(name.as_str()) {
                return Err(GraphError::Semantic {
                    line,
                    msg: format!("duplicate vertex `{name}`"),
                });
            }
            index.insert(name.as_str(), g.add_vertex(name.clone(), kind));
        }
        let mut pairs = HashMap::new();
        for (i, [a, b]) in file.edges.iter().enumerate() {
            let line = file.points.len() + file.lines.len() + i + 1;
            let lookup = |name: &String| {
                index
                    .get(name.as_str())
                    .copied()
                    .ok_or_else(|| GraphError::Semantic {
                        line,
                        msg: format!("unknown vertex `{name}`"),
                    })
            };
            let (a, b) = (lookup(a)?, lookup(b)?);
            g.checked_edge(a, b, line, &mut pairs)?;
        }
        Ok(g)
    }

    /// Reads a graph file, choosing the JSON reader for `.json` paths.
    pub fn read(path: &Path) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path).map_err(|e| GraphError::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        if path.extension().is_some_and(|ext| ext == "json") {
            Self::parse_json(&text)
        } else {
            Self::parse(&text)
        }
    }

    fn checked_edge(
        &mut self,
        a: VertexId,
        b: VertexId,
        line: usize,
        pairs: &mut HashMap<(VertexId, VertexId), usize>,
    ) -> Result<EdgeId, GraphError> {
        if a == b {
            return Err(GraphError::Semantic {
                line,
                msg: format!("loop at `{}`", self.name(a)),
            });
        }
        let key = (a.min(b), a.max(b));
        if let Some(first) = pairs.get(&key) {
            return Err(GraphError::Semantic {
                line,
                msg: format!(
                    "parallel edge `{}`-`{}` (first declared on line {first})",
                    self.name(a),
                    self.name(b)
                ),
            });
        }
        pairs.insert(key, line);
        Ok(self.add_edge(a, b))
    }

    /// Writes the line-oriented format. Vertices keep their order, so
    /// `parse(serialize(g)) == g` for simple graphs.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for v in self.vertices() {
            let kw = match self.kind(v) {
                VertexKind::Point => "point",
                VertexKind::Line => "line",
            };
            out.push_str(&format!("{kw} {}\n", self.name(v)));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} {}\n",
                self.name(e.ends.0),
                self.name(e.ends.1)
            ));
        }
        out
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    #[serde(default)]
    points: Vec<String>,
    #[serde(default)]
    lines: Vec<String>,
    #[serde(default)]
    edges: Vec<[String; 2]>,
}

fn check_name(name: &str) -> Result<(), String> {
    let mut chars = name.chars();
    let ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(format!("invalid vertex name `{name}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(g: &PointLineGraph) -> Vec<EdgeId> {
        g.edge_ids().collect()
    }

    #[test]
    fn minimal_declaration() {
        let g = PointLineGraph::parse("point u1\npoint u2\nedge u1 u2").unwrap();
        assert_eq!((g.point_count(), g.line_count(), g.edge_count()), (2, 0, 1));
        assert_eq!(g.edge_class(EdgeId(0)), Ok(EdgeClass::PP));
    }

    #[test]
    fn rejects_loops_duplicates_unknowns_and_parallels() {
        let loop_err = PointLineGraph::parse("line v1\nedge v1 v1").unwrap_err();
        assert!(matches!(loop_err, GraphError::Semantic { line: 2, .. }));
        let dup = PointLineGraph::parse("point a\nline a").unwrap_err();
        assert!(matches!(dup, GraphError::Semantic { line: 2, .. }));
        let unknown = PointLineGraph::parse("point a\nedge a b").unwrap_err();
        assert!(matches!(unknown, GraphError::Semantic { line: 2, .. }));
        let par = PointLineGraph::parse("point a\npoint b\nedge a b\nedge b a").unwrap_err();
        assert!(matches!(par, GraphError::Semantic { line: 4, .. }));
    }

    #[test]
    fn syntax_errors_report_line() {
        let err = PointLineGraph::parse("# header\npoint u1\nvertex u2").unwrap_err();
        assert_eq!(
            err,
            GraphError::Syntax {
                line: 3,
                msg: "unknown keyword `vertex`".into()
            }
        );
        assert!(matches!(
            PointLineGraph::parse("point 1abc"),
            Err(GraphError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            PointLineGraph::parse("point a b"),
            Err(GraphError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = PointLineGraph::parse("\n# c\npoint a # trailing\n\nline b\nedge a b\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_class(EdgeId(0)), Ok(EdgeClass::PL));
    }

    #[test]
    fn edge_classes() {
        let mut g = PointLineGraph::new();
        let u1 = g.add_point("u1");
        let u2 = g.add_point("u2");
        let v1 = g.add_line("v1");
        let v2 = g.add_line("v2");
        let pp = g.add_edge(u1, u2);
        let pl = g.add_edge(v1, u1);
        let ll = g.add_edge(v1, v2);
        assert_eq!(g.edge_class(pp), Ok(EdgeClass::PP));
        assert_eq!(g.edge_class(pl), Ok(EdgeClass::PL));
        assert_eq!(g.edge_class(ll), Ok(EdgeClass::LL));
        assert_eq!(
            g.edge_class(EdgeId(7)),
            Err(GraphError::UnknownEdge(EdgeId(7)))
        );
    }

    #[test]
    fn counts() {
        let g = PointLineGraph::parse("point u\nline v\nline w\nedge u v\nedge v w").unwrap();
        assert_eq!(g.induced_counts(&[]), (0, 0));
        assert_eq!(g.induced_counts(&[EdgeId(0)]), (1, 1));
        assert_eq!(g.induced_counts(&edges(&g)), (1, 2));
    }

    #[test]
    fn parallel_copy_and_undo() {
        let mut g = PointLineGraph::parse("point u\nline v\nedge u v").unwrap();
        let before = g.serialize();
        let token = g.add_parallel_copy(EdgeId(0)).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.ends(token.edge), g.ends(EdgeId(0)));
        assert_eq!(
            g.edge(token.edge).unwrap().group,
            g.edge(EdgeId(0)).unwrap().group
        );
        assert_eq!(g.induced_counts(&edges(&g)), (1, 1));
        g.undo_parallel_copy(token).unwrap();
        assert_eq!(g.serialize(), before);

        let (h, copy) = g.with_parallel_copy(EdgeId(0)).unwrap();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(copy, EdgeId(1));
        assert_eq!(g.edge_count(), 1);
        assert!(g.add_parallel_copy(EdgeId(3)).is_err());
    }

    #[test]
    fn stale_undo_is_rejected() {
        let mut g = PointLineGraph::parse("point u\nline v\nedge u v").unwrap();
        let first = g.add_parallel_copy(EdgeId(0)).unwrap();
        let second = g.add_parallel_copy(EdgeId(0)).unwrap();
        assert_eq!(
            g.undo_parallel_copy(first),
            Err(GraphError::StaleCopy(EdgeId(1)))
        );
        g.undo_parallel_copy(second).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn json_mirror() {
        let g = PointLineGraph::parse_json(
            r#"{"points": ["u1", "u2"], "lines": ["v1"], "edges": [["u1", "v1"], ["u2", "v1"]]}"#,
        )
        .unwrap();
        assert_eq!((g.point_count(), g.line_count(), g.edge_count()), (2, 1, 2));
        assert_eq!(g.kind(VertexId(2)), VertexKind::Line);
        assert!(PointLineGraph::parse_json(r#"{"points": ["a"], "edges": [["a", "a"]]}"#).is_err());
        assert!(PointLineGraph::parse_json("{").is_err());
    }
}
