//! Linear-algebra oracles: the rigidity matrix `R(G,p)`, the Jacobian of the
//! rigidity map, and the frame matrices `A`, `B`, `C` of naturally bipartite
//! graphs, with exact rank over the rationals.
//!
//! Column layout for all matrices: point-vertices first in id order, then
//! line-vertices in id order. Points take columns `x, y` (`1, 2` for frame
//! matrices); lines take `a, b` in `R` and `J`, `1, 2` in `A`, and a single
//! column in `B` and `C`.
//!
//! Genericity is approximated by distinct random integers. An unlucky draw
//! can only lower a rank, so [`matrix_rank_oracle`] keeps the maximum over
//! several trials.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EdgeClass, PointLineGraph, VertexId, VertexKind};

/// Singular values below this fraction of the largest count as zero.
pub const SVD_RELATIVE_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_TRIALS: usize = 5;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericError {
    #[error("sampling bound {bound} is below the required {required}")]
    BoundTooSmall { bound: u64, required: u64 },
    #[error("frame matrices need a naturally bipartite graph")]
    NotBipartite,
    #[error("at least one trial is required")]
    NoTrials,
    #[error("realization does not match the graph")]
    Mismatch,
}

/// Exact coordinates: `(x, y)` for a point, `(a, b)` for the line
/// `x = a·y + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub coords: Vec<(BigRational, BigRational)>,
}

impl Realization {
    pub fn from_integers(values: &[(i64, i64)]) -> Self {
        Realization {
            coords: values.iter().map(|&(a, b)| (int(a), int(b))).collect(),
        }
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.coords
            .iter()
            .map(|(a, b)| (to_f64(a), to_f64(b)))
            .collect()
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smallest bound accepted by [`random_realization`] for `n` vertices.
pub fn min_bound(n: usize) -> u64 {
    (4 * n * n).max(2 * n) as u64
}

/// Default sampling bound: comfortably above [`min_bound`].
pub fn generic_bound(n: usize) -> u64 {
    min_bound(n).max(1 << 20)
}

fn distinct_integers(count: usize, bound: u64, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    index::sample(&mut rng, bound as usize, count)
        .into_iter()
        .map(|i| i as i64 + 1)
        .collect()
}

/// Pairwise distinct integer coordinates in `[1, bound]`, deterministic in
/// `seed`.
pub fn random_realization(
    g: &PointLineGraph,
    seed: u64,
    bound: u64,
) -> Result<Realization, NumericError> {
    let required = min_bound(g.vertex_count());
    if bound < required {
        return Err(NumericError::BoundTooSmall { bound, required });
    }
    let values = distinct_integers(2 * g.vertex_count(), bound, seed);
    Ok(Realization {
        coords: values.chunks(2).map(|c| (int(c[0]), int(c[1]))).collect(),
    })
}

/// Dense matrix of exact rationals with labelled columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BigRational>,
    pub labels: Vec<String>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, labels: Vec<String>) -> Self {
        let cols = labels.len();
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
            labels,
        }
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), (0..cols).map(|c| format!("c{c}")).collect());
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, int(v));
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| to_f64(self.get(r, c)))
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.labels.join(",");
        out.push('\n');
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// CSV with a header row for a floating matrix.
pub fn float_csv(m: &DMatrix<f64>, labels: &[String]) -> String {
    let mut out = labels.join(",");
    out.push('\n');
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", m[(r, c)]);
        }
        out.push('\n');
    }
    out
}

/// First column of each vertex and the column labels.
struct Layout {
    start: Vec<usize>,
    labels: Vec<String>,
}

fn layout(g: &PointLineGraph, point_cols: &[&str], line_cols: &[&str]) -> Layout {
    let mut start = vec![0; g.vertex_count()];
    let mut labels = Vec::new();
    for (kind, suffixes) in [
        (VertexKind::Point, point_cols),
        (VertexKind::Line, line_cols),
    ] {
        for v in g.vertices().filter(|v| g.kind(*v) == kind) {
            start[v.0] = labels.len();
            for s in suffixes {
                labels.push(format!("{}.{s}", g.name(v)));
            }
        }
    }
    Layout { start, labels }
}

/// Column labels of `R` and `J`.
pub fn rigidity_labels(g: &PointLineGraph) -> Vec<String> {
    layout(g, &["x", "y"], &["a", "b"]).labels
}

/// Endpoints of an edge as (point, line), (first, second) for same-kind
/// edges ordered by id.
fn ordered(g: &PointLineGraph, a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    match (g.kind(a), g.kind(b)) {
        (VertexKind::Line, VertexKind::Point) => (b, a),
        (VertexKind::Point, VertexKind::Line) => (a, b),
        _ => (a.min(b), a.max(b)),
    }
}

fn check_size(g: &PointLineGraph, p: &Realization) -> Result<(), NumericError> {
    if p.coords.len() != g.vertex_count() {
        return Err(NumericError::Mismatch);
    }
    Ok(())
}

/// The simplified rigidity matrix, `|E| × 2|V|`.
pub fn rigidity_matrix(
    g: &PointLineGraph,
    p: &Realization,
) -> Result<RationalMatrix, NumericError> {
    check_size(g, p)?;
    let lay = layout(g, &["x", "y"], &["a", "b"]);
    let mut m = RationalMatrix::zeros(g.edge_count(), lay.labels);
    for e in g.edge_ids() {
        let (s, t) = g.ends(e);
        let (j, k) = ordered(g, s, t);
        let (cj, ck) = (lay.start[j.0], lay.start[k.0]);
        match g.edge_class(e).expect("edge exists") {
            EdgeClass::PP => {
                let (xj, yj) = &p.coords[j.0];
                let (xk, yk) = &p.coords[k.0];
                m.set(e.0, cj, xj - xk);
                m.set(e.0, cj + 1, yj - yk);
                m.set(e.0, ck, xk - xj);
                m.set(e.0, ck + 1, yk - yj);
            }
            EdgeClass::PL => {
                let (xj, yj) = &p.coords[j.0];
                let (ak, _) = &p.coords[k.0];
                m.set(e.0, cj, BigRational::one());
                m.set(e.0, cj + 1, -ak.clone());
                m.set(e.0, ck, -(xj * ak) - yj);
                m.set(e.0, ck + 1, -BigRational::one());
            }
            EdgeClass::LL => {
                m.set(e.0, cj, BigRational::one());
                m.set(e.0, ck, -BigRational::one());
            }
        }
    }
    Ok(m)
}

/// Evaluates the rigidity map: squared distances, signed point-line
/// distances and line-line angle differences.
pub fn rigidity_map(g: &PointLineGraph, coords: &[(f64, f64)]) -> Vec<f64> {
    g.edge_ids()
        .map(|e| {
            let (s, t) = g.ends(e);
            let (j, k) = ordered(g, s, t);
            let (pj, pk) = (coords[j.0], coords[k.0]);
            match g.edge_class(e).expect("edge exists") {
                EdgeClass::PP => (pj.0 - pk.0).powi(2) + (pj.1 - pk.1).powi(2),
                EdgeClass::PL => {
                    let (x, y) = pj;
                    let (a, b) = pk;
                    (x - y * a - b) / (1.0 + a * a).sqrt()
                }
                EdgeClass::LL => pj.0.atan() - pk.0.atan(),
            }
        })
        .collect()
}

/// Jacobian of [`rigidity_map`], `|E| × 2|V|`, in the `R` column layout.
pub fn jacobian(g: &PointLineGraph, coords: &[(f64, f64)]) -> DMatrix<f64> {
    let lay = layout(g, &["x", "y"], &["a", "b"]);
    let mut m = DMatrix::zeros(g.edge_count(), lay.labels.len());
    for e in g.edge_ids() {
        let (s, t) = g.ends(e);
        let (j, k) = ordered(g, s, t);
        let (cj, ck) = (lay.start[j.0], lay.start[k.0]);
        let (pj, pk) = (coords[j.0], coords[k.0]);
        let r = e.0;
        match g.edge_class(e).expect("edge exists") {
            EdgeClass::PP => {
                m[(r, cj)] = 2.0 * (pj.0 - pk.0);
                m[(r, cj + 1)] = 2.0 * (pj.1 - pk.1);
                m[(r, ck)] = 2.0 * (pk.0 - pj.0);
                m[(r, ck + 1)] = 2.0 * (pk.1 - pj.1);
            }
            EdgeClass::PL => {
                let (x, y) = pj;
                let (a, b) = pk;
                let w = 1.0 + a * a;
                m[(r, cj)] = w.powf(-0.5);
                m[(r, cj + 1)] = -a * w.powf(-0.5);
                m[(r, ck)] = (-x * a - y + a * b) * w.powf(-1.5);
                m[(r, ck + 1)] = -w.powf(-0.5);
            }
            EdgeClass::LL => {
                // d/da atan(a) = 1 / (1 + a²)
                m[(r, cj)] = 1.0 / (1.0 + pj.0 * pj.0);
                m[(r, ck)] = -1.0 / (1.0 + pk.0 * pk.0);
            }
        }
    }
    m
}

/// Numerical rank by singular values, relative to the largest one.
pub fn numeric_rank(m: &DMatrix<f64>, relative_tolerance: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let largest = sv.iter().cloned().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter()
        .filter(|s| **s > relative_tolerance * largest)
        .count()
}

/// Exact rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rank_exact(m: &RationalMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, v| {
                num::integer::lcm(acc, v.denom().clone())
            });
            row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
        })
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(pivot) = (rank..m.rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let (top, rest) = a.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            for j in col + 1..m.cols {
                let v = &row[j] * &prow[col] - &row[col] * &prow[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        debug_assert!(!prev.is_zero() && (prev.is_positive() || prev.is_negative()));
        rank += 1;
    }
    rank
}

/// Maximum rank of `R(G,p)` over `trials` random realizations seeded with
/// `seed, seed + 1, ...`.
pub fn matrix_rank_oracle(
    g: &PointLineGraph,
    trials: usize,
    seed: u64,
) -> Result<usize, NumericError> {
    if trials == 0 {
        return Err(NumericError::NoTrials);
    }
    let bound = generic_bound(g.vertex_count());
    let mut best = 0;
    for t in 0..trials as u64 {
        let p = random_realization(g, seed.wrapping_add(t), bound)?;
        best = best.max(rank_exact(&rigidity_matrix(g, &p)?));
    }
    Ok(best)
}

/// Parameters of a point-line frame: `t` per line-vertex, `c` per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    /// Indexed by vertex; `None` for point-vertices.
    pub t: Vec<Option<BigRational>>,
    /// Indexed by edge.
    pub c: Vec<BigRational>,
}

pub fn random_frame(g: &PointLineGraph, seed: u64, bound: u64) -> Result<Frame, NumericError> {
    if !g.is_naturally_bipartite() {
        return Err(NumericError::NotBipartite);
    }
    let count = g.line_count() + g.edge_count();
    let required = min_bound(count);
    if bound < required {
        return Err(NumericError::BoundTooSmall { bound, required });
    }
    let mut values = distinct_integers(count, bound, seed).into_iter().map(int);
    let t = g
        .vertices()
        .map(|v| match g.kind(v) {
            VertexKind::Line => values.next(),
            VertexKind::Point => None,
        })
        .collect();
    let c = values.collect();
    Ok(Frame { t, c })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameMatrices {
    pub a: RationalMatrix,
    pub b: RationalMatrix,
    pub c: RationalMatrix,
}

/// The `A`, `B` and `C` matrices of a frame on a naturally bipartite
/// (multi)graph.
pub fn frame_matrices(g: &PointLineGraph, frame: &Frame) -> Result<FrameMatrices, NumericError> {
    if !g.is_naturally_bipartite() {
        return Err(NumericError::NotBipartite);
    }
    if frame.t.len() != g.vertex_count() || frame.c.len() != g.edge_count() {
        return Err(NumericError::Mismatch);
    }
    let wide = layout(g, &["1", "2"], &["1", "2"]);
    let narrow = layout(g, &["1", "2"], &["1"]);
    let mut a = RationalMatrix::zeros(g.edge_count(), wide.labels);
    let mut b = RationalMatrix::zeros(g.edge_count(), narrow.labels.clone());
    let mut c = RationalMatrix::zeros(g.edge_count(), narrow.labels);
    let one = BigRational::one();
    for e in g.edge_ids() {
        let (s, t) = g.ends(e);
        let (u, v) = ordered(g, s, t);
        let tj = frame.t[v.0].clone().ok_or(NumericError::Mismatch)?;
        let ce = frame.c[e.0].clone();
        let r = e.0;

        let (cu, cv) = (wide.start[u.0], wide.start[v.0]);
        a.set(r, cu, one.clone());
        a.set(r, cu + 1, tj.clone());
        a.set(r, cv, ce.clone());
        a.set(r, cv + 1, -one.clone());

        let (cu, cv) = (narrow.start[u.0], narrow.start[v.0]);
        b.set(r, cu, one.clone());
        b.set(r, cu + 1, ce);
        b.set(r, cv, -one.clone());

        c.set(r, cu, one.clone());
        c.set(r, cu + 1, tj);
        c.set(r, cv, -one.clone());
    }
    Ok(FrameMatrices { a, b, c })
}
