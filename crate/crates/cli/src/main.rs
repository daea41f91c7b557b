use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use plrigid::formula::{
    rank_formula_oracle, subset_count_oracle, OracleError, DEFAULT_COUNT_LIMIT,
    DEFAULT_PARTITION_LIMIT,
};
use plrigid::graph::{EdgeId, GraphError, PointLineGraph, VertexKind};
use plrigid::numeric::{
    float_csv, frame_matrices, generic_bound, jacobian, matrix_rank_oracle, random_frame,
    random_realization, rigidity_labels, rigidity_matrix, NumericError, DEFAULT_TRIALS,
};
use plrigid::rank::{independent_subset, maximal_independent};
use plrigid::union::Part;
use plrigid::{is_rigid, RankError, SharpState};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "plrigid",
    version,
    about = "Generic rigidity of 2D point-line frameworks"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of the rigidity matroid and generic rigidity.
    Rank { path: PathBuf },
    /// Generic rigidity only.
    Rigid { path: PathBuf },
    /// Independence of all edges, or of the listed edge indices.
    Independent {
        path: PathBuf,
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<usize>>,
    },
    /// Circuit closed by an edge against a greedy basis of the other edges.
    Circuit {
        path: PathBuf,
        #[arg(long)]
        edge: usize,
    },
    /// The (T, S) split of a maximal independent set with edge orientations.
    Certificate { path: PathBuf },
    /// Independent rank oracles.
    Oracle {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "matrix")]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge limit for the formula and counts oracles.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Writes a matrix as CSV with a header row of column labels.
    DumpMatrix {
        path: PathBuf,
        #[arg(long, value_enum)]
        kind: MatrixKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Graphviz export.
    Dot {
        path: PathBuf,
        /// Draw accepted edges as arcs oriented by the certificate.
        #[arg(long)]
        orient: bool,
    },
    /// Random simple graph in the text format.
    Gen {
        #[arg(long, default_value_t = 0)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        lines: usize,
        #[arg(long, default_value_t = 0)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Times rank() on random graphs with |E| = 5|V|.
    Bench {
        /// Comma-separated vertex counts; may be empty.
        #[arg(long, default_value = "50,100,200")]
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Matrix,
    Formula,
    Counts,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    #[value(name = "R")]
    R,
    #[value(name = "J")]
    J,
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "C")]
    C,
}

enum Failure {
    Input(String),
    Limit(String),
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Limit(_) => 3,
            Failure::Invariant(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Limit(m) | Failure::Invariant(m) => m,
        }
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<RankError> for Failure {
    fn from(e: RankError) -> Self {
        match e {
            RankError::Graph(g) => g.into(),
            RankError::UnknownEdge(_) => Failure::Input(e.to_string()),
            other => Failure::Invariant(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::LimitExceeded { .. } => Failure::Limit(e.to_string()),
            other => Failure::Invariant(other.to_string()),
        }
    }
}

impl From<NumericError> for Failure {
    fn from(e: NumericError) -> Self {
        match e {
            NumericError::NotBipartite | NumericError::NoTrials => Failure::Input(e.to_string()),
            other => Failure::Invariant(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn edge_label(g: &PointLineGraph, e: EdgeId) -> String {
    let (a, b) = g.ends(e);
    format!("{} {} {}", e.0, g.name(a), g.name(b))
}

fn json_line(value: serde_json::Value) -> String {
    format!("{value}\n")
}

fn certified(g: &PointLineGraph) -> Result<SharpState, Failure> {
    let st = maximal_independent(g)?;
    st.certificate()
        .check_loops(g)
        .map_err(|e| Failure::Invariant(e.to_string()))?;
    Ok(st)
}

fn rigid_of(g: &PointLineGraph, r: usize) -> bool {
    g.vertex_count() <= 1 || r == 2 * g.vertex_count() - 3
}

fn cmd_rank(path: &Path, json: bool) -> Outcome {
    let g = PointLineGraph::read(path)?;
    let st = certified(&g)?;
    let rigid = rigid_of(&g, st.len());
    if json {
        return Ok(json_line(json!({
            "rank": st.len(),
            "rigid": rigid,
            "certificate": st.certificate().view(&g),
        })));
    }
    Ok(format!("rank: {}\nrigid: {}\n", st.len(), yes_no(rigid)))
}

fn cmd_rigid(path: &Path, json: bool) -> Outcome {
    let g = PointLineGraph::read(path)?;
    let rigid = is_rigid(&g)?;
    if json {
        return Ok(json_line(json!({ "rigid": rigid })));
    }
    Ok(format!("rigid: {}\n", yes_no(rigid)))
}

fn cmd_independent(path: &Path, edges: Option<Vec<usize>>, json: bool) -> Outcome {
    let g = PointLineGraph::read(path)?;
    let edges: Vec<EdgeId> = match edges {
        Some(list) => list.into_iter().map(EdgeId).collect(),
        None => g.edge_ids().collect(),
    };
    let mut seen = vec![false; g.edge_count()];
    for e in &edges {
        match seen.get_mut(e.0) {
            None => {
                return Err(Failure::Input(format!(
                    "edge {e} is not an edge of the graph"
                )))
            }
            Some(true) => return Err(Failure::Input(format!("edge {e} is listed twice"))),
            Some(flag) => *flag = true,
        }
    }
    let st = independent_subset(&g, &edges)?;
    let independent = st.len() == edges.len();
    if json {
        return Ok(json_line(
            json!({ "independent": independent, "rank": st.len() }),
        ));
    }
    Ok(format!(
        "independent: {}\nrank: {}\n",
        yes_no(independent),
        st.len()
    ))
}

fn cmd_circuit(path: &Path, edge: usize, json: bool) -> Outcome {
    let g = PointLineGraph::read(path)?;
    let e = EdgeId(edge);
    if edge >= g.edge_count() {
        return Err(Failure::Input(format!(
            "edge {edge} is not an edge of the graph"
        )));
    }
    let others: Vec<EdgeId> = g.edge_ids().filter(|f| *f != e).collect();
    let st = independent_subset(&g, &others)?;
    let circuit = match st.circuit(e) {
        Ok(c) => Some(c),
        Err(RankError::NotDependent(_)) => None,
        Err(err) => return Err(err.into()),
    };
    if json {
        let list = circuit
            .as_ref()
            .map(|c| c.iter().map(|e| e.0).collect::<Vec<_>>());
        return Ok(json_line(json!({ "edge": edge, "circuit": list })));
    }
    match circuit {
        None => Ok(format!("edge {edge} is independent of the other edges\n")),
        Some(c) => {
            let mut out = format!("circuit: {} edges\n", c.len());
            for f in c {
                out.push_str(&edge_label(&g, f));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn cmd_certificate(path: &Path, json: bool) -> Outcome {
    let g = PointLineGraph::read(path)?;
    let st = certified(&g)?;
    if json {
        return Ok(json_line(json!({
            "rank": st.len(),
            "rigid": rigid_of(&g, st.len()),
            "certificate": st.certificate().view(&g),
        })));
    }
    Ok(st.certificate().dump(&g))
}

fn cmd_oracle(
    path: &Path,
    method: Method,
    trials: usize,
    seed: u64,
    limit: Option<usize>,
    json: bool,
) -> Outcome {
    let g = PointLineGraph::read(path)?;
    let all: Vec<EdgeId> = g.edge_ids().collect();
    match method {
        Method::Matrix => {
            let r = matrix_rank_oracle(&g, trials, seed)?;
            if json {
                return Ok(json_line(json!({ "method": "matrix", "rank": r })));
            }
            Ok(format!("rank: {r}\n"))
        }
        Method::Formula => {
            let best = rank_formula_oracle(&g, &all, limit.unwrap_or(DEFAULT_PARTITION_LIMIT))?;
            let parts: Vec<Vec<usize>> = best
                .partition
                .iter()
                .map(|p| p.iter().map(|e| e.0).collect())
                .collect();
            if json {
                return Ok(json_line(
                    json!({ "method": "formula", "rank": best.value, "partition": parts }),
                ));
            }
            let shown: Vec<String> = parts
                .iter()
                .map(|p| {
                    let ids: Vec<String> = p.iter().map(|e| e.to_string()).collect();
                    format!("{{{}}}", ids.join(" "))
                })
                .collect();
            Ok(format!(
                "rank: {}\npartition: {}\n",
                best.value,
                shown.join(" ")
            ))
        }
        Method::Counts => {
            let pass = subset_count_oracle(&g, &all, limit.unwrap_or(DEFAULT_COUNT_LIMIT))?;
            if json {
                return Ok(json_line(json!({ "method": "counts", "pass": pass })));
            }
            Ok(format!(
                "necessary counts: {}\n",
                if pass { "pass" } else { "fail" }
            ))
        }
    }
}

fn cmd_dump_matrix(path: &Path, kind: MatrixKind, seed: u64) -> Outcome {
    let g = PointLineGraph::read(path)?;
    match kind {
        MatrixKind::R | MatrixKind::J => {
            let p = random_realization(&g, seed, generic_bound(g.vertex_count()))?;
            if let MatrixKind::R = kind {
                return Ok(rigidity_matrix(&g, &p)?.to_csv());
            }
            Ok(float_csv(&jacobian(&g, &p.to_f64()), &rigidity_labels(&g)))
        }
        MatrixKind::A | MatrixKind::B | MatrixKind::C => {
            let frame = random_frame(&g, seed, generic_bound(g.line_count() + g.edge_count()))?;
            let m = frame_matrices(&g, &frame)?;
            Ok(match kind {
                MatrixKind::A => m.a.to_csv(),
                MatrixKind::B => m.b.to_csv(),
                _ => m.c.to_csv(),
            })
        }
    }
}

fn cmd_dot(path: &Path, orient: bool) -> Outcome {
    let g = PointLineGraph::read(path)?;
    let mut out = String::new();
    let (graph_kw, edge_op) = if orient {
        ("digraph", "->")
    } else {
        ("graph", "--")
    };
    let _ = writeln!(out, "{graph_kw} G {{");
    for v in g.vertices() {
        let fill = match g.kind(v) {
            VertexKind::Point => "style=filled, fillcolor=black, fontcolor=white",
            VertexKind::Line => "style=solid, fillcolor=white",
        };
        let _ = writeln!(out, "  {} [shape=circle, {fill}];", g.name(v));
    }
    let st = if orient { Some(certified(&g)?) } else { None };
    for e in g.edge_ids() {
        let (a, b) = g.ends(e);
        let (na, nb) = (g.name(a), g.name(b));
        let arc = st.as_ref().and_then(|st| {
            let cert = st.certificate();
            let part = cert.part_of(e)?;
            let head = cert.part(part).head(e)?;
            Some((part, head))
        });
        match arc {
            Some((part, head)) => {
                let tail = if head == a { nb } else { na };
                let color = if part == Part::T { "black" } else { "blue" };
                let _ = writeln!(
                    out,
                    "  {tail} -> {} [label=\"{}\", color={color}];",
                    g.name(head),
                    part
                );
            }
            None if orient => {
                let _ = writeln!(out, "  {na} -> {nb} [dir=none, style=dashed];");
            }
            None => {
                let _ = writeln!(out, "  {na} {edge_op} {nb};");
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn generate(
    points: usize,
    lines: usize,
    edges: usize,
    seed: u64,
) -> Result<PointLineGraph, Failure> {
    let mut g = PointLineGraph::new();
    let mut vs = Vec::new();
    for i in 1..=points {
        vs.push(g.add_point(format!("u{i}")));
    }
    for i in 1..=lines {
        vs.push(g.add_line(format!("v{i}")));
    }
    let n = vs.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    if edges > pairs.len() {
        return Err(Failure::Input(format!(
            "{edges} edges requested but a simple graph on {n} vertices has at most {}",
            pairs.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = index::sample(&mut rng, pairs.len(), edges).into_vec();
    chosen.sort_unstable();
    for i in chosen {
        let (a, b) = pairs[i];
        g.add_edge(vs[a], vs[b]);
    }
    Ok(g)
}

fn cmd_gen(points: usize, lines: usize, edges: usize, seed: u64) -> Outcome {
    Ok(generate(points, lines, edges, seed)?.serialize())
}

fn parse_sizes(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Failure::Input(format!("invalid size `{s}`")))
        })
        .collect()
}

fn cmd_bench(sizes: &str, seed: u64, json: bool) -> Outcome {
    let sizes = parse_sizes(sizes)?;
    let mut rows = Vec::new();
    for (i, &n) in sizes.iter().enumerate() {
        let m = (5 * n).min(n * n.saturating_sub(1) / 2);
        let g = generate(n / 2, n - n / 2, m, seed.wrapping_add(i as u64))?;
        let start = Instant::now();
        maximal_independent(&g)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        rows.push((g.vertex_count(), g.edge_count(), ms));
    }
    if json {
        let list: Vec<_> = rows
            .iter()
            .map(|(v, e, ms)| json!({ "vertices": v, "edges": e, "millis": ms }))
            .collect();
        return Ok(json_line(json!(list)));
    }
    let mut out = String::from("vertices\tedges\tmillis\n");
    for (v, e, ms) in rows {
        let _ = writeln!(out, "{v}\t{e}\t{ms:.3}");
    }
    Ok(out)
}

fn run(cli: Cli) -> Outcome {
    let json = cli.json;
    match cli.command {
        Command::Rank { path } => cmd_rank(&path, json),
        Command::Rigid { path } => cmd_rigid(&path, json),
        Command::Independent { path, edges } => cmd_independent(&path, edges, json),
        Command::Circuit { path, edge } => cmd_circuit(&path, edge, json),
        Command::Certificate { path } => cmd_certificate(&path, json),
        Command::Oracle {
            path,
            method,
            trials,
            seed,
            limit,
        } => cmd_oracle(&path, method, trials, seed, limit, json),
        Command::DumpMatrix { path, kind, seed } => cmd_dump_matrix(&path, kind, seed),
        Command::Dot { path, orient } => cmd_dot(&path, orient),
        Command::Gen {
            points,
            lines,
            edges,
            seed,
        } => cmd_gen(points, lines, edges, seed),
        Command::Bench { sizes, seed } => cmd_bench(&sizes, seed, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
