use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plrigid"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("plrigid-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn rank_on_fixtures() {
    assert_eq!(
        stdout(&["rank", &fixture("fig1.txt")]),
        "rank: 14\nrigid: no\n"
    );
    assert_eq!(
        stdout(&["rank", &fixture("k33.txt")]),
        "rank: 9\nrigid: yes\n"
    );
    assert_eq!(
        stdout(&["rank", &fixture("empty.txt")]),
        "rank: 0\nrigid: yes\n"
    );
    assert_eq!(
        stdout(&["rank", &fixture("single_point.txt")]),
        "rank: 0\nrigid: yes\n"
    );
    assert_eq!(stdout(&["rigid", &fixture("k4.txt")]), "rigid: yes\n");
}

#[test]
fn rank_agrees_with_matrix_oracle_on_every_fixture() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path().to_string_lossy().into_owned();
        let rank = stdout(&["rank", &path]);
        let oracle = stdout(&["oracle", &path, "--method", "matrix"]);
        assert_eq!(rank.lines().next(), oracle.lines().next(), "{path}");
    }
}

#[test]
fn oracle_methods() {
    assert_eq!(
        stdout(&[
            "oracle",
            &fixture("fig1.txt"),
            "--method",
            "matrix",
            "--trials",
            "5"
        ]),
        "rank: 14\n"
    );
    let formula = stdout(&[
        "oracle",
        &fixture("line_triangle.txt"),
        "--method",
        "formula",
    ]);
    assert!(formula.starts_with("rank: 2\npartition: "));
    assert_eq!(
        stdout(&["oracle", &fixture("k4.txt"), "--method", "counts"]),
        "necessary counts: fail\n"
    );
    assert_eq!(
        run(&[
            "oracle",
            &fixture("k4.txt"),
            "--method",
            "counts",
            "--limit",
            "5"
        ])
        .status
        .code(),
        Some(3)
    );
    let k4_minus = temp_file(
        "k4e.txt",
        "point a\npoint b\npoint c\npoint d\nedge a b\nedge a c\nedge a d\nedge b c\nedge b d\n",
    );
    assert_eq!(
        stdout(&["oracle", &k4_minus, "--method", "counts"]),
        "necessary counts: pass\n"
    );
}

#[test]
fn exit_codes() {
    let bad = temp_file("bad.txt", "point a\nedge a b\n");
    assert_eq!(run(&["rank", &bad]).status.code(), Some(2));
    assert_eq!(
        run(&["rank", "/nonexistent/graph.txt"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["oracle", &fixture("fig1.txt"), "--method", "formula"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["gen", "--points", "2", "--edges", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["independent", &fixture("k4.txt"), "--edges", "0,0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn json_envelope() {
    let text = stdout(&["--json", "rank", &fixture("k33.txt")]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rank"], 9);
    assert_eq!(v["rigid"], true);
    let t = v["certificate"]["T"].as_array().unwrap().len();
    let s = v["certificate"]["S"].as_array().unwrap().len();
    assert_eq!(t + s, 9);
    assert!(text.ends_with('\n'));
}

#[test]
fn independence_and_circuits() {
    assert_eq!(
        stdout(&["independent", &fixture("k33.txt")]),
        "independent: yes\nrank: 9\n"
    );
    assert_eq!(
        stdout(&[
            "independent",
            &fixture("line_triangle.txt"),
            "--edges",
            "0,1"
        ]),
        "independent: yes\nrank: 2\n"
    );
    let c = stdout(&["circuit", &fixture("line_triangle.txt"), "--edge", "2"]);
    assert_eq!(c, "circuit: 3 edges\n0 v1 v2\n1 v2 v3\n2 v1 v3\n");
    let free = stdout(&["circuit", &fixture("k33.txt"), "--edge", "0"]);
    assert!(free.contains("independent"));
}

#[test]
fn certificate_lists_both_parts() {
    let out = stdout(&["certificate", &fixture("fig1.txt")]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("T:") && lines[1].starts_with("S:"));
    let entries = out
        .split_whitespace()
        .filter(|w| w.contains(':') && w.len() > 2)
        .count();
    assert_eq!(entries, 14);
}

#[test]
fn gen_is_deterministic_and_forced_cases() {
    assert_eq!(
        stdout(&["gen", "--points", "2", "--lines", "0", "--edges", "1"]),
        "point u1\npoint u2\nedge u1 u2\n"
    );
    assert_eq!(
        stdout(&["gen", "--points", "0", "--lines", "3", "--edges", "3"]),
        "line v1\nline v2\nline v3\nedge v1 v2\nedge v1 v3\nedge v2 v3\n"
    );
    let args = [
        "gen", "--points", "5", "--lines", "5", "--edges", "12", "--seed", "9",
    ];
    assert_eq!(stdout(&args), stdout(&args));
    let other = [
        "gen", "--points", "5", "--lines", "5", "--edges", "12", "--seed", "10",
    ];
    assert_ne!(stdout(&args), stdout(&other));
}

#[test]
fn dump_matrix_csv() {
    let r = stdout(&["dump-matrix", &fixture("fig1.txt"), "--kind", "R"]);
    let lines: Vec<&str> = r.lines().collect();
    assert_eq!(lines.len(), 16);
    assert!(lines[0].starts_with("u1.x,u1.y,u2.x"));
    assert!(lines[0].ends_with("v3.a,v3.b"));
    let j = stdout(&["dump-matrix", &fixture("k33.txt"), "--kind", "J"]);
    assert_eq!(j.lines().count(), 10);
    let c = stdout(&["dump-matrix", &fixture("k33.txt"), "--kind", "C"]);
    assert_eq!(
        c.lines().next(),
        Some("u1.1,u1.2,u2.1,u2.2,u3.1,u3.2,v1.1,v2.1,v3.1")
    );
    let a = stdout(&["dump-matrix", &fixture("k33.txt"), "--kind", "A"]);
    assert_eq!(a.lines().next().unwrap().split(',').count(), 12);
    assert_eq!(
        run(&["dump-matrix", &fixture("k4.txt"), "--kind", "B"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn dot_marks_vertex_kinds() {
    let dot = stdout(&["dot", &fixture("k33.txt")]);
    assert!(dot.starts_with("graph G {"));
    assert!(dot.contains("u1 [shape=circle, style=filled"));
    assert!(dot.contains("v1 [shape=circle, style=solid"));
    assert_eq!(dot.matches(" -- ").count(), 9);
    let oriented = stdout(&["dot", &fixture("line_triangle.txt"), "--orient"]);
    assert!(oriented.starts_with("digraph G {"));
    assert_eq!(oriented.matches("label=").count(), 2);
    assert_eq!(oriented.matches("dir=none").count(), 1);
}

#[test]
fn bench_table() {
    let out = stdout(&["bench", "--sizes", "20,40"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("20\t100\t"));
    assert!(lines[2].starts_with("40\t200\t"));
    assert_eq!(
        stdout(&["bench", "--sizes", ""]),
        "vertices\tedges\tmillis\n"
    );
}
