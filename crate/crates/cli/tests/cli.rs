use std::process::{Command, Output};

use qautgraph::decomposition::build_x;
use qautgraph::graph::{disjoint_sum, families::*};
use qautgraph::io::write_graph6;
use qautgraph::Graph;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qautgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn result(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("json on stdout");
    v["result"].clone()
}

fn g6(g: &Graph) -> String {
    write_graph6(g)
}

#[test]
fn recognize() {
    let r = result(&["recognize", &g6(&complete(1))]);
    for class in ["cograph", "forest", "tree-cograph", "g5-cograph"] {
        assert_eq!(r["classes"][class], true, "{class}");
    }
    let r = result(&["recognize", &g6(&path(6))]);
    assert_eq!(r["classes"]["forest"], true);
    assert_eq!(r["classes"]["g5-cograph"], false);
    assert_eq!(r["classes"]["cograph"], false);
    assert_eq!(r["decomposition"]["base"], "tree-cograph");
    let r = result(&["recognize", "D?{"]);
    assert_eq!(r["classes"]["cograph"], true);
    assert_eq!(r["decomposition"]["tree"]["kind"], "cosum");
}

#[test]
fn qsym() {
    assert_eq!(result(&["qsym", &g6(&cycle(5))])["has_quantum_symmetry"], false);
    let k4 = result(&["qsym", &g6(&complete(4))]);
    assert_eq!(k4["has_quantum_symmetry"], true);
    assert_eq!(k4["witness"], serde_json::json!(["(2 3)", "(0 1)"]));
    let x6 = result(&["qsym", &g6(&build_x(6).unwrap())]);
    assert_eq!(x6["has_quantum_symmetry"], false);
    assert_eq!(x6["aut_order"], "2");
}

#[test]
fn qaut() {
    let r = result(&["qaut", &g6(&star(3))]);
    assert_eq!(r["expr"], "S+(3)");
    assert_eq!(result(&["qaut", &g6(&complete(1))])["expr"], "1");
    let r = result(&["qaut", &g6(&complete(2).repeat(2))]);
    assert_eq!(r["expr"], "Wr(S+(2),2)");
    assert_eq!(r["classical_order"], "8");
    assert_eq!(r["is_commutative"], false);
}

#[test]
fn qiso() {
    let p5 = g6(&path(5));
    assert_eq!(result(&["qiso", &p5, &p5])["quantum_isomorphic"], true);
    let cherry_plus = disjoint_sum(&[cycle(3), complete(1), complete(1)]);
    assert_eq!(result(&["qiso", &p5, &g6(&cherry_plus)])["quantum_isomorphic"], false);
    // same degree sequence, both trees
    let r = result(&["qiso", &g6(&path(4)), &g6(&star(3))]);
    assert_eq!(r["quantum_isomorphic"], false);
    // fractionally isomorphic cographs that are not isomorphic
    let (a, b) = (complete(2).repeat(3), disjoint_sum(&[cycle(4), complete(2)]));
    let r = result(&["qiso", &g6(&a), &g6(&b)]);
    assert_eq!(r["quantum_isomorphic"], false);
    let (c6, two_k3) = (cycle(6), complete(3).repeat(2));
    let r = result(&["qiso", &g6(&c6), &g6(&two_k3)]);
    assert_eq!(r["quantum_isomorphic"], false);
    assert_eq!(r["reason"], "component counts differ");
    // prism against K_{3,3}: connected, both cubic, the prism outside every
    // supported class
    let k33 = complete(3).repeat(2).complement();
    let out = run(&["qiso", &g6(&c6.complement()), &g6(&k33)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn hom_counts() {
    let r = result(&["hom", &g6(&complete(2)), &g6(&complete(3))]);
    assert_eq!(r, serde_json::json!({"hom": 6, "mon": 6, "quo": 0, "aut": 2}));
    let out = run(&["--budget", "10", "hom", &g6(&edgeless(3)), &g6(&complete(3))]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn edge_list_files_and_stdin() {
    let dir = std::env::temp_dir().join(format!("qautgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c4.txt");
    std::fs::write(&path, "# a square\n4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
    let r = result(&["qaut", path.to_str().unwrap()]);
    assert_eq!(r["classical_order"], "8");
    std::fs::remove_dir_all(&dir).unwrap();

    let mut child = Command::new(env!("CARGO_BIN_EXE_qautgraph"))
        .args(["qaut", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(b"C~\n").unwrap();
    let out = child.wait_with_output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["expr"], "S+(4)");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["qaut", "not graph6"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(2));
    // a hexagon is connected, co-connected and too large for the small base
    assert_eq!(run(&["qaut", &g6(&cycle(6))]).status.code(), Some(3));
    assert_eq!(run(&["--max-n", "4", "qsym", &g6(&cycle(6))]).status.code(), Some(3));
}

#[test]
fn deterministic_output() {
    for args in [
        vec!["recognize", "Ch"],
        vec!["--seed", "3", "verify", "components"],
    ] {
        let (a, b) = (run(&args), run(&args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
        assert!(!String::from_utf8_lossy(&a.stdout).contains("elapsed_ms"));
    }
    let timed = run(&["--timing", "qaut", "Ch"]);
    assert!(String::from_utf8_lossy(&timed.stdout).contains("elapsed_ms"));
}

#[test]
fn verify_suites() {
    for suite in ["cograph-classification", "lovasz", "magic"] {
        let r = result(&["verify", suite]);
        assert_eq!(r["passed"], true, "{suite}");
    }
}
