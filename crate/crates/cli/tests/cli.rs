use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const FENCE: &str = "# fence 1<2>0<3\n4\n1010\n0111\n0010\n0001\n";

fn qolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qolab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fence_analyses() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "fence.qo", FENCE);
    let cases: [(&[&str], &str); 7] = [
        (&["width"], "width=2 antichain=[0,1]\n"),
        (&["dichotomy", "-k", "1"], "antichain of size 2: [0,1]\n"),
        (&["dichotomy", "-k", "2"], "cover with 2 chains: [0,2] [1,3]\n"),
        (&["chains"], "chains=2 [0,2] [1,3]\n"),
        (
            &["auxgraph"],
            "chi=2 base=[0-1 0-3 2-3] aux=[0-1 0-3 1-2 2-3] added=[1-2]\n",
        ),
        (&["witness", "--pair", "1,2"], "witness=[0,1,2,3]\n"),
        (&["check"], "quasi-order: ok\n"),
    ];
    for (args, expected) in cases {
        let mut full = vec![args[0], s(&f)];
        full.extend(&args[1..]);
        let out = qolab(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&out), expected, "{args:?}");
    }
}

#[test]
fn graph_files_and_validation() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "p4.gr", "4\n0101\n1000\n0001\n1010\n");
    assert_eq!(
        stdout(&qolab(&["auxgraph", s(&path)])),
        "chi=2 base=[0-1 0-3 2-3] aux=[0-1 0-3 1-2 2-3] added=[1-2]\n"
    );

    let loop_graph = write(&dir, "bad.gr", "2\n11\n10\n");
    let out = qolab(&["check", s(&loop_graph)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("graph: invalid"));

    let not_transitive = write(&dir, "bad.qo", "3\n110\n011\n001\n");
    let out = qolab(&["check", s(&not_transitive)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("quasi-order: invalid"));
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let ragged = write(&dir, "ragged.qo", "2\n10\n1\n");
    let out = qolab(&["width", s(&ragged)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(qolab(&["width", "/nonexistent/x.qo"]).status.code(), Some(2));
    assert_eq!(qolab(&["width", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(qolab(&["frobnicate"]).status.code(), Some(2));

    let f = write(&dir, "fence.qo", FENCE);
    assert_eq!(qolab(&["witness", s(&f), "--pair", "1,3"]).status.code(), Some(2));
    assert_eq!(qolab(&["dichotomy", s(&f), "-k", "0"]).status.code(), Some(2));
    assert_eq!(qolab(&["width", s(&f), "--budget", "0"]).status.code(), Some(0));
    assert_eq!(qolab(&["auxgraph", s(&f), "--budget", "1"]).status.code(), Some(2));
}

#[test]
fn json_report_records_inputs() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "fence.qo", FENCE);
    let report = dir.path().join("r.json");
    let out = qolab(&["paperchains", s(&f), "--json", s(&report)]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["command"], "paperchains");
    assert_eq!(v["results"]["chains"], serde_json::json!([[0, 2], [1, 3]]));
    assert_eq!(v["results"]["layers"], serde_json::json!([[0, 2]]));
    let digest = v["inputs"][s(&f)].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert_eq!(v["seed"], 0);
}

#[test]
fn generator_output_reads_back() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("g.qo");
    assert_eq!(
        qolab(&["gen", "-n", "6", "--seed", "42", "-o", s(&path)]).status.code(),
        Some(0)
    );
    assert_eq!(qolab(&["check", s(&path)]).status.code(), Some(0));
    let again = qolab(&["gen", "-n", "6", "--seed", "42"]);
    assert_eq!(stdout(&again), std::fs::read_to_string(&path).unwrap());

    let gpath = dir.path().join("g.gr");
    assert_eq!(
        qolab(&["gen", "-n", "7", "--graph", "-o", s(&gpath)]).status.code(),
        Some(0)
    );
    assert_eq!(stdout(&qolab(&["check", s(&gpath)])), "graph: ok\n");
}

#[test]
fn trees_codes_and_levels() {
    let dir = TempDir::new().unwrap();
    let tree = write(&dir, "t.tree", "-\n0\n1\n0,0\n");
    assert_eq!(
        stdout(&qolab(&["tree", s(&tree)])),
        "rho=3 well_founded=true nodes=4\n- 2\n0 1\n0,0 0\n1 0\n"
    );

    let code = write(
        &dir,
        "c.json",
        r#"{"alpha":2,"tree":["-"],"leaves":{"0":[0,1],"1":[1,2],"2":[0],"3":[]},"m":3}"#,
    );
    assert_eq!(stdout(&qolab(&["borel-eval", s(&code)])), "[1]\n");
    assert_eq!(stdout(&qolab(&["borel-eval", s(&code), "--dual"])), "[0,2]\n");
    let missing = write(&dir, "m.json", r#"{"alpha":2,"tree":["-"],"leaves":{"0":[0]},"m":3}"#);
    assert_eq!(qolab(&["borel-eval", s(&missing)]).status.code(), Some(2));

    let out = qolab(&["g0", "4"]);
    assert_eq!(
        stdout(&out),
        "level=4 vertices=16 edges=15 connected=true bipartite=true dense=true homomorphism=found\n"
    );
    let k3 = write(&dir, "k1.gr", "1\n0\n");
    let out = qolab(&["g0", "2", "--target", s(&k3)]);
    assert!(stdout(&out).ends_with("homomorphism=none\n"));
}

#[test]
fn exhaustive_prove_passes_and_replays() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("r.json");
    let out = qolab(&["prove", "--all", "--n-max", "4", "--exhaustive", "--json", s(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("390 exhaustive"));
    for name in ["union", "clique", "antichain", "transitive", "independence", "maximal"] {
        assert!(
            text.lines().any(|l| l.starts_with(name) && l.contains(" pass ")),
            "{name}"
        );
    }
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["results"]["tallies"]["transitive"]["passed"], 590);

    // A report with no violations replays to nothing; a hand-made bundle replays its check.
    assert_eq!(qolab(&["replay", s(&report)]).status.code(), Some(0));
    let bundle = write(
        &dir,
        "b.json",
        r#"{"check":"paper-cover","corpus":"manual","index":0,
            "instance":{"kind":"quasi_order","rows":["1010","0111","0010","0001"]},
            "seed":0,"samples":8,"detail":""}"#,
    );
    let out = qolab(&["replay", s(&bundle)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "paper-cover #0 (manual): passes\n");
}
