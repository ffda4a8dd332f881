use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dkforge::chain::{ChainComplex, ChainMap};
use dkforge::io;
use dkforge::simplicial::standard_simplex;
use serde_json::Value;

fn dkforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dkforge"))
        .args(args)
        .env_remove("DKFORGE_MAX_RANK")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, io::canonical(v)).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    io::parse_value(&stdout(out)).unwrap()
}

#[test]
fn homology_of_a_shifted_integer() {
    let dir = tempfile::tempdir().unwrap();
    let z1 = write(dir.path(), "z1.json", &io::complex_value(&ChainComplex::sphere(1, 2)));
    let out = dkforge(&["homology", "--in", z1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "H_0 = 0\nH_1 = Z\n");
}

#[test]
fn normalizing_the_one_simplex() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = write(dir.path(), "d1.json", &io::simplicial_value(&standard_simplex(1, 1)));
    let v = json(&dkforge(&["normalize", "--in", d1.to_str().unwrap()]));
    let c = io::complex_from(&v).unwrap();
    assert_eq!(c.ranks(), &[2, 1]);
    // d[ι] = [1] - [0]
    assert_eq!(c.d(1).column(0), vec![(-1).into(), 1.into()]);
}

#[test]
fn gamma_ranks_follow_the_binomial_count() {
    let dir = tempfile::tempdir().unwrap();
    let z1 = write(dir.path(), "z1.json", &io::complex_value(&ChainComplex::sphere(1, 5)));
    let v = json(&dkforge(&["gamma", "--in", z1.to_str().unwrap(), "--truncation", "3"]));
    assert_eq!(io::simplicial_from(&v).unwrap().ranks(), &[0, 1, 2, 3]);
    let too_far = dkforge(&["gamma", "--in", z1.to_str().unwrap(), "--truncation", "6"]);
    assert_eq!(too_far.status.code(), Some(2));
}

#[test]
fn shuffle_then_aw_is_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", &io::simplicial_value(&standard_simplex(1, 3)));
    let b = write(dir.path(), "b.json", &io::simplicial_value(&standard_simplex(2, 3)));
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let sh = io::chain_map_from(&json(&dkforge(&["shuffle", "--in", a, b]))).unwrap();
    let aw = io::chain_map_from(&json(&dkforge(&["aw", "--in", a, "--in", b]))).unwrap();
    assert!(aw.compose(&sh).same_components(&ChainMap::identity(sh.source())));
}

#[test]
fn tensor_and_graph_tensor() {
    let dir = tempfile::tempdir().unwrap();
    let x = ChainComplex::sphere(1, 3);
    let y = ChainComplex::concentrated(&[1, 2, 0, 1]);
    let px = write(dir.path(), "x.json", &io::complex_value(&x));
    let py = write(dir.path(), "y.json", &io::complex_value(&y));
    let v = json(&dkforge(&["tensor", "--in", px.to_str().unwrap(), py.to_str().unwrap()]));
    assert_eq!(io::complex_from(&v).unwrap(), dkforge::chain::tensor(&x, &y).0);

    let g = dkforge::enriched::IGraph::from_fn(vec!["a".into(), "b".into()], |i, j| {
        if i == j { x.clone() } else { y.clone() }
    })
    .unwrap();
    let pg = write(dir.path(), "g.json", &io::graph_value(&g));
    let v = json(&dkforge(&["graph-tensor", "--in", pg.to_str().unwrap(), pg.to_str().unwrap()]));
    assert_eq!(io::graph_from(&v).unwrap(), dkforge::enriched::graph_tensor(&g, &g).unwrap());
}

#[test]
fn rings_go_both_ways() {
    let dir = tempfile::tempdir().unwrap();
    let r = dkforge::algebra::DGAlgebra::square_zero(&ChainComplex::sphere(1, 2));
    let pr = write(dir.path(), "r.json", &io::dga_value(&r));
    let ring = json(&dkforge(&["gamma-ring", "--in", pr.to_str().unwrap()]));
    let pa = write(dir.path(), "ring.json", &ring);
    let back = io::dga_from(&json(&dkforge(&["normalize-ring", "--in", pa.to_str().unwrap()]))).unwrap();
    assert_eq!(back.complex().ranks(), r.complex().ranks());
}

#[test]
fn invalid_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"ranks":[1,1,1],"diffs":[[[1]],[[1]]],"truncation":2}"#).unwrap();
    let out = dkforge(&["homology", "--in", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree 1"));
    assert_eq!(dkforge(&["homology"]).status.code(), Some(2));
    assert_eq!(dkforge(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_two() {
    let out = dkforge(&["check", "--suite", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(dkforge(&["check"]).status.code(), Some(2));
}

#[test]
fn suite_reports_are_reproducible() {
    let args = ["check", "--suite", "linalg", "--seed", "9"];
    let (a, b) = (dkforge(&args), dkforge(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert_eq!(report["rng"], "ChaCha8");
    assert_eq!(report["seed"], 9);
    assert!(report["checks"][0].get("seconds").is_none());
    let timed = json(&dkforge(&["check", "--suite", "linalg", "--timings"]));
    assert!(timed["checks"][0].get("seconds").is_some());
}

#[test]
fn max_rank_is_capped_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_dkforge"))
        .args(["check", "--suite", "doldkan-iso", "--cases", "3", "--truncation", "2"])
        .env("DKFORGE_MAX_RANK", "1")
        .output()
        .unwrap();
    let report = json(&out);
    assert_eq!(report["bounds"]["max_rank"], 1);
    assert_eq!(report["status"], "pass");
    let bad = Command::new(env!("CARGO_BIN_EXE_dkforge"))
        .args(["check", "--suite", "linalg"])
        .env("DKFORGE_MAX_RANK", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
