use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_transit-hl"))
}

fn feed() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/riverside")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Builds the sample feed and its labels into a fresh directory.
fn built() -> (tempfile::TempDir, String) {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net").to_str().unwrap().to_string();
    let b = json(&run(&["build", "--data", feed().to_str().unwrap(), "--out", &net]));
    assert_eq!(b["stops"], 26);
    json(&run(&["label", "--data", &net]));
    (dir, net)
}

#[test]
fn query_and_profile_agree_on_first_departure() {
    let (_dir, net) = built();
    let od = ["--source", "S00", "--target", "N06"];
    let mut args = vec!["query", "--data", &net, "--algo", "hlcsa", "--from-time", "8:00"];
    args.extend(od);
    let q = json(&run(&args));
    let arrival = q["outcome"]["Arrival"].as_u64().unwrap();
    args[4] = "hlraptor";
    assert_eq!(json(&run(&args))["outcome"]["Arrival"].as_u64(), Some(arrival));
    args[4] = "oracle";
    assert_eq!(json(&run(&args))["outcome"]["Arrival"].as_u64(), Some(arrival));

    for algo in ["hlprraptor", "hlprcsa"] {
        let mut args = vec!["profile", "--data", &net, "--algo", algo, "--from-time", "28800", "--to-time", "30600"];
        args.extend(od);
        let p = json(&run(&args));
        let entries = p["outcome"]["Profile"]["entries"].as_array().unwrap();
        assert!(!entries.is_empty());
        assert_eq!(entries[0]["dep"], 28800);
        assert_eq!(entries[0]["arr"].as_u64(), Some(arrival));
    }
}

#[test]
fn gen_bench_and_gain() {
    let (dir, net) = built();
    let q = dir.path().join("q.tsv");
    let q = q.to_str().unwrap();
    assert_eq!(json(&run(&["gen", "--data", &net, "--count", "50", "--seed", "9", "--out", q]))["queries"], 50);
    let rows = dir.path().join("bench.tsv");
    let args = ["bench", "--data", &net, "--algo", "hlraptor", "--queries", q, "--verify", "--repetitions", "2"];
    let mut args = args.to_vec();
    args.extend(["--out", rows.to_str().unwrap()]);
    let s = json(&run(&args));
    assert_eq!(s["oracle_mismatches"], 0);
    assert_eq!(s["deterministic"], true);
    assert_eq!(std::fs::read_to_string(&rows).unwrap().lines().count(), 51);

    let g = json(&run(&["gain", "--data", &net, "--queries", q]));
    assert!(g["average_gain"].as_f64().unwrap() > 0.0);
    let rank = dir.path().join("r.tsv");
    json(&run(&["gen", "--data", &net, "--kind", "rank", "--count", "3", "--out", rank.to_str().unwrap()]));
}

#[test]
fn input_errors_exit_with_two() {
    let (dir, net) = built();
    let missing = dir.path().join("missing");
    let cases: Vec<Vec<&str>> = vec![
        vec!["query", "--data", &net, "--source", "nope", "--target", "S00", "--from-time", "0"],
        vec!["query", "--data", missing.to_str().unwrap(), "--source", "S00", "--target", "S01", "--from-time", "0"],
        vec!["query", "--data", &net, "--algo", "dijkstra", "--source", "S00", "--target", "S01", "--from-time", "0"],
        vec!["query", "--data", &net, "--source", "S00", "--target", "S01", "--from-time", "7:61"],
        vec!["profile", "--data", &net, "--algo", "raptor", "--source", "S00", "--target", "S01", "--from-time", "0", "--to-time", "9"],
        vec!["build", "--data", missing.to_str().unwrap(), "--out", missing.to_str().unwrap()],
        vec!["nonsense"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    // hub-labeled algorithms need labels
    let bare = dir.path().join("bare");
    json(&run(&["build", "--data", feed().to_str().unwrap(), "--out", bare.to_str().unwrap()]));
    let out = run(&["query", "--data", bare.to_str().unwrap(), "--source", "S00", "--target", "S01", "--from-time", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hub labeling"));
}
