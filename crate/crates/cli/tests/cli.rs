use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_annulus-lerw")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap().trim_end().to_string()
}

fn graph_file(name: &str, body: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("annulus-lerw-{}-{}.json", std::process::id(), name));
    std::fs::write(&p, body).unwrap();
    p
}

const RING: &str = r#"{"vertices":["a1","a2","a3","b1","b2","b3","inf"],
 "edges":[{"u":"a1","v":"a2","c":"1"},{"u":"a2","v":"a3","c":"2"},{"u":"a3","v":"a1","c":"1","zip":1},
          {"u":"b1","v":"b2","c":"1/2"},{"u":"b2","v":"b3","c":"1"},{"u":"b3","v":"b1","c":"1","zip":1},
          {"u":"a1","v":"b1","c":"1"},{"u":"a2","v":"b2","c":"3"},{"u":"a3","v":"b3","c":"1"},
          {"u":"b1","v":"inf","c":"1"},{"u":"b2","v":"inf","c":"1"},{"u":"b3","v":"inf","c":"2"}],
 "boundary":"inf","nodes":["a1","a2","a3","inf"]}"#;

#[test]
fn potential_values() {
    assert_eq!(stdout(&["potential", "--lattice", "square", "--point", "1,1"]), "1/pi");
    assert_eq!(stdout(&["potential", "--lattice", "square", "--point", "0,0"]), "0");
    let j: Value = serde_json::from_str(&stdout(&["potential", "--lattice", "triangular", "--point", "1,0", "--json"])).unwrap();
    assert_eq!(j["pretty"], "1/6");
    assert_eq!(j["generator"], "1");
}

#[test]
fn intensity_values() {
    assert_eq!(stdout(&["intensity", "--lattice", "square", "--vertex", "1,0"]), "5/16");
    assert_eq!(stdout(&["intensity", "--lattice", "square", "--edge", "0,0->1,0"]), "1/4");
    assert_eq!(stdout(&["intensity", "--lattice", "hexagonal", "--vertex", "1,0"]), "13/36");
    assert_eq!(stdout(&["intensity", "--lattice", "square", "--edge", "-1,0->-2,0"]), "7/16 - 1/pi");
    let out = stdout(&["intensity", "--lattice", "square", "--edge", "2,0->1,0", "--cuts", "1,0-1,1", "--nodes", "1,0;2,0;1,1;0,0", "--json"]);
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["generator"], "1/pi");
    assert_eq!(j["coeffs"], serde_json::json!([["0", "-5/16"], ["1", "1"]]));
    assert_eq!(j["pretty"], "-5/16 + 1/pi");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["potential", "--lattice", "cubic", "--point", "1,0"]).status.code(), Some(2));
    assert_eq!(run(&["intensity", "--lattice", "square"]).status.code(), Some(2));
    assert_eq!(run(&["intensity", "--lattice", "square", "--vertex", "1,2,3"]).status.code(), Some(2));
    let bad = run(&["intensity", "--lattice", "square", "--edge", "2,0->1,0", "--cuts", ""]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("invalid cut set"));
    let order = run(&["intensity", "--lattice", "square", "--edge", "2,0->1,0", "--cuts", "1,0-1,1", "--nodes", "0,0;1,0;2,0;1,1"]);
    assert_eq!(order.status.code(), Some(3));
    assert_eq!(run(&["annular", "--n", "12"]).status.code(), Some(3));
    assert_eq!(run(&["annular", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn annular_output() {
    let a4 = stdout(&["annular", "--n", "4"]);
    assert!(a4.contains("-zeta"), "{}", a4);
    let inv = stdout(&["annular", "--n", "4", "--inverse"]);
    assert!(inv.contains("-1 + zeta"), "{}", inv);
    let j: Value = serde_json::from_str(&stdout(&["annular", "--n", "6", "--json"])).unwrap();
    assert_eq!(j["entries"].as_array().unwrap().len(), 10);
    let check = stdout(&["annular", "--n", "8", "--check"]);
    assert!(check.contains("deg det A_8 = 29 = 2^6 - 35: ok"), "{}", check);
    assert!(check.contains("det(0) = 1,"));
    assert!(!check.contains("FAILED"));
}

#[test]
fn grove_counts() {
    let two = graph_file("two", r#"{"vertices":[1,2],"edges":[{"u":1,"v":2,"c":"1"}],"nodes":[1,2],"boundary":2}"#);
    let j: Value = serde_json::from_str(&stdout(&["grove", "--graph", two.to_str().unwrap(), "--type", "1,2"])).unwrap();
    assert_eq!(j["enumeration"]["pretty"], "1");
    let ring = graph_file("ring", RING);
    let path = ring.to_str().unwrap();
    for sigma in ["2,3|1,4", "1,2|3,4", "1,4|2|3", "1,2,3,4"] {
        let j: Value = serde_json::from_str(&stdout(&["grove", "--graph", path, "--type", sigma])).unwrap();
        assert_eq!(j["pipeline"]["agrees"], true, "{}: {}", sigma, j);
        assert_eq!(j["pipeline"]["per_tree"], j["enumeration"]["per_tree"]);
    }
    // an unpaired interior leaves room for cycles around the hole
    let j: Value = serde_json::from_str(&stdout(&["grove", "--graph", path, "--type", "1|4"])).unwrap();
    let exps: Vec<&str> = j["enumeration"]["laurent"].as_array().unwrap().iter().map(|t| t[0].as_str().unwrap()).collect();
    assert_eq!(exps, ["-1", "0", "1"]);
    let broken = graph_file("broken", r#"{"vertices":["a"],"edges":[{"u":"a","v":"b"}]}"#);
    assert_eq!(run(&["grove", "--graph", broken.to_str().unwrap(), "--type", "1"]).status.code(), Some(2));
    for p in [two, ring, broken] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn sample_tables() {
    let empty = stdout(&["sample", "--lattice", "square", "--side", "40", "--samples", "0"]);
    assert_eq!(empty.lines().count(), 2, "{}", empty);
    let args = ["sample", "--lattice", "square", "--side", "30", "--samples", "2000", "--seed", "5", "--json"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let j: Value = serde_json::from_str(&a).unwrap();
    let rows = j["rows"].as_array().unwrap();
    assert_eq!(rows[0]["name"], "vertex (1, 0)");
    assert_eq!(rows[0]["exact"]["pretty"], "5/16");
}
