use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blockmap")).args(args).output().expect("run blockmap")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn params_at_the_critical_weight() {
    let v = json(&["params", "--u", "9/5", "--n", "1000"]);
    assert_eq!(v["y_exact"], serde_json::json!({"num": "4", "den": "27"}));
    assert_eq!(v["mean_exact"], serde_json::json!({"num": "1", "den": "1"}));
    assert_eq!(v["u_exact"]["num"], "9");
    assert!(v["largest_block"].is_object());
    let v = json(&["params", "--u", "1"]);
    assert_eq!(v["mean_exact"], serde_json::json!({"num": "2", "den": "3"}));
    let t = json(&["params", "--table"]);
    assert_eq!(t.as_array().unwrap().len(), 8);
}

#[test]
fn series_rows() {
    let s = stdout(&["series", "--max-n", "10"]);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("n,b,count"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 66);
    assert_eq!(rows[1], "1,0,0");
    assert_eq!(rows[2], "1,1,2");
    // the law of the root block is normalised
    let v = json(&["series", "--law", "root-block", "--n", "5", "--u", "9/5"]);
    let total: f64 = v["probs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["num"].as_str().unwrap().parse::<f64>().unwrap() / p["den"].as_str().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["sample", "--u", "0", "--n", "10"][..],
        &["sample", "--u", "-1", "--n", "10"],
        &["sample", "--u", "2", "--n", "0"],
        &["sample", "--u", "abc", "--n", "10"],
        &["experiment", "--u", "2"],
        &["frobnicate"],
        &["--threads", "0", "params", "--u", "1"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_1() {
    let o = run(&["sample", "--u", "1", "--n", "2000", "--method", "exact-dp"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let o = run(&["--out", "/nonexistent/dir/x", "series"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn help_lists_the_subcommands_and_flags() {
    let h = stdout(&["--help"]);
    for s in ["params", "series", "sample", "blocks", "experiment", "kappa", "verify", "--seed", "--threads", "--out"] {
        assert!(h.contains(s), "{s} missing from help");
    }
    let h = stdout(&["experiment", "--help"]);
    for s in ["--dyadic", "--replicas", "--objects", "--summary", "--max-rejections"] {
        assert!(h.contains(s), "{s} missing from experiment help");
    }
}

#[test]
fn verify_passes_and_detects_corruption() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["tolerance"].is_string() && c["observed"].is_string());
    }
    let o = run(&["verify", "--corrupt-blocks"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("[FAIL] 1"));
}

#[test]
fn degenerate_sizes_and_weights() {
    for u in ["1", "9/5", "5", "1e12", "1e-6"] {
        let s = stdout(&["sample", "--u", u, "--n", "1", "--kind", "quad"]);
        assert!(s.starts_with("HEMAP"), "u = {u}: {s}");
    }
    // huge u: every block has size one
    let s = stdout(&["sample", "--u", "1e12", "--n", "50", "--info"]);
    assert!(s.starts_with("HEMAP"));
    let o = run(&["sample", "--u", "1e12", "--n", "50", "--info"]);
    let info: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(info["blocks"], 50);
    assert!(stdout(&["blocks", "--k", "1", "--count", "2"]).starts_with("HEMAP"));
    let csv = stdout(&["experiment", "--u", "1e12,1", "--n", "1", "--replicas", "3", "--objects"]);
    assert_eq!(csv.lines().count(), 7);
}
