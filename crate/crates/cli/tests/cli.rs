//! End-to-end runs of the binary: formats, exit codes, determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn lacuna(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lacuna"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lacuna-test-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn classify_verdicts_and_exit_codes() {
    let out = lacuna(&["classify", "--f", "x^2-x-1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("Atoral"));

    let out = lacuna(&["classify", "--f", "x^4-x^3-x^2-x+1"]);
    assert!(stdout(&out).contains("Toral"));

    // malformed expression: usage/input error
    let out = lacuna(&["classify", "--f", "x +"]);
    assert_eq!(out.status.code(), Some(2));

    // two-variable input cannot be classified exactly
    let out = lacuna(&["classify", "--f", "1+x+y"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gapconst_matches_closed_form() {
    let out = lacuna(&["gapconst", "--f", "x-2", "--H", "1"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["R"], 3);
    assert_eq!(v["M"], 9);

    let out = lacuna(&["gapconst", "--f", "x-2", "--H", "8"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["R"], 6);
    assert_eq!(v["M"], 18);
}

#[test]
fn polynomial_json_files_are_accepted() {
    let dir = scratch_dir("polyjson");
    let path = dir.join("f.json");
    let inline = lacuna(&["classify", "--f", "5x^2-6x+5"]);

    // emitted polynomial JSON re-parses as an input file
    let poly_json = r#"{"d":1,"terms":[{"exp":[0],"coef":"5"},{"exp":[1],"coef":"-6"},{"exp":[2],"coef":"5"}]}"#;
    fs::write(&path, poly_json).unwrap();
    let from_file = lacuna(&["classify", "--f", path.to_str().unwrap()]);
    assert!(from_file.status.success());
    assert_eq!(stdout(&inline), stdout(&from_file));

    fs::write(&path, "{ not json").unwrap();
    let bad = lacuna(&["classify", "--f", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn uv_sample_emits_csv() {
    let out = lacuna(&[
        "uv-sample", "--f", "1+x+y", "--grid", "64", "--cluster", "0.001",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t1,t2,absf"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row.split(',').count(), 3);
    }
}

#[test]
fn qinv_writes_reloadable_json() {
    let dir = scratch_dir("qinv");
    let path = dir.join("q.json");
    let out = lacuna(&[
        "qinv", "--f", "x-2", "--radius", "3", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let tail: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((tail["tail_mass"].as_f64().unwrap() - 0.125).abs() < 1e-6);
    let q: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(q["experimental"], false);
}

#[test]
fn split_and_trace_pipeline() {
    let out = lacuna(&[
        "split", "--f", "x-2", "--r", "(x-2) + x^20*(x-2)", "--H", "2",
    ]);
    assert!(out.status.success());
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["anomalies"].as_array().unwrap().len(), 0);
    assert_eq!(cert["clusters"].as_array().unwrap().len(), 2);

    let out = lacuna(&[
        "trace", "--f", "x-2", "--p", "x-2", "--q", "x^20*(x-2)", "--H", "2",
    ]);
    assert!(out.status.success());
    let trace: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(trace["keystone_exact"], true);

    // r not a multiple of f: input error, not an anomaly
    let out = lacuna(&["split", "--f", "x-2", "--r", "x-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn lacunary_commands() {
    let out = lacuna(&[
        "lacunary", "verify", "--f", "3+x+y", "--member", "1", "--member", "x",
        "--points", "0,0;10,0", "--spacing", "10",
    ]);
    assert!(out.status.success());
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rep["violations"].as_array().unwrap().len(), 0);

    let out = lacuna(&["lacunary", "frobenius", "--n", "3"]);
    assert!(out.status.success());
    let ws: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(ws.as_array().unwrap().len(), 3);

    let a = lacuna(&[
        "lacunary", "msearch", "--f", "x-2", "--member", "1", "--member", "x",
        "--m-max", "4", "--trials", "4", "--seed", "11",
    ]);
    let b = lacuna(&[
        "lacunary", "msearch", "--f", "x-2", "--member", "1", "--member", "x",
        "--m-max", "4", "--trials", "4", "--seed", "11",
    ]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn demo_writes_manifest() {
    let dir = scratch_dir("demo");
    let out_dir = dir.join("frob");
    let out = lacuna(&["demo", "frobenius", "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["demo"], "frobenius");
    for artifact in manifest["artifacts"].as_array().unwrap() {
        assert!(out_dir.join(artifact.as_str().unwrap()).exists());
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["classify", "--f", "x^2-x-1"],
        vec!["qinv", "--f", "x-2"],
        vec!["uv-sample", "--f", "1+x+y", "--grid", "32", "--cluster", "0.001"],
    ] {
        let a = lacuna(&args);
        let b = lacuna(&args);
        assert_eq!(stdout(&a), stdout(&b), "args {args:?}");
    }
}
