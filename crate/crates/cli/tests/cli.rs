use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rangewalk"));
    c.env_remove("RANGEWALK_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    for sub in ["simulate", "enumerate", "identity", "estimate", "ld-curve", "scaling-2d", "validate-support"] {
        assert!(text.contains(sub), "missing {sub}");
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--bogus-flag"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn budget_refusal_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["enumerate", "--d", "2", "--n", "14", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn simulate_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let base = ["simulate", "--d", "2", "--preset", "simple", "--n", "1000", "--reps", "10", "--seed", "7", "--out", out];
    let a = run(&[&base[..], &["--stamp", "a", "--workers", "1"]].concat());
    let b = run(&[&base[..], &["--stamp", "b", "--workers", "3"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(read(dir.path(), "simulate-a.csv"), read(dir.path(), "simulate-b.csv"));
}

#[test]
fn manifest_round_trip() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let o = run(&[
        "estimate", "q", "--d", "3", "--k", "10,100", "--reps", "300", "--seed", "5", "--stamp", "s",
        "--out", first.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = first.path().join("manifest.json");
    let o = run(&["--from-manifest", manifest.to_str().unwrap(), "--out", second.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(first.path(), "estimate-s.csv"), read(second.path(), "estimate-s.csv"));
    let m1: serde_json::Value = serde_json::from_slice(&read(first.path(), "manifest.json")).unwrap();
    let m2: serde_json::Value = serde_json::from_slice(&read(second.path(), "manifest.json")).unwrap();
    assert_eq!(m1["config_hash"], m2["config_hash"]);
    assert_eq!(m1["config"]["seed"], 5);
}

#[test]
fn identity_checks_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    for args in [
        vec!["identity", "last-exit", "--n", "4"],
        vec!["identity", "last-exit", "--n", "20", "--float"],
        vec!["identity", "note2", "--d", "1", "--n-max", "6", "--v-max", "2"],
        vec!["identity", "event", "--d", "2", "--k", "4"],
        vec!["identity", "avoidance", "--n", "40"],
        vec!["validate-support", "--d", "3"],
    ] {
        let o = run(&[&args[..], &["--out", out]].concat());
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn rate_curve_encodes_infinity() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "ld-curve", "--d", "2", "--n", "6", "--x", "0,0.5,1.5", "--reps", "200", "--stamp", "r",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(read(dir.path(), "ld-curve-r.csv")).unwrap();
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("psi_mc,2,6,200,inf,"), "{last}");
    assert!(last.contains(r#"""infinite"":true"#));
}

#[test]
fn dist_file_is_loaded() {
    let dir = tempfile::tempdir().unwrap();
    let law = dir.path().join("law.txt");
    std::fs::write(&law, "# lazy diagonal\n1 1 1/2\n1 -1 1/2\n").unwrap();
    let o = run(&["validate-support", "--dist-file", law.to_str().unwrap(), "--stamp", "v", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(read(dir.path(), "validate-support-v.csv")).unwrap();
    assert!(text.contains("validate_support,2,2,0,0.0,"));
}
