use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idealstat")).env_remove("IDEALSTAT_HORIZON").args(args).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn density_of_evens_is_closed_form() {
    let o = run(&["density", "--set", r#"{"kind":"residue","mod":2,"res":0}"#]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["certificate"]["kind"], "closed-form");
    assert_eq!(v["value"]["num"], "1");
    assert_eq!(v["value"]["den"], "2");
}

#[test]
fn verdict_exit_codes() {
    assert_eq!(run(&["member", "--ideal", "summable", "--set", "factorial"]).status.code(), Some(1));
    assert_eq!(run(&["member", "--ideal", "zeta", "--set", "squares"]).status.code(), Some(0));
    assert_eq!(
        run(&["member", "--ideal", "fin", "--set", r#"{"kind":"finite","elems":[3,7]}"#]).status.code(),
        Some(0)
    );
}

#[test]
fn convergence_exit_codes() {
    let diverges = run(&["converge", "--mode", "istat", "--seq", "indicator:factorial", "--limit", "1"]);
    assert_eq!(diverges.status.code(), Some(1));
    let converges = run(&["converge", "--mode", "istat", "--seq", "inv-log", "--limit", "0"]);
    assert_eq!(converges.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["density", "--set", "{bad"][..],
        &["density", "--set", r#"{"kind":"residue","mod":2,"res":5}"#],
        &["member", "--ideal", "nonsense", "--set", "evens"],
        &["--horizon", "10", "density", "--set", "evens"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(64), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn horizon_sources_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "horizon = 5000\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let h = |o: Output| json(&o)["horizon"].as_u64().unwrap();
    let args = ["converge", "--mode", "istat", "--seq", "inv-log", "--limit", "0"];
    assert_eq!(h(run(&[&["--config", cfg][..], &args].concat())), 5000);
    let env = Command::new(env!("CARGO_BIN_EXE_idealstat"))
        .env("IDEALSTAT_HORIZON", "7000")
        .args([&["--config", cfg][..], &args].concat())
        .output()
        .unwrap();
    assert_eq!(h(env), 7000);
    assert_eq!(h(run(&[&["--config", cfg, "--horizon", "9000"][..], &args].concat())), 9000);
    std::fs::write(dir.path().join("bad.toml"), "horizon = \"many\"\n").unwrap();
    let bad = run(&["--config", dir.path().join("bad.toml").to_str().unwrap(), "density", "--set", "evens"]);
    assert_eq!(bad.status.code(), Some(64));
}

#[test]
fn corpus_generate_save_load() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let (a_s, b_s) = (a.to_str().unwrap(), b.to_str().unwrap());
    assert_eq!(run(&["corpus", "generate", "--seed", "7", "--out", a_s]).status.code(), Some(0));
    assert_eq!(run(&["corpus", "save", a_s, "--out", b_s]).status.code(), Some(0));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(run(&["corpus", "load", b_s]).status.code(), Some(0));
    std::fs::write(&b, "{\"schema\": \"idealstat-corpus/0\", \"seed\": 1, \"entries\": []}").unwrap();
    assert_eq!(run(&["corpus", "load", b_s]).status.code(), Some(64));
}

#[test]
fn figure_csv() {
    let o = run(&["tauberian", "figure1", "--u", "2", "--eps", "1/2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("n,mean,mean_decimal\n"));
    assert!(text.lines().count() > 100);
}
