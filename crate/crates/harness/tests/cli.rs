use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tlr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlr")).args(args).output().expect("spawn tlr")
}

fn ok(args: &[&str]) -> String {
    let out = tlr(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_owned()
}

fn workspace_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

#[test]
fn planted_message_survives_corrupt_and_recover() {
    let dir = tempfile::tempdir().unwrap();
    let (code, word, lists) = (path(dir.path(), "c.json"), path(dir.path(), "w.json"), path(dir.path(), "l.json"));
    ok(&["gen", "rs", "--q", "4", "--n", "4", "--k", "2", "--out", &code]);
    ok(&["encode", "--code", &code, "--msg", "[1,2]", "--out", &word]);
    ok(&["corrupt", "--code", &code, "--word", &word, "--alpha", "0.25", "--ell", "2", "--seed", "7", "--out", &lists]);
    let out: Value = serde_json::from_str(&ok(&["recover", "--code", &code, "--lists", &lists, "--mode", "global"])).unwrap();
    let messages = out["messages"].as_array().unwrap();
    assert!(messages.contains(&serde_json::json!([1, 2])), "{out}");
}

#[test]
fn gen_prints_code_to_stdout() {
    let out: Value = serde_json::from_str(&ok(&["gen", "rs", "--q", "4", "--n", "4", "--k", "2"])).unwrap();
    assert_eq!(out["generator"], serde_json::json!([[1, 0], [1, 1], [1, 2], [1, 3]]));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = tlr(&["gen", "rs", "--q", "4", "--n", "4", "--k", "2", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(tlr(&["--help"]).status.code(), Some(0));
    assert_eq!(tlr(&["--version"]).status.code(), Some(0));
}

#[test]
fn invalid_parameters_exit_two() {
    assert_eq!(tlr(&["gen", "rs", "--q", "6", "--n", "4", "--k", "2"]).status.code(), Some(2));
    assert_eq!(tlr(&["gen", "rs", "--q", "4", "--n", "4", "--k", "5"]).status.code(), Some(2));
    assert_eq!(tlr(&["experiment", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
}

#[test]
fn guard_overflow_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let (code, word, lists) = (path(dir.path(), "c.json"), path(dir.path(), "w.json"), path(dir.path(), "l.json"));
    ok(&["gen", "rs", "--q", "4", "--n", "4", "--k", "2", "--out", &code]);
    ok(&["encode", "--code", &code, "--msg", "[0,3]", "--out", &word]);
    ok(&["corrupt", "--code", &code, "--word", &word, "--alpha", "1/4", "--seed", "1", "--out", &lists]);
    let out = Command::new(env!("CARGO_BIN_EXE_tlr"))
        .args(["recover", "--code", &code, "--lists", &lists, "--mode", "global"])
        .env("TLR_GUARD_MAX", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TLR_GUARD_MAX"));
}

#[test]
fn thommesen_gv_decode_corrects_planted_errors() {
    let dir = tempfile::tempdir().unwrap();
    let (outer, cc, word) = (path(dir.path(), "o.json"), path(dir.path(), "cc.json"), path(dir.path(), "w.json"));
    ok(&["gen", "rs", "--q", "4", "--n", "4", "--k", "2", "--out", &outer]);
    ok(&["gen", "thommesen", "--code", &outer, "--rho-in", "1/2", "--seed", "3", "--out", &cc]);
    ok(&["encode", "--code", &cc, "--msg", "[3,1]", "--out", &word]);
    let mut bits: Vec<u16> = serde_json::from_str(&std::fs::read_to_string(&word).unwrap()).unwrap();
    let decoded: Value = serde_json::from_str(&ok(&["gv", "decode", "--code", &cc, "--word", &word])).unwrap();
    let d = decoded["d"].as_u64().unwrap() as usize;
    for b in bits.iter_mut().take((d.saturating_sub(1)) / 2) {
        *b ^= 1;
    }
    std::fs::write(&word, serde_json::to_string(&bits).unwrap()).unwrap();
    let decoded: Value = serde_json::from_str(&ok(&["gv", "decode", "--code", &cc, "--word", &word])).unwrap();
    assert_eq!(decoded["message"], serde_json::json!([3, 1]), "{decoded}");
}

#[test]
fn feasibility_reports_both_sides() {
    let out: Value = serde_json::from_str(&ok(&["gv", "feasibility", "--rho", "0.01", "--eps", "0.001", "--c", "1"])).unwrap();
    assert!(out["lhs"].as_f64().unwrap() >= out["rhs"].as_f64().unwrap());
    assert_eq!(out["feasible"], Value::Bool(true));
}

#[test]
fn tensor_allr_recovers_a_noiseless_word() {
    let dir = tempfile::tempdir().unwrap();
    let (base, tensor) = (path(dir.path(), "b.json"), path(dir.path(), "t.json"));
    let (word, lists) = (path(dir.path(), "w.json"), path(dir.path(), "l.json"));
    ok(&["gen", "rs", "--q", "4", "--n", "4", "--k", "2", "--out", &base]);
    ok(&["gen", "tensor", "--code", &base, "--t", "2", "--out", &tensor]);
    ok(&["encode", "--code", &tensor, "--msg", "[1,2,3,0]", "--out", &word]);
    ok(&["corrupt", "--code", &tensor, "--word", &word, "--alpha", "0", "--ell", "2", "--seed", "5", "--out", &lists]);
    let out: Value = serde_json::from_str(&ok(&["recover", "--code", &base, "--lists", &lists, "--mode", "allr", "--seed", "9"])).unwrap();
    let planted: Value = serde_json::from_str(&std::fs::read_to_string(&word).unwrap()).unwrap();
    assert!(out["words"].as_array().unwrap().contains(&planted));
}

#[test]
fn experiment_then_report_csv() {
    let dir = tempfile::tempdir().unwrap();
    let report = path(dir.path(), "r.json");
    let cfg = workspace_file("configs/golden_small.json");
    ok(&["experiment", "--config", cfg.to_str().unwrap(), "--out", &report]);
    assert!(dir.path().join("r.csv").exists());
    let csv = ok(&["report", &report, "--csv"]);
    assert!(csv.starts_with("trial,seed,success,"));
    assert_eq!(csv.lines().count(), 4);
    let agg: Value = serde_json::from_str(&ok(&["report", &report])).unwrap();
    assert_eq!(agg["trials"], 3);
}
