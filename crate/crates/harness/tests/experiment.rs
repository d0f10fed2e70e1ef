use std::path::{Path, PathBuf};

use serde_json::Value;
use tlr_harness::{run_experiment, ExperimentConfig, ExperimentReport};

const ACCEPT_SUCCESS_RATE: f64 = 0.9;

fn workspace_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn assert_report_shape(v: &Value) {
    let obj = v.as_object().expect("report is an object");
    for key in ["schema_version", "pipeline", "config", "setup", "records", "aggregates"] {
        assert!(obj.contains_key(key), "missing {key}");
    }
    assert_eq!(v["schema_version"], 1);
    let agg = v["aggregates"].as_object().unwrap();
    for key in ["trials", "successes", "success_rate", "max_queries", "counters_agree"] {
        assert!(agg.contains_key(key), "missing aggregates.{key}");
    }
    for r in v["records"].as_array().unwrap() {
        assert!(r["trial"].is_u64() && r["seed"].is_u64() && r["success"].is_boolean());
        assert!(r["wall_ms"].is_number());
    }
    assert_eq!(v["records"].as_array().unwrap().len() as u64, agg["trials"].as_u64().unwrap());
}

#[test]
fn acceptance_config_meets_success_rate() {
    let cfg = ExperimentConfig::load(&workspace_file("configs/accept_allr.json")).unwrap();
    assert_eq!(cfg.trials, 200);
    let report = run_experiment(&cfg).unwrap();
    let json: Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_report_shape(&json);
    let rate = json["aggregates"]["success_rate"].as_f64().unwrap();
    assert!(rate >= ACCEPT_SUCCESS_RATE, "success rate {rate}");
    assert_eq!(json["aggregates"]["counters_agree"], Value::Bool(true));
}

#[test]
fn report_matches_golden_file() {
    let cfg = ExperimentConfig::load(&workspace_file("configs/golden_small.json")).unwrap();
    let got = run_experiment(&cfg).unwrap().without_timings().to_json();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/report_small.json");
    if std::env::var_os("TLR_BLESS").is_some() {
        std::fs::write(&golden, &got).unwrap();
    }
    let want = std::fs::read_to_string(&golden).expect("golden report; regenerate with TLR_BLESS=1");
    assert_eq!(got, want);
}

#[test]
fn saved_report_round_trips_and_recomputes() {
    let cfg = ExperimentConfig::load(&workspace_file("configs/golden_small.json")).unwrap();
    let report = run_experiment(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out/report.json");
    report.save(&path).unwrap();
    let back = ExperimentReport::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, report);
    assert_eq!(tlr_harness::report::Aggregates::from_records(&back.records), back.aggregates);
    assert_eq!(run_experiment(&cfg).unwrap().without_timings(), report.without_timings());
}
