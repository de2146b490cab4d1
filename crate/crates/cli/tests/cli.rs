use std::path::PathBuf;
use std::process::Command as Process;

use cuspcenter_cli::cache::{load_or_enumerate, ClassCache};
use cuspcenter_cli::{run, Command, RunConfig, Status};
use cuspcenter_core::classes::{enumerate_classes, DEFAULT_ENUMERATION_BOUND};
use serde_json::Value;
use sha2::{Digest, Sha256};

const GOLDEN_SETS: [(&str, u64, u64, u64, u64); 6] = [
    ("p1", 2, 3, 2, 1),
    ("p2", 2, 7, 3, 1),
    ("p3", 8, 3, 2, 1),
    ("p4", 4, 5, 2, 1),
    ("p5", 3, 5, 4, 1),
    ("p4-unreduced", 2, 5, 4, 2),
];

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

fn endo(q: u64, ell: u64, n: u64, d: u64) -> RunConfig {
    RunConfig::new(Command::EndoRing, q, Some(ell), Some(n), d)
}

fn sha(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_cuspcenter"))
}

fn exit_code(args: &[&str]) -> (i32, Value) {
    let out = bin().args(args).env_remove("CUSPCENTER_CACHE").output().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json)
}

#[test]
fn golden_reports() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, q, ell, n, d) in GOLDEN_SETS {
        let json = run(&endo(q, ell, n, d)).to_json();
        let path = golden_path(name);
        if update {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &json).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(json, expected, "{name} differs from its golden file");
    }
}

#[test]
fn golden_reports_pass() {
    for (name, ..) in GOLDEN_SETS {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(golden_path(name)).unwrap()).unwrap();
        assert_eq!(v["status"], "pass", "{name}");
    }
}

#[test]
fn unreduced_golden_matches_p4_artifacts() {
    let read = |name| -> Value { serde_json::from_str(&std::fs::read_to_string(golden_path(name)).unwrap()).unwrap() };
    let (p4, un) = (read("p4"), read("p4-unreduced"));
    assert_eq!(p4["artifacts"], un["artifacts"]);
    assert_eq!(p4["reduced"], un["reduced"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (_, q, ell, n, d) in GOLDEN_SETS {
        let a = run(&endo(q, ell, n, d)).to_json();
        let b = run(&endo(q, ell, n, d)).to_json();
        assert_eq!(sha(&a), sha(&b));
    }
}

#[test]
fn cold_and_warm_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    for (_, q, ell, n, d) in GOLDEN_SETS {
        let mut cfg = endo(q, ell, n, d);
        let uncached = run(&cfg).to_json();
        cfg.cache_dir = Some(dir.path().to_path_buf());
        let cold = run(&cfg).to_json();
        let warm = run(&cfg).to_json();
        assert_eq!(uncached, cold);
        assert_eq!(cold, warm);
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 5);
}

#[test]
fn cache_round_trip_and_tamper_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ClassCache::new(dir.path());
    let fresh = enumerate_classes(3, 2, DEFAULT_ENUMERATION_BOUND).unwrap();
    assert!(cache.load(3, 2).is_none());
    assert_eq!(load_or_enumerate(Some(&cache), 3, 2).unwrap(), fresh);
    assert_eq!(cache.load(3, 2).unwrap(), fresh);

    let path = cache.path(3, 2);
    let mut file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    file["classes"][0]["size"] = Value::String("999".into());
    std::fs::write(&path, file.to_string()).unwrap();
    assert!(cache.load(3, 2).is_none());
    assert_eq!(load_or_enumerate(Some(&cache), 3, 2).unwrap(), fresh);

    file["schema_version"] = Value::from(0);
    std::fs::write(&path, file.to_string()).unwrap();
    assert!(cache.load(3, 2).is_none());
    std::fs::write(&path, "not json").unwrap();
    assert!(cache.load(3, 2).is_none());
}

#[test]
fn cache_keys_are_distinct_and_stable() {
    assert_eq!(ClassCache::key(2, 3), ClassCache::key(2, 3));
    assert_ne!(ClassCache::key(2, 3), ClassCache::key(3, 2));
    assert_ne!(ClassCache::key(2, 13), ClassCache::key(21, 3));
    assert_eq!(ClassCache::key(2, 3).len(), 64);
}

#[test]
fn n_defaults_to_order() {
    let (code, v) = exit_code(&["invariants", "--q", "2", "--ell", "3"]);
    assert_eq!(code, 0);
    let m: Vec<&str> = v["artifacts"]["m"]["coeffs"].as_array().unwrap().iter().map(|c| c["num"].as_str().unwrap()).collect();
    assert_eq!(m, ["-2", "-1", "1"]);
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&["invariants", "--q", "2", "--ell", "3", "--n", "3"]).0, 2);
    assert_eq!(exit_code(&["endo-ring", "--q", "2", "--ell", "5", "--n", "4", "--d", "2"]).0, 0);
    assert_eq!(exit_code(&["invariants", "--q", "6", "--ell", "5"]).0, 2);
    assert_eq!(exit_code(&["invariants", "--q", "2"]).0, 2);
    assert_eq!(exit_code(&["deformation", "--q", "2", "--ell", "3", "--n", "2", "--t-count", "5"]).0, 2);
    let (code, v) = exit_code(&["oracle", "--q", "16", "--n", "3"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("scale limit"));
}

#[test]
fn oracle_small_groups() {
    let (code, v) = exit_code(&["oracle", "--q", "2", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["artifacts"]["class_sizes"], serde_json::json!(["1", "2", "3"]));
    let (code, v) = exit_code(&["oracle", "--q", "4", "--n", "2", "--ell", "5"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"delta-table-vs-formulas"));
    assert!(names.contains(&"steinberg-sign"));
}

#[test]
fn deformation_zero_row_uses_y_minus_n() {
    let report = run(&RunConfig::new(Command::Deformation, 2, Some(3), Some(2), 1));
    assert_eq!(report.envelope.status, Status::Pass);
    let rows = report.envelope.artifacts["points"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["a"], 0);
    assert_eq!(rows[0]["branch"], "Y-n");
    assert!(rows[1..].iter().all(|r| r["branch"] == "T_i=0"));
}

#[test]
fn text_output_and_env_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["classes", "--q", "2", "--n", "3", "--out", "text"])
        .env("CUSPCENTER_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status: pass"));
    assert!(text.contains("[pass] class-equation"));
    assert!(ClassCache::new(dir.path()).load(2, 3).is_some());
}

#[test]
fn classes_with_ell_reports_buckets() {
    let report = run(&RunConfig::new(Command::Classes, 2, Some(3), Some(2), 1));
    assert_eq!(report.envelope.status, Status::Pass);
    let rows = report.envelope.artifacts["classes"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().any(|r| r["bucket"] == "realized-witness"));
}
