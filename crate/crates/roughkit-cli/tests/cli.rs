use std::path::PathBuf;
use std::process::{Command, Output};

use roughkit_cli::fixtures::{bundled, verify};
use serde_json::{json, Value};

const TRIAGE: &str = "id,Fever,Cough,Diagnosis\np1,High,Yes,Flu\np2,High,Yes,Cold\np3,High,No,Flu\np4,High,No,Flu\np5,Normal,No,Healthy\np6,Normal,No,Healthy\n";

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn roughkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roughkit")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn run_config(family: &str, model: &str, cfg: Value) -> Output {
    let path = scratch(&format!("{family}-{model}.json"), &cfg.to_string());
    roughkit(&[family, "--model", model, "--config", path.to_str().unwrap()])
}

#[test]
fn triage_table_with_attribute_target() {
    let table = scratch("triage.csv", TRIAGE);
    let cfg = scratch("triage-cfg.json", r#"{"partition": {"attributes": ["Fever", "Cough"]}}"#);
    let out = roughkit(&[
        "approx", "--model", "pawlak", "--table", table.to_str().unwrap(), "--config", cfg.to_str().unwrap(), "--target", "Diagnosis=Flu",
    ]);
    let r = report(&out);
    assert_eq!(r["result"]["lower"], json!(["p3", "p4"]));
    assert_eq!(r["result"]["upper"], json!(["p1", "p2", "p3", "p4"]));
    assert_eq!(r["result"]["regions"]["bnd"], json!(["p1", "p2"]));
    assert_eq!(r["config"]["target"], json!({"attr": "Diagnosis", "value": "Flu"}));
}

#[test]
fn vprs_report_positive_region() {
    let a: Vec<String> = (1..=10).map(|i| format!("a{i}")).collect();
    let cfg = json!({
        "universe": a,
        "partition": [&a[..5], &a[5..8], &a[8..]],
        "target": ["a1", "a2", "a3", "a4", "a9"],
        "beta": "1/5",
    });
    let r = report(&run_config("approx", "vprs", cfg));
    assert_eq!(r["result"]["regions"]["pos"], json!(["a1", "a2", "a3", "a4", "a5"]));
}

#[test]
fn empty_target_gives_empty_pair() {
    let cfg = json!({"universe": ["a", "b"], "partition": [["a"], ["b"]], "target": []});
    let r = report(&run_config("approx", "pawlak", cfg));
    assert_eq!(r["result"]["lower"], json!([]));
    assert_eq!(r["result"]["upper"], json!([]));
}

#[test]
fn dtrs_thresholds_are_exact_strings() {
    let r = report(&run_config("decision", "dtrs", json!({"losses": [0, 5, 30, 100, 10, 0]})));
    assert_eq!(r["result"], json!({"alpha": "18/19", "beta": "2/7"}));
}

#[test]
fn ingest_shapes() {
    let r = report(&roughkit(&["ingest", scratch("ingest.csv", TRIAGE).to_str().unwrap()]));
    assert_eq!(r["rows"], 6);
    assert_eq!(r["attributes"], json!(["Fever", "Cough", "Diagnosis"]));

    let r = report(&roughkit(&["ingest", scratch("header-only.csv", "id,Fever,Cough\n").to_str().unwrap()]));
    assert_eq!(r["rows"], 0);
    assert_eq!(r["universe"], json!([]));

    let cov = json!({
        "universe": ["c1", "c2", "c3", "c4", "c5", "c6"],
        "covering": [["c1", "c2", "c3"], ["c3", "c4"], ["c4", "c5"], ["c5"], ["c4", "c6"]],
    });
    let p = scratch("covering.json", &cov.to_string());
    let r = report(&roughkit(&["ingest", p.to_str().unwrap(), "--format", "json"]));
    assert_eq!(r["is_covering"], true);
}

#[test]
fn parse_errors_carry_position_and_exit_one() {
    let p = scratch("broken.json", "{\n  \"universe\": [\"a\",\n}");
    let out = roughkit(&["approx", "--model", "pawlak", "--config", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = run_config("approx", "no_such_model", json!({}));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn precondition_failures_exit_two() {
    let cfg = json!({"universe": ["a", "b"], "partition": [["a", "b"]], "target": ["a"], "beta": "1/2"});
    let out = run_config("approx", "vprs", cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn reports_are_byte_identical() {
    let cfg = json!({
        "universe": ["p1", "p2", "p3", "p4"],
        "relations": [
            {"key": "B", "partition": [["p1", "p2"], ["p3", "p4"]]},
            {"key": "A", "partition": [["p1"], ["p2", "p3"], ["p4"]]},
        ],
        "target": ["p1", "p2", "p3"],
    });
    let a = run_config("multiview", "multirough", cfg.clone());
    let b = run_config("multiview", "multirough", cfg);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_report() {
    let cfg = scratch("out-cfg.json", r#"{"losses": [0, 5, 30, 100, 10, 0]}"#);
    let dest = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli").join("dtrs-report.json");
    let out = roughkit(&["decision", "--model", "dtrs", "--config", cfg.to_str().unwrap(), "--out", dest.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dest).unwrap()).unwrap();
    assert_eq!(v["result"]["alpha"], "18/19");
}

#[test]
fn bundled_corpus_passes() {
    let all = bundled().unwrap();
    assert!(all.len() >= 40);
    let s = verify(&all, None);
    assert!(s.ok(), "{:?}", s.failed);
}

#[test]
fn section_filter_selects_mgrs_only() {
    let all = bundled().unwrap();
    let s = verify(&all, Some("mgrs"));
    assert_eq!(s.total(), 2);
    assert!(s.passed.iter().all(|id| id.starts_with("mgrs-")));
}

#[test]
fn mutated_fixture_is_the_only_failure() {
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("mutated");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    for e in std::fs::read_dir(&src).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, dir.join(p.file_name().unwrap())).unwrap();
    }
    let target = dir.join("mgrs-optimistic.json");
    let mut fx: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    fx["expect"]["lower"] = json!(["p4"]);
    std::fs::write(&target, fx.to_string()).unwrap();

    let out = roughkit(&["verify", "--dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8_lossy(&out.stdout);
    let fails: Vec<&str> = text.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 1, "{text}");
    assert!(fails[0].contains("mgrs-optimistic"));
}
