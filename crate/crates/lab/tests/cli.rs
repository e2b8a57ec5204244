use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qrlab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrlab"))
        .args(args)
        .env("QRLAB_CACHE_DIR", cache)
        .output()
        .expect("qrlab runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn failing_checks(report: &Value) -> usize {
    report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r["checks"].as_array().unwrap())
        .filter(|c| c["passed"] == false)
        .count()
}

#[test]
fn small_box_all_pipelines_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = qrlab(dir.path(), &["hurwitz", "--gmax", "1", "--nmax", "4", "--degree", "4", "--oracle-bound", "4", "--no-timestamp"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let rows = report["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert_eq!(failing_checks(&report), 0);
    // stable keys carry all three pipelines and the enumeration check
    let row = rows.iter().find(|r| r["key"]["g"] == 1 && r["key"]["mu"] == serde_json::json!([2, 1])).unwrap();
    let pipelines: BTreeSet<&str> = row["values"].as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(pipelines, BTreeSet::from(["cutjoin", "toprec", "wedge"]));
    let checks: Vec<&str> = row["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(checks, ["pipelines agree", "oracle"]);
    // h_{0;(1,1)} = 1/2 for simple Hurwitz numbers
    let h02 = rows.iter().find(|r| r["key"]["g"] == 0 && r["key"]["mu"] == serde_json::json!([1, 1])).unwrap();
    assert_eq!(h02["values"]["wedge"], "1/2");
    assert_eq!(h02["values"]["toprec"], "1/2");
}

#[test]
fn empty_pipeline_set_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = qrlab(dir.path(), &["hurwitz", "--pipelines", ""]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pipeline"));
    let out = qrlab(dir.path(), &["hurwitz", "--q", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_and_csv_carry_the_same_values() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hurwitz", "--q", "1", "--r", "2", "--degree", "5", "--no-timestamp"];
    let report = json(&qrlab(dir.path(), &args));
    let mut from_json = BTreeSet::new();
    for row in report["rows"].as_array().unwrap() {
        let mu: Vec<String> = row["key"]["mu"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
        let key = (row["key"]["g"].to_string(), mu.join(" "));
        for (p, v) in row["values"].as_object().unwrap() {
            from_json.insert((key.clone(), p.clone(), v.as_str().unwrap().to_string()));
        }
    }
    let csv_out = qrlab(dir.path(), &[&args[..], &["--format", "csv"]].concat());
    let mut reader = csv::Reader::from_reader(&csv_out.stdout[..]);
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let mut from_csv = BTreeSet::new();
    for rec in reader.records() {
        let rec = rec.unwrap();
        if rec[col("item")].starts_with("check:") {
            continue;
        }
        from_csv.insert(((rec[col("g")].to_string(), rec[col("mu")].to_string()), rec[col("item")].to_string(), rec[col("value")].to_string()));
    }
    assert!(!from_json.is_empty());
    assert_eq!(from_json, from_csv);
}

#[test]
fn completed_cycle_five_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = qrlab(dir.path(), &["completed-cycles", "--n", "5", "--no-timestamp"]);
    assert!(out.status.success());
    let report = json(&out);
    let row = &report["rows"][4];
    assert_eq!(row["key"]["n"], 5);
    let expected = [("5", "1/1"), ("3,1", "3/1"), ("2,2", "4/1"), ("3", "11/2"), ("1,1,1", "4/1"), ("1,1", "3/2"), ("1", "1/80")];
    let values = row["values"].as_object().unwrap();
    assert_eq!(values.len(), expected.len());
    for (lambda, v) in expected {
        assert_eq!(values[lambda], v, "coefficient of {lambda}");
    }
}

#[test]
fn default_loopcheck_passes_and_lists_every_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = qrlab(dir.path(), &["loopcheck", "--no-timestamp"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    let instances: Vec<(u64, u64)> = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["key"]["g"].as_u64().unwrap(), r["key"]["n"].as_u64().unwrap()))
        .collect();
    assert_eq!(instances, [(0, 3), (1, 1), (1, 2), (1, 3)]);
    for row in report["rows"].as_array().unwrap() {
        assert_eq!(row["checks"].as_array().unwrap().len(), 6);
    }
    assert_eq!(failing_checks(&report), 0);
}

#[test]
fn elsv03_matches_wedge() {
    let dir = tempfile::tempdir().unwrap();
    let out = qrlab(dir.path(), &["elsv03", "--q", "2", "--r", "2", "--degree", "7", "--no-timestamp"]);
    assert!(out.status.success());
    let report = json(&out);
    assert!(report["rows"].as_array().unwrap().len() > 5);
    assert_eq!(failing_checks(&report), 0);
}

#[test]
fn output_is_deterministic_without_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hurwitz", "--r", "2", "--degree", "5", "--no-timestamp"];
    let first = qrlab(dir.path(), &args);
    // the second run reads the correlators back from the cache
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let second = qrlab(dir.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    let stamped = json(&qrlab(dir.path(), &args[..5]));
    assert!(stamped["generated_at"].is_u64());
    assert!(json(&first).get("generated_at").is_none());
}

#[test]
fn corrupted_cache_file_is_named() {
    let dir = tempfile::tempdir().unwrap();
    assert!(qrlab(dir.path(), &["hurwitz", "--pipelines", "toprec", "--degree", "3"]).status.success());
    let ok = qrlab(dir.path(), &["cache", "verify", "--no-timestamp"]);
    assert!(ok.status.success());
    assert_eq!(failing_checks(&json(&ok)), 0);

    let target = dir.path().join("w_q1_r1_g1_n1.v1.qrc");
    let text = std::fs::read_to_string(&target).unwrap();
    let last_term = text.lines().rfind(|l| l.starts_with("term")).unwrap();
    let (head, _) = last_term.rsplit_once(' ').unwrap();
    std::fs::write(&target, text.replace(last_term, &format!("{head} 5/7"))).unwrap();

    let bad = qrlab(dir.path(), &["cache", "verify", "--no-timestamp"]);
    assert_eq!(bad.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("w_q1_r1_g1_n1.v1.qrc"), "{stderr}");

    // a run with the corrupted file ignores it and recomputes
    let run = qrlab(dir.path(), &["hurwitz", "--degree", "3"]);
    assert!(run.status.success());
    assert!(String::from_utf8_lossy(&run.stderr).contains("ignoring cache file"));

    let cleared = qrlab(dir.path(), &["cache", "clear", "--no-timestamp"]);
    assert!(cleared.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}
