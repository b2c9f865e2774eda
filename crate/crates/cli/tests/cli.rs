use std::fs;
use std::process::{Command, Output};

use lamcert::data::{LargeT4Document, PAPER_PRESET_JSON};

fn lamcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lamcert")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn verify_preset_passes_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    for path in [&first, &second] {
        let out = lamcert(&["verify", "--preset", "paper", "--output", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    }
    let report = fs::read(&first).unwrap();
    assert_eq!(report, fs::read(&second).unwrap());
    let doc: serde_json::Value = serde_json::from_slice(&report).unwrap();
    assert_eq!(doc["overall"], "PASS");
    let entries = doc["entries"].as_array().unwrap();
    for name in ["excluded/a1-a2", "excluded/a3-a4", "item1/chain/sigma3", "imt/jacobian/sigma2", "balanced/span"] {
        let entry = entries.iter().find(|e| e["name"] == name).unwrap_or_else(|| panic!("{name} missing"));
        assert_eq!(entry["status"], "PASS", "{name}");
    }
}

#[test]
fn truncated_document_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, &PAPER_PRESET_JSON[..PAPER_PRESET_JSON.len() / 2]).unwrap();
    let out = lamcert(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = lamcert(&["verify", "--input", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn negated_leg_fails_with_named_checks() {
    let mut doc = LargeT4Document::parse(PAPER_PRESET_JSON).unwrap();
    for entry in &mut doc.c[0][0] {
        *entry = match entry.strip_prefix('-') {
            Some(rest) => rest.to_string(),
            None if entry == "0" => entry.clone(),
            None => format!("-{entry}"),
        };
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("perturbed.json");
    fs::write(&path, doc.to_json()).unwrap();
    let out = lamcert(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("item1/chain/sigma1"), "{err}");
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["overall"], "FAIL");
}

#[test]
fn wave_cone_queries() {
    let out = lamcert(&["wavecone", "--preset", "paper", "-v", "7/15,-1/15,-2/15"]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    assert!(line.starts_with("member "), "{line}");
    assert!(line.contains("witness=(19, -8)"), "{line}");

    let out = lamcert(&["wavecone", "--preset", "paper", "-v", "1,-1,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("non-member "));

    let out = lamcert(&["wavecone", "-v", "0,0,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("member "));

    for bad in ["1,2", "1/0,1,1", "x,1,1"] {
        let out = lamcert(&["wavecone", "-v", bad]);
        assert_eq!(out.status.code(), Some(2), "{bad}");
    }
}

#[test]
fn laminate_exit_codes() {
    let out = lamcert(&["laminate", "--xi0", "1,1", "--grid", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not a nonzero multiple"));
    assert_eq!(lamcert(&["laminate", "--grid", "0"]).status.code(), Some(2));
    assert_eq!(lamcert(&["laminate", "--lambda", "3/2", "--grid", "2"]).status.code(), Some(2));
    assert_eq!(lamcert(&["laminate", "--levels", "3"]).status.code(), Some(2));
    assert_eq!(lamcert(&["laminate", "--levels", "2", "--a", "0,0,0"]).status.code(), Some(2));
}

#[test]
fn one_level_export() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    let fractions = dir.path().join("fractions.json");
    let out = lamcert(&[
        "laminate",
        "--grid",
        "8",
        "--eps",
        "1/4",
        "--output",
        grid.to_str().unwrap(),
        "--fractions",
        fractions.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let mut reader = csv::Reader::from_path(&grid).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["x", "y", "state", "v1", "v2", "v3", "x_exact", "y_exact", "v1_exact", "v2_exact", "v3_exact"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r[2] == *"a" || r[2] == *"b"));
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(&fractions).unwrap()).unwrap();
    assert_eq!(doc["total"], "1");
    assert_eq!(doc["total_matches_domain"], true);
    assert_eq!(doc["exactness"]["exact"], true);
}

#[test]
fn two_level_export() {
    let dir = tempfile::tempdir().unwrap();
    let fractions = dir.path().join("fractions.json");
    let run = || {
        lamcert(&[
            "laminate",
            "--levels",
            "2",
            "--eps",
            "1",
            "--alpha",
            "1/2",
            "--grid",
            "6",
            "--fractions",
            fractions.to_str().unwrap(),
        ])
    };
    let out = run();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let first = fs::read(&fractions).unwrap();
    assert_eq!(stdout(&run()), stdout(&out));
    assert_eq!(fs::read(&fractions).unwrap(), first);
    let doc: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(doc["refinement"]["defect_bound_met"], true);
    let labels: Vec<&str> = doc["fractions"].as_array().unwrap().iter().map(|f| f["state"].as_str().unwrap()).collect();
    for label in ["a1", "p", "a4", "P3"] {
        assert!(labels.contains(&label), "{label}");
    }
}
