use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn covsteer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covsteer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn json_stdout(args: &[&str]) -> Value {
    let out = covsteer(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn verdicts(report: &Value) -> &Vec<Value> {
    report["verdicts"].as_array().unwrap()
}

#[test]
fn analyze_family_reports_all_discrete_criteria() {
    let r = json_stdout(&["analyze", "--family", "werner-2", "--param", "0.7", "--json", "-"]);
    assert_eq!(r["input"]["family"], "werner-2");
    let v = verdicts(&r);
    assert_eq!(v.len(), 6);
    for entry in v {
        for key in ["criterion", "direction", "lhs", "rhs", "violated", "margin"] {
            assert!(entry.get(key).is_some(), "missing {key}");
        }
        assert_eq!(entry["violated"], true);
    }
    let prop2 = v.iter().find(|e| e["criterion"] == "prop2").unwrap();
    assert!((prop2["lhs"].as_f64().unwrap() - 1.5 * 0.49).abs() < 1e-10);
    assert!(r["witness"].is_array() || r["witness"].is_object());
}

#[test]
fn analyze_is_deterministic() {
    let args = [
        "analyze",
        "--family",
        "two-qutrit-Fprime",
        "--param",
        "0.61",
        "--json",
        "-",
    ];
    let a = covsteer(&args);
    let b = covsteer(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn product_state_file_has_no_violation() {
    let r = json_stdout(&["analyze", "--state", &data("product_state.json"), "--json", "-"]);
    assert!(!verdicts(&r).is_empty());
    assert!(verdicts(&r).iter().all(|e| e["violated"] == false));
}

#[test]
fn singlet_file_is_steerable_both_ways() {
    let r = json_stdout(&[
        "analyze",
        "--state",
        &data("singlet.json"),
        "--criteria",
        "prop1",
        "--direction",
        "ab,ba",
        "--json",
        "-",
    ]);
    let v = verdicts(&r);
    assert_eq!(v.len(), 2);
    assert!(v.iter().all(|e| e["violated"] == true));
}

#[test]
fn gaussian_file_uses_gaussian_criterion() {
    let r = json_stdout(&["analyze", "--gaussian", &data("tmsv.json"), "--json", "-"]);
    let v = verdicts(&r);
    assert_eq!(v.len(), 2);
    // Schur-complement minimum eigenvalue for r = 0.5
    let schur_min = 1.0 / (2.0 * 1f64.cosh()) - 0.5;
    for e in v {
        assert_eq!(e["criterion"], "gaussian");
        assert_eq!(e["violated"], true);
        assert_eq!(e["lhs"].as_f64().unwrap() > 0.0, schur_min < 0.0);
    }
}

#[test]
fn json_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = covsteer(&[
        "analyze",
        "--family",
        "isotropic-qutrit-F",
        "--param",
        "0.4",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(verdicts(&r).iter().all(|e| e["violated"] == false));
}

#[test]
fn text_output_without_json_flag() {
    let out = covsteer(&["analyze", "--family", "noisy-singlet", "--param", "0.9"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("prop1"));
    assert!(text.contains("STEERABLE"));
}

#[test]
fn scan_finds_werner_threshold() {
    let r = json_stdout(&[
        "scan",
        "--family",
        "werner-2",
        "--criterion",
        "prop2",
        "--direction",
        "ba",
        "--tol",
        "1e-7",
        "--json",
        "-",
    ]);
    let t = r["threshold"]["threshold"].as_f64().unwrap();
    assert!((t - 1.0 / 3f64.sqrt()).abs() < 1e-6);
    assert_eq!(r["threshold"]["direction"], "B->A");
}

#[test]
fn scan_without_violation_fails() {
    let out = covsteer(&[
        "scan",
        "--family",
        "werner-2",
        "--criterion",
        "prop2",
        "--lo",
        "0.0",
        "--hi",
        "0.3",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn invalid_inputs_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // trace 2
    std::fs::write(&bad, r#"{"dimA": 1, "dimB": 2, "re": [[1, 0], [0, 1]]}"#).unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec![
            "analyze".into(),
            "--family".into(),
            "werner-2".into(),
            "--param".into(),
            "1.5".into(),
        ],
        vec![
            "analyze".into(),
            "--family".into(),
            "no-such-family".into(),
            "--param".into(),
            "0.5".into(),
        ],
        vec!["analyze".into(), "--state".into(), bad.to_string_lossy().into_owned()],
        vec![
            "analyze".into(),
            "--state".into(),
            dir.path().join("missing.json").to_string_lossy().into_owned(),
        ],
        vec![
            "analyze".into(),
            "--gaussian".into(),
            data("tmsv.json"),
            "--criteria".into(),
            "prop1".into(),
        ],
    ];
    for args in cases {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = covsteer(&argv);
        assert!(!out.status.success(), "expected failure for {argv:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unphysical_gaussian_names_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cm.json");
    std::fs::write(
        &path,
        r#"{"modesA": 1, "modesB": 1, "gamma": [[0.1,0,0,0],[0,0.1,0,0],[0,0,0.5,0],[0,0,0,0.5]]}"#,
    )
    .unwrap();
    let out = covsteer(&["analyze", "--gaussian", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr).to_lowercase();
    assert!(err.contains("unphysical") || err.contains("uncertainty"), "{err}");
}
