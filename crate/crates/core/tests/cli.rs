use std::path::PathBuf;
use std::process::Command;

use biharmonic::cli::{run, EXIT_ERROR, EXIT_OK, EXIT_RESIDUAL};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("biharmonic").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("biharmonic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> String {
    let p = scratch(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gap_landmark() {
    let v = json(&["gap", "--m", "3", "--r", "1", "--lambda", "0"]);
    assert_eq!(v["x1"]["rational"], "0");
    assert_eq!(v["x2"]["rational"], "1/9");
    assert_eq!(v["arithmetic"], "exact");
    assert_eq!(v["range_kind"], "LambdaNonpositive");
}

#[test]
fn gap_float_fallback() {
    let v = json(&["gap", "--m", "4", "--r", "1", "--lambda", "1/3"]);
    assert_eq!(v["arithmetic"], "float");
    assert!(v["x2"]["decimal"].as_f64().unwrap() > 0.0);
    let v = json(&["gap", "--m", "4", "--r", "1", "--lambda", "1e-1"]);
    assert_eq!(v["arithmetic"], "float");
}

#[test]
fn critical_lambda() {
    let v = json(&["gap", "--m", "5", "--r", "1", "--lambda", "1"]);
    assert_eq!(v["range_kind"], "LambdaCritical");
    assert_eq!(v["x1"]["rational"], "2/25");
    let v = json(&["split", "--m", "5", "--r", "1", "--lambda", "1"]);
    assert_eq!(v["r1_sq"]["rational"], "2/3");
    assert_eq!(v["r2_sq"]["rational"], "1/3");
}

#[test]
fn sphere_circle_negative_lambda() {
    let v = json(&["sphere-circle", "--m", "2", "--r", "1", "--lambda", "-2"]);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    assert_eq!(sols[0]["branch"], "x2");
}

#[test]
fn enumerate_landmarks() {
    let v = json(&["enumerate", "--m1", "3", "--m2", "3"]);
    assert_eq!(v["admissible_count"], 1);
    let adm: Vec<&Value> = v["solutions"].as_array().unwrap().iter().filter(|s| s["admissible"] == true).collect();
    assert_eq!(adm[0]["r1_sq"]["rational"], "1/2");
    assert_eq!(adm[0]["h_iota_sq"]["rational"], "1/9");
    let v = json(&["enumerate", "--m1", "3", "--m2", "4"]);
    let got: Vec<(String, String)> = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|s| s["admissible"] == true)
        .map(|s| (s["r1_sq"]["rational"].as_str().unwrap().into(), s["h_iota_sq"]["rational"].as_str().unwrap().into()))
        .collect();
    assert_eq!(got, vec![("9/20".into(), "9/49".into()), ("11/24".into(), "1/49".into())]);
    let v = json(&["enumerate", "--dims", "2,3"]);
    assert_eq!(v["admissible_count"], 1);
}

#[test]
fn enumerate_needs_input() {
    assert_eq!(call(&["enumerate"]).0, EXIT_ERROR);
    assert_eq!(call(&["enumerate", "--m1", "3"]).0, EXIT_ERROR);
    assert_eq!(call(&["enumerate", "--dims", "2,0"]).0, EXIT_ERROR);
}

#[test]
fn summarize_examples() {
    assert_eq!(json(&["summarize", "--m1", "2", "--m2", "2"])["range"], "{1}");
    assert_eq!(json(&["summarize", "--m1", "3", "--m2", "3"])["range"], "(0, 1/3] ∪ {1}");
    assert_eq!(json(&["summarize", "--m1", "3", "--m2", "4"])["range"], "(0, 3/7] ∪ {1}");
}

#[test]
fn enumerate_output_round_trips_through_check() {
    for (m1, m2) in [("3", "3"), ("3", "4"), ("5", "7")] {
        let (_, out, _) = call(&["enumerate", "--m1", m1, "--m2", m2]);
        let path = write(&format!("enum-{m1}-{m2}.json"), &out);
        let v = json(&["check", "--config", &path]);
        let reports = v["reports"].as_array().unwrap();
        assert_eq!(reports.len(), 8);
        assert!(reports.iter().all(|r| r["passed"] == true && r["arithmetic"] == "exact"));
        // and the check report itself is accepted again
        let (_, again, _) = call(&["check", "--config", &path]);
        let path2 = write(&format!("check-{m1}-{m2}.json"), &again);
        assert_eq!(json(&["check", "--config", &path2])["reports"].as_array().unwrap().len(), 8);
    }
}

#[test]
fn split_and_sphere_circle_round_trip() {
    let (_, out, _) = call(&["split", "--m", "4", "--r", "1", "--lambda", "1/2"]);
    let path = write("split.json", &out);
    let v = json(&["check", "--config", &path, "--lambda", "1/2"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["max_residual"], 0.0);
    let (_, out, _) = call(&["sphere-circle", "--m", "2", "--r", "1", "--lambda", "-2"]);
    let path = write("sc.json", &out);
    let v = json(&["check", "--config", &path, "--lambda", "-2"]);
    assert!(v["reports"].as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn check_exit_codes() {
    let clifford = write("clifford.json", r#"{"ambient_radius": 1, "factors": [{"dim": 1, "radius_sq": "1/2"}, {"dim": 1, "radius_sq": "1/2"}]}"#);
    assert_eq!(call(&["check", "--config", &clifford]).0, EXIT_OK);
    let off = write("off.json", r#"{"ambient_radius": 1, "factors": [{"dim": 2, "radius_sq": "1/3"}, {"dim": 1, "radius_sq": "2/3"}]}"#);
    let (code, out, _) = call(&["check", "--config", &off]);
    assert_eq!(code, EXIT_RESIDUAL);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["passed"], false);
    let bad = write("bad.json", r#"{"ambient_radius": 1, "factors": [{"dim": 1, "radius": 0.5}]}"#);
    let (code, _, err) = call(&["check", "--config", &bad]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("sum of squared factor radii"));
    let junk = write("junk.json", "{not json");
    assert_eq!(call(&["check", "--config", &junk]).0, EXIT_ERROR);
    assert_eq!(call(&["check", "--config", "/nonexistent/file.json"]).0, EXIT_ERROR);
}

#[test]
fn domain_and_usage_errors() {
    let (code, _, err) = call(&["gap", "--m", "2", "--r", "1", "--lambda", "0"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("m > 2"));
    assert_eq!(call(&["gap", "--m", "3", "--bogus"]).0, EXIT_ERROR);
    assert_eq!(call(&["gap", "--m", "3", "--r", "x", "--lambda", "0"]).0, EXIT_ERROR);
    assert_eq!(call(&["scan", "--m1", "2", "--m2", "3"]).0, EXIT_ERROR);
    assert_eq!(call(&["split", "--m", "4", "--r", "1", "--lambda", "0", "--branch", "x1"]).0, EXIT_ERROR);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["gap", "sphere-circle", "split", "check", "enumerate", "scan", "summarize", "oracle"] {
        assert!(out.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn scan_csv_and_summary() {
    let csv = scratch("scan.csv");
    let v = json(&["scan", "--m1", "3", "--m2", "4", "--grid", "500", "--out", csv.to_str().unwrap()]);
    assert!((v["bound"].as_f64().unwrap() - 9.0 / 49.0).abs() < 1e-8);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("r1_sq,g,h,min\n"));
    assert_eq!(text.lines().count(), v["points"].as_u64().unwrap() as usize + 1);
    let full = json(&["scan", "--m1", "3", "--m2", "3", "--grid", "50"]);
    // 50 uniform points plus the crossing, which is not one of them
    assert_eq!(full["r1_grid"].as_array().unwrap().len(), 51);
}

#[test]
fn oracle_runs() {
    let six = write(
        "six.json",
        r#"{"ambient_radius": 1, "factors": [
            {"dim": 1, "radius_sq": "1/8"}, {"dim": 1, "radius_sq": "1/8"}, {"dim": 1, "radius": "1/2"},
            {"dim": 1, "radius_sq": "1/8"}, {"dim": 1, "radius_sq": "1/8"}, {"dim": 1, "radius": "1/2"}]}"#,
    );
    let v = json(&["oracle", "--config", &six, "--samples", "2"]);
    assert_eq!(v["passed"], true);
    assert!(v["order_estimate"].as_f64().unwrap() > 1.8);
    let (code, _, _) = call(&["oracle", "--config", &six, "--lambda", "1", "--samples", "2"]);
    assert_eq!(code, EXIT_RESIDUAL);
    assert_eq!(call(&["oracle", "--config", &six, "--h", "1"]).0, EXIT_ERROR);
    assert_eq!(call(&["oracle", "--config", &six, "--stencil", "central9"]).0, EXIT_ERROR);
    let v = json(&["oracle", "--config", &six, "--samples", "1", "--stencil", "central4", "--h", "1e-2"]);
    assert!(v["order_estimate"].as_f64().unwrap() > 3.5);
    // the report carries its config, so check accepts it
    let (_, out, _) = call(&["oracle", "--config", &six, "--samples", "1"]);
    let path = write("oracle-report.json", &out);
    assert_eq!(call(&["check", "--config", &path]).0, EXIT_OK);
}

#[test]
fn output_is_deterministic() {
    let six = write("det.json", r#"{"ambient_radius": 1, "factors": [{"dim": 1, "radius_sq": "1/4"}, {"dim": 1, "radius_sq": "1/4"}, {"dim": 1, "radius_sq": "1/2"}]}"#);
    let cases: [&[&str]; 4] = [
        &["enumerate", "--m1", "4", "--m2", "6"],
        &["scan", "--m1", "4", "--m2", "5", "--grid", "200"],
        &["oracle", "--config", &six, "--seed", "11", "--samples", "3"],
        &["sphere-circle", "--m", "5", "--r", "1", "--lambda", "1"],
    ];
    for args in cases {
        assert_eq!(call(args).1, call(args).1, "{args:?}");
    }
    let a = call(&["oracle", "--config", &six, "--seed", "11", "--samples", "3"]).1;
    let b = call(&["oracle", "--config", &six, "--seed", "12", "--samples", "3"]).1;
    assert_ne!(a, b);
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_biharmonic");
    let out = Command::new(exe).args(["summarize", "--m1", "3", "--m2", "3"]).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["upper"]["rational"], "1/3");
    let out = Command::new(exe).args(["gap", "--m", "1", "--r", "1", "--lambda", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_ERROR));
    assert!(!out.stderr.is_empty());
}
