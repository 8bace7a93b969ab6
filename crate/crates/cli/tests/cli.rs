use std::process::Command;

use serde_json::Value;

fn cval() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cval"))
}

fn code(cmd: &mut Command) -> i32 {
    cmd.output().expect("runs").status.code().expect("exit code")
}

fn json_stdout(cmd: &mut Command) -> (Value, i32) {
    let out = cmd.output().expect("runs");
    let doc = serde_json::from_slice(&out.stdout).expect("json report on stdout");
    (doc, out.status.code().expect("exit code"))
}

#[test]
fn tables_for_n_one() {
    let (doc, code) = json_stdout(cval().args(["tables", "--n", "1"]));
    assert_eq!(code, 0);
    assert_eq!(doc["output"]["c"], serde_json::json!([["1", "0"], ["0", "-1/3"]]));
    assert_eq!(doc["output"]["phi"], serde_json::json!([["2", "2"], ["0", "2"]]));
}

#[test]
fn tables_for_n_zero_is_a_scalar() {
    let (doc, code) = json_stdout(cval().args(["tables", "--n", "0"]));
    assert_eq!(code, 0);
    assert_eq!(doc["output"]["phi"], serde_json::json!([["2"]]));
    assert_eq!(doc["output"]["c"], serde_json::json!([["1"]]));
}

#[test]
fn mass_normalized_variant_changes_constants() {
    let (factorial, _) = json_stdout(cval().args(["tables", "--n", "3"]));
    let (mass, _) = json_stdout(cval().args(["tables", "--n", "3", "--variant", "mass-normalized"]));
    assert_eq!(factorial["output"]["normalization"], "factorial");
    assert_eq!(mass["output"]["normalization"], "mass");
    assert_ne!(factorial["output"]["c"], mass["output"]["c"]);
}

#[test]
fn sphere_contact_points_in_scaled_chart() {
    let (doc, code) =
        json_stdout(cval().args(["contact-points", "--surface", "sphere 2.0", "--chart", "symmetric:2", "--degrees", "2"]));
    assert_eq!(code, 0);
    let phi2 = doc["output"]["valuations"]["phi_2"].as_f64().unwrap();
    assert!((phi2 - 8.0 / (1.0 + 1.0 / 16.0)).abs() < 1e-8);
    assert_eq!(doc["output"]["points"].as_array().unwrap().len(), 2);
}

#[test]
fn shifted_torus_index_sum_vanishes() {
    let (doc, code) = json_stdout(cval().args(["contact-points", "--surface", "torus 2 0.5 at 0.7 0 0"]));
    assert_eq!(code, 0);
    let indices: i64 = doc["output"]["points"].as_array().unwrap().iter().map(|p| p["index"].as_i64().unwrap()).sum();
    assert_eq!(indices, 0);
}

#[test]
fn degenerate_tangency_exits_with_three() {
    let (doc, code) = json_stdout(cval().args(["contact-points", "--surface", "torus 2 0.5"]));
    assert_eq!(code, 3);
    assert!(doc["output"]["degenerate_point"].is_array());
}

#[test]
fn surface_file_accepts_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.json");
    std::fs::write(&path, r#"{"surface": {"kind": "ellipsoid", "axes": [1.0, 2.0, 0.7]}, "chart": {"kind": "symmetric", "scale": 1.0}}"#)
        .unwrap();
    let (doc, code) = json_stdout(cval().args(["contact-points", "--surface-file"]).arg(&path));
    assert_eq!(code, 0);
    assert_eq!(doc["records"][1]["observed"], 2);
}

#[test]
fn bad_input_exits_with_one() {
    assert_eq!(code(cval().args(["contact-points", "--surface", "cube 1"])), 1);
    assert_eq!(code(cval().args(["mc", "--tolerance", "nonsense=1"])), 1);
    assert_eq!(code(cval().args(["tables", "--n", "x"])), 1);
}

#[test]
fn csv_has_one_row_per_record() {
    let out = cval().args(["tables", "--n", "2", "--format", "csv"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,kind,passed,expected,observed,tolerance,provenance");
    assert_eq!(lines.len(), 3);
}

#[test]
fn mc_appends_deterministic_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("mc.jsonl");
    let args = ["mc", "--n", "2", "--k", "1", "--samples", "10000", "--s", "0,1", "--seed", "11", "--out"];
    for _ in 0..2 {
        let exit = code(cval().args(args).arg(&log));
        assert!(exit == 0 || exit == 4);
    }
    let lines: Vec<Value> =
        std::fs::read_to_string(&log).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["records"], lines[1]["records"]);
    assert_eq!(lines[0]["input_hash"], lines[1]["input_hash"]);
    let mass = lines[0]["records"].as_array().unwrap().iter().find(|r| r["name"] == "moment_s0").unwrap();
    assert_eq!(mass["passed"], true);
}

#[test]
fn check_all_reports_every_criterion() {
    let (doc, code) = json_stdout(cval().arg("check-all"));
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 12);
    let failing: Vec<&str> = records.iter().filter(|r| r["passed"] == false).map(|r| r["kind"].as_str().unwrap()).collect();
    let expected_code = if failing.contains(&"exact") {
        2
    } else if failing.contains(&"geometric") {
        3
    } else if failing.contains(&"statistical") {
        4
    } else {
        0
    };
    assert_eq!(code, expected_code);
    let determinism = records.iter().find(|r| r["name"] == "determinism_and_runtime").unwrap();
    assert_eq!(determinism["observed"]["identical_rerun"], true);
}
