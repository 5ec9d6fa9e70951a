use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vieta-tubes")).args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn error_kind(o: &Output) -> String {
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stderr).expect("error json");
    v["error"].as_str().unwrap().to_string()
}

fn dir_arg(d: &Path) -> &str {
    d.to_str().unwrap()
}

#[test]
fn count_box_slope_is_one() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&[
        "count", "--group", "sl", "--n", "2", "--v", "1,-1", "--m", "+,+", "--eps", "0.1", "--T", "4:12:1",
        "--filter", "box", "--out", dir_arg(d.path()),
    ]);
    assert!(o.status.success());
    let m: Value = serde_json::from_str(&fs::read_to_string(d.path().join("count.json")).unwrap()).unwrap();
    let slope = m["results"]["fits"][0]["fit"]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
    assert_eq!(m["tool"], "vieta-tubes");
    assert_eq!(m["config"]["T"], "4:12:1");
    let csv = fs::read_to_string(d.path().join("count.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10);
    assert!(csv.starts_with("group,v,m,eps,T,"));
}

#[test]
fn realize_golden_square() {
    let v = stdout_json(&run(&["realize", "--poly", "1,-3,1"]));
    assert_eq!(v["matrix"], serde_json::json!([["0", "-1"], ["1", "3"]]));
    let l = v["jordan"]["lambda"][0].as_f64().unwrap();
    assert!((l - 0.9624).abs() < 1e-4);
}

#[test]
fn realize_rejects_determinant_minus_one() {
    assert_eq!(error_kind(&run(&["realize", "--poly", "1,-3,-1"])), "determinant_not_one");
}

#[test]
fn jordan_of_matrix() {
    let v = stdout_json(&run(&["jordan", "--matrix", "[[2,1],[1,1]]"]));
    let lam: Vec<f64> = v["lambda"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((lam[0] - 0.9624).abs() < 1e-4 && (lam[1] + 0.9624).abs() < 1e-4);
}

#[test]
fn cartan_accepts_string_entries() {
    let v = stdout_json(&run(&["cartan", "--matrix", r#"[["2","1"],["1","1"]]"#]));
    assert!(v["mu"][0].as_f64().unwrap() > 0.9);
}

#[test]
fn invalid_direction_exits_two() {
    assert_eq!(error_kind(&run(&["count", "--v", "-1,1", "--T", "4:6:1"])), "invalid_direction");
}

#[test]
fn volume_without_seed_is_refused() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["volume", "--v", "1,0,-1", "--T", "5,10", "--samples", "1e3", "--out", dir_arg(d.path())]);
    assert_eq!(error_kind(&o), "invalid_parameter");
    assert!(!d.path().join("volume.csv").exists());
}

#[test]
fn volume_slope_is_two_rho() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&[
        "volume", "--group", "sl", "--n", "3", "--v", "1,0,-1", "--T", "5,10,15", "--eps", "0.5", "--samples", "2e4",
        "--seed", "7", "--out", dir_arg(d.path()),
    ]);
    assert!(o.status.success());
    let m: Value = serde_json::from_str(&fs::read_to_string(d.path().join("volume.json")).unwrap()).unwrap();
    let s = m["results"]["slope"].as_f64().unwrap();
    assert!((s - 4.0).abs() < 0.05, "slope {s}");
    assert_eq!(m["config"]["seed"], 7);
}

#[test]
fn cap_is_checked_before_work() {
    let o = run(&["count", "--v", "1,0,-1", "--T", "6,20", "--filter", "q-member", "--cap", "1000"]);
    assert_eq!(error_kind(&o), "cap_exceeded");
}

#[test]
fn census_histograms() {
    let d = tempfile::tempdir().unwrap();
    assert!(run(&["census", "--X", "12", "--out", dir_arg(d.path())]).status.success());
    let h = fs::read_to_string(d.path().join("census_jordan.csv")).unwrap();
    assert!(h.starts_with("bin_left,bin_right,count\n"));
    let m: Value = serde_json::from_str(&fs::read_to_string(d.path().join("census.json")).unwrap()).unwrap();
    assert!(m["results"]["matrix_count"].as_u64().unwrap() > 0);
}

#[test]
fn irreducible_census_rows() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["irreducible", "--v", "1,0,-1", "--T", "5,6", "--eps", "0.1", "--out", dir_arg(d.path())]);
    assert!(o.status.success());
    let csv = fs::read_to_string(d.path().join("irreducible.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "T,eps,total,irreducible,reducible_deg1,deferred");
    assert_eq!(lines[1], "5,1/10,900,870,30,0");
}

#[test]
fn irreducible_single_polynomial() {
    let v = stdout_json(&run(&["irreducible", "--poly", "1,0,-10,0,1"]));
    assert_eq!(v["certificate"]["verdict"], "irreducible");
    let v = stdout_json(&run(&["irreducible", "--poly", "1,-4,2,-1,-1"]));
    assert_eq!(v["certificate"]["verdict"], "irreducible");
    let v = stdout_json(&run(&["irreducible", "--poly", "1,-1,-4,4"]));
    assert_eq!(v["certificate"]["verdict"], "reducible");
}

#[test]
fn disc_and_deficit() {
    let v = stdout_json(&run(&["disc", "--poly", "1,0,-2"]));
    assert_eq!(v["discriminant"], "8");
    let v = stdout_json(&run(&["disc", "--v", "1,0,-1", "--T", "12"]));
    assert!((v["log_disc_over_T"].as_f64().unwrap() - 4.0).abs() < 1e-3);
    let v = stdout_json(&run(&["deficit", "--v", "3,1,-1,-3", "--s1", "1,4"]));
    assert_eq!(v["deficit"], "6");
    assert_eq!(v["zero_block_sums"], true);
}

#[test]
fn reruns_are_byte_identical() {
    let d = tempfile::tempdir().unwrap();
    let out = dir_arg(d.path());
    let o = run(&[
        "count", "--v", "1,0,-1", "--m", "+,-,-", "--T", "5:7:1", "--filter", "q-member", "--mode", "sampled",
        "--samples", "300", "--seed", "11", "--out", out,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read(d.path().join("count.csv")).unwrap();
    let manifest = fs::read(d.path().join("count.json")).unwrap();
    assert!(run(&["--rerun", d.path().join("count.json").to_str().unwrap()]).status.success());
    assert_eq!(fs::read(d.path().join("count.csv")).unwrap(), csv);
    assert_eq!(fs::read(d.path().join("count.json")).unwrap(), manifest);
}
