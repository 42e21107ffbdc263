//! End-to-end tests of the `sldi` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn sldi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sldi"))
        .args(args)
        .current_dir(models_dir())
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn analyze_json_and_text() {
    let out = sldi(&["analyze", "processing_network.json", "--schedule", "ab"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["lo"], 77);
    assert_eq!(v["hi"], 192);

    let out = sldi(&[
        "analyze",
        "processing_network.json",
        "--schedule",
        "ab",
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "cycle times: [77, 192]");
}

#[test]
fn analyze_accepts_schedule_spellings() {
    for spec in ["ab", "a,b", "aabb"] {
        let out = sldi(&["analyze", "processing_network.json", "--schedule", spec]);
        assert!(out.status.success(), "schedule spec {spec}");
    }
}

#[test]
fn analyze_empty_set() {
    let out = sldi(&["analyze", "two_station.json", "--schedule", "clash"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"empty":true}"#);
}

#[test]
fn pteg_analyze_single_route() {
    let out = sldi(&["pteg-analyze", "processing_route_a.json", "--mode", "a"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"hi":"+inf","lo":73}"#);

    let out = sldi(&[
        "pteg-analyze",
        "processing_route_a.json",
        "--mode",
        "a",
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "cycle times: [73, +inf]");
}

#[test]
fn synthesize_then_check_round_trip() {
    let out = sldi(&[
        "synthesize",
        "processing_network.json",
        "--schedule",
        "ab",
        "--lambda",
        "100",
        "--reps",
        "4",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("prefix,t0,"));
    assert_eq!(csv.lines().count(), 10); // header + 4 * |ab| + 1 steps

    let dir = std::env::temp_dir().join("sldi-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let traj = dir.join("traj.csv");
    std::fs::write(&traj, &csv).unwrap();
    let out = sldi(&[
        "check",
        "processing_network.json",
        "--schedule",
        "ab",
        "--trajectory",
        traj.to_str().unwrap(),
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "pass");

    // Corrupt one dater (first value of the third data row) far into the
    // past: the checker must report the violated constraint.
    let mut lines: Vec<String> = csv.lines().map(str::to_string).collect();
    let fields: Vec<&str> = lines[3].split(',').collect();
    let mut fixed = vec![fields[0].to_string(), "-100000".to_string()];
    fixed.extend(fields[2..].iter().map(|s| s.to_string()));
    lines[3] = fixed.join(",");
    let broken = lines.join("\n");
    std::fs::write(&traj, broken).unwrap();
    let out = sldi(&[
        "check",
        "processing_network.json",
        "--schedule",
        "ab",
        "--trajectory",
        traj.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["status"], "fail");
    assert!(v["violation"]["constraint"].is_string());
}

#[test]
fn export_round_trips_through_analyze() {
    let out = sldi(&["export", "two_station.json"]);
    assert!(out.status.success());
    let dir = std::env::temp_dir().join("sldi-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("exported.json");
    std::fs::write(&path, stdout(&out)).unwrap();
    let out = sldi(&[
        "analyze",
        path.to_str().unwrap(),
        "--schedule",
        "alternate",
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "cycle times: [3, 3]");
}

#[test]
fn bench_prints_a_table() {
    let out = sldi(&[
        "bench",
        "two_station.json",
        "--schedule",
        "alternate",
        "--max-reps",
        "2",
        "--methods",
        "improved,direct",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("reps\tlen\timproved_ms\tdirect_ms"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn exit_codes() {
    // 1: usage error.
    let out = sldi(&["analyze"]);
    assert_eq!(out.status.code(), Some(1));
    // 2: model error.
    let out = sldi(&["analyze", "no_such_file.json", "--schedule", "ab"]);
    assert_eq!(out.status.code(), Some(2));
    let out = sldi(&["pteg-analyze", "two_station.json", "--mode", "zzz"]);
    assert_eq!(out.status.code(), Some(2));
    // 4: infeasible cycle time.
    let out = sldi(&[
        "synthesize",
        "two_station.json",
        "--schedule",
        "alternate",
        "--lambda",
        "99",
    ]);
    assert_eq!(out.status.code(), Some(4));
    // Help is not an error.
    let out = sldi(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
