//! End-to-end tests of the command-line interface: exit codes, output
//! artifacts, and determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_nnfluid")
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn small_config() -> &'static str {
    r#"{"p":1.5,"q":1.5,"alpha":-6,"profile":{"K":1,"l":0.04},
        "grid":{"r_trunc":10,"n":201},"solver":{"dt":1e-3},"t_end":0.01}"#
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn run_writes_snapshots_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), small_config());
    let out_dir = dir.path().join("out");
    let out = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("snap_0.000000.csv").exists());
    assert!(out_dir.join("snap_0.010000.csv").exists());
    let diag = std::fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    assert!(diag.starts_with("# config_hash="));
    assert_eq!(diag.lines().count(), 2 + 11); // header + columns + 11 rows
}

#[test]
fn run_with_zero_t_end_emits_single_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), small_config());
    let out_dir = dir.path().join("out");
    let out = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--t-end",
        "0",
    ]);
    assert_eq!(code(&out), 0);
    let snaps: Vec<_> = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| {
            let n = e.unwrap().file_name().to_string_lossy().into_owned();
            n.starts_with("snap_").then_some(n)
        })
        .collect();
    assert_eq!(snaps, vec!["snap_0.000000.csv".to_string()]);
}

#[test]
fn schema_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"p":1.5,"profile":{"K":1,"l":0.04}}"#);
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("q"));

    let missing = dir.path().join("nope.json");
    let out = run(&["run", "--config", missing.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // unknown field is a schema violation too
    let cfg = write_config(
        dir.path(),
        r#"{"p":1.5,"q":1.5,"alpha":-6,"profile":{"K":1,"l":0.04},"bogus":1}"#,
    );
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn physics_violation_exits_3_unless_non_strict() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &small_config().replace("\"q\":1.5", "\"q\":2.0"),
    );
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("threshold"));

    let out_dir = dir.path().join("out");
    let out = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--non-strict",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn solver_failure_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"p":1.5,"q":1.5,"alpha":-6,"profile":{"K":1,"l":0.04},
            "grid":{"r_trunc":10,"n":201},"solver":{"dt":1e-3},
            "initial":{"v_amplitude":80.0},"t_end":0.5}"#,
    );
    let out = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("solver failed"));
}

#[test]
fn diagnostics_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), small_config());
    let mut bytes = Vec::new();
    for name in ["a", "b"] {
        let out_dir = dir.path().join(name);
        let out = run(&[
            "run",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
            "--seed",
            "42",
        ]);
        assert_eq!(code(&out), 0);
        bytes.push(std::fs::read(out_dir.join("diagnostics.csv")).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
}

#[test]
fn audit_accepts_good_run_and_flags_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), small_config());
    let out_dir = dir.path().join("out");
    let out = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&[
        "audit",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    // corrupt the final snapshot: multiply the velocity column by 100
    let snap = out_dir.join("snap_0.010000.csv");
    let text = std::fs::read_to_string(&snap).unwrap();
    let corrupted: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, line)| {
            if i < 2 {
                line.to_string()
            } else {
                let mut cols: Vec<String> = line.split(',').map(str::to_string).collect();
                let v: f64 = cols[3].parse().unwrap();
                cols[3] = format!("{:.16e}", v * 100.0 + 1.0);
                cols.join(",")
            }
        })
        .collect();
    std::fs::write(&snap, corrupted.join("\n") + "\n").unwrap();
    let out = run(&[
        "audit",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("0.010000"), "stderr: {err}");
}

#[test]
fn extend_writes_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), small_config());
    let out_dir = dir.path().join("out");
    let out = run(&[
        "extend",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--segments",
        "2",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(out_dir.join("schedule.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(value.get("config_hash").is_some());
    assert_eq!(value["segments"].as_array().unwrap().len(), 2);
    // each recorded step exceeds its lower bound
    for seg in value["segments"].as_array().unwrap() {
        assert!(seg["step"].as_f64().unwrap() > seg["step_lower_bound"].as_f64().unwrap());
    }
}

#[test]
fn report_summarizes_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), small_config());
    let out_dir = dir.path().join("out");
    run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    let out = run(&[
        "report",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("final time: 0.010000"));
    assert!(text.contains("worst energy drift"));
}

#[test]
fn sweep_runs_each_value() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"p":1.5,"q":1.5,"alpha":-6,"profile":{"K":1,"l":0.04},
            "grid":{"r_trunc":10,"n":101},"solver":{"dt":1e-3},"t_end":0.005,
            "sweep":{"parameter":"l","values":[0.02,0.04]}}"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("sweep_l_0.02").join("diagnostics.csv").exists());
    assert!(out_dir.join("sweep_l_0.04").join("diagnostics.csv").exists());
}

#[test]
fn verify_passes_on_default_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), small_config());
    let out = run(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(
        code(&out),
        0,
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS: gronwall_oracle"));
    assert!(!text.contains("FAIL"));
}
