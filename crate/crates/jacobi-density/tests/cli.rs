//! End-to-end checks of the `jacobi-density` binary: exit codes, output
//! routing, format overrides, the threads env var, and error reporting.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jacobi-density"))
}

fn write_config(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("jacobi-density-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const VALIDATE_CONFIG: &str = r#"{
    "t": 1,
    "a": [0.0],
    "b": [0.5],
    "phi": {"kind": "power", "gamma": 1.0},
    "n": 2000,
    "moments_max": 4,
    "ks_threshold": 0.05
}"#;

#[test]
fn validate_passes_and_exits_zero() {
    let cfg = write_config("validate.json", VALIDATE_CONFIG);
    let out = bin().arg("validate").arg("--config").arg(&cfg).output().unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("check,order,value,threshold,pass"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().any(|r| r.starts_with("ks,")));
    for row in &rows {
        assert!(row.ends_with(",1"), "failing row: {row}");
    }
}

#[test]
fn validate_fails_on_hopeless_threshold() {
    let cfg = write_config(
        "validate-tight.json",
        &VALIDATE_CONFIG.replace("0.05", "1e-9"),
    );
    let out = bin().arg("validate").arg("--config").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn density_csv_to_file() {
    let cfg = write_config(
        "density.json",
        r#"{
            "t": 1,
            "a": [0.0],
            "b": [1.0],
            "phi": {"kind": "power", "gamma": 1.0},
            "grid": {"zmin": -2.0, "zmax": 2.0, "points": 65}
        }"#,
    );
    let target = cfg.with_file_name("density.csv");
    let out = bin()
        .args(["density", "--config"])
        .arg(&cfg)
        .arg("--output")
        .arg(&target)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&target).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "z,rho,singular");
    assert_eq!(lines.len(), 66);
    // gamma = 1 with 0 in the spectrum: divergence at the origin is
    // flagged, support edges stay finite
    assert_eq!(lines[33], "0,inf,1");
    assert!(lines[1].starts_with("-2,") && lines[1].ends_with(",0"));
}

#[test]
fn bands_json_format_override() {
    let cfg = write_config(
        "bands.json",
        r#"{"t": 2, "a": [0.0, 0.0], "b": [1.0, 2.0], "phi": {"kind": "constant"}}"#,
    );
    let out = bin()
        .args(["bands", "--config"])
        .arg(&cfg)
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let bands = v["bands"].as_array().unwrap();
    assert_eq!(bands.len(), 2);
    assert!((bands[0]["mu"].as_f64().unwrap() + 3.0).abs() < 1e-9);
    assert!((bands[1]["nu"].as_f64().unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn bad_config_reports_json_error() {
    let cfg = write_config(
        "bad.json",
        r#"{"t": 1, "a": [0.0], "b": [0.0], "phi": {"kind": "constant"}}"#,
    );
    let out = bin().arg("bands").arg("--config").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("b[0]"));
}

#[test]
fn threads_env_var_gives_identical_output() {
    let cfg = write_config(
        "threads.json",
        r#"{
            "t": 1,
            "a": [0.0],
            "b": [1.0],
            "phi": {"kind": "power", "gamma": 1.0},
            "grid": {"zmin": -2.0, "zmax": 2.0, "points": 33},
            "n": 400
        }"#,
    );
    let run = |threads: &str| {
        let out = bin()
            .arg("spectrum")
            .arg("--config")
            .arg(&cfg)
            .env("JACOBI_DENSITY_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn plot_writes_script_and_data() {
    let cfg = write_config(
        "plot.json",
        r#"{
            "t": 1,
            "a": [3.0],
            "b": [0.5],
            "phi": {"kind": "power", "gamma": 1.0},
            "grid": {"zmin": 0.0, "zmax": 4.0, "points": 33},
            "n": 300
        }"#,
    );
    let stem = cfg.with_file_name("out.gnuplot");
    let out = bin()
        .args(["plot", "--config"])
        .arg(&cfg)
        .arg("--output")
        .arg(&stem)
        .output()
        .unwrap();
    assert!(out.status.success());
    let dir = stem.parent().unwrap();
    let script = std::fs::read_to_string(dir.join("plot.gnuplot")).unwrap();
    assert!(script.contains("density.csv"));
    assert!(script.contains("histogram.csv"));
    assert!(dir.join("density.csv").exists());
    assert!(dir.join("histogram.csv").exists());
}
