//! End-to-end checks of the `hypercpf` binary: subcommands, config parsing,
//! output formats and exit codes.

use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypercpf"))
}

fn write_config(dir: &std::path::Path, name: &str, g: f64) -> std::path::PathBuf {
    let path = dir.join(name);
    let config = serde_json::json!({
        "cavity": {
            "units": "kappa",
            "omega_photon": 0.0,
            "omega_cavity": 0.0,
            "omega_exciton": 0.0,
            "g": g,
            "kappa": 1.0,
            "kappa_s": 0.0,
            "gamma": 0.1,
            "p": 1.0
        },
        "input": {
            "alpha": [[0.6, 0.0], [0.8, 0.0]],
            "beta": [[0.0, 1.0], [0.0, 0.0]],
            "lambda": [[0.6, 0.0], [0.0, -0.8]],
            "varpi": [[1.0, 0.0], [0.0, 0.0]]
        },
        "sweep": [
            {"axis": "g_over_kappa", "start": 0.2, "stop": 2.4, "count": 4},
            {"axis": "kappa_s_over_kappa", "start": 0.0, "stop": 1.0, "count": 3}
        ]
    });
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

#[test]
fn simulate_prints_json_with_resolved_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "run.json", 2.4);
    let output = bin()
        .args(["simulate", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let value: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!((value["parameters"]["g"].as_f64().unwrap() - 2.4).abs() < 1e-15);
    assert!(value["parameters"]["c"].is_array());
    let success = value["result"]["success_probability"].as_f64().unwrap();
    assert!((success - 0.966).abs() < 5e-4);
    assert!(value["result"]["fidelity_vs_ideal"].as_f64().unwrap() > 1.0 - 1e-10);
    // Amplitude records carry the label fields and re/im parts.
    let amp = &value["result"]["output_state"]["amplitudes"][0];
    for key in ["pol_c", "spat_c", "pol_t", "spat_t", "spin1", "spin2", "re", "im"] {
        assert!(!amp[key].is_null(), "missing key {key}");
    }
}

#[test]
fn simulate_with_identical_reflections_exits_with_the_inoperative_code() {
    let dir = tempfile::tempdir().unwrap();
    // g = 0 makes the hot and cold reflections identical.
    let config = write_config(dir.path(), "dead.json", 0.0);
    let output = bin()
        .args(["simulate", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("inoperative"), "stderr: {stderr}");
}

#[test]
fn malformed_config_names_the_offending_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"cavity": {"g": 1.0}}"#).unwrap();
    let output = bin().args(["simulate", "--config"]).arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("gamma"), "stderr: {stderr}");
}

#[test]
fn sweep_writes_the_fixed_column_order_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "sweep.json", 1.0);
    let out1 = dir.path().join("a.csv");
    let out2 = dir.path().join("b.csv");
    for (out, threads) in [(&out1, "1"), (&out2, "3")] {
        let status = bin()
            .args(["sweep", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(out)
            .args(["--threads", threads])
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = fs::read_to_string(&out1).unwrap();
    let b = fs::read_to_string(&out2).unwrap();
    assert_eq!(a, b);
    assert!(a.lines().any(|l| l == "axis1,axis2,eta_pipeline,eta_closed_form,fidelity"));
    let data_rows = a.lines().filter(|l| !l.starts_with('#') && !l.starts_with("axis1")).count();
    assert_eq!(data_rows, 12);
}

#[test]
fn verify_is_deterministic_and_seed_sensitive() {
    let run = |seed: &str| {
        let output = bin()
            .args(["verify", "--seed", seed, "--draws", "2"])
            .output()
            .unwrap();
        assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
        String::from_utf8(output.stdout).unwrap()
    };
    let a = run("42");
    let b = run("42");
    let c = run("43");
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.contains("2/2 draws passed"));
}

#[test]
fn closed_form_prints_the_resonant_efficiency() {
    let output = bin()
        .args(["closed-form", "--g", "2.4", "--ks", "0", "--p", "1"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let value: f64 = String::from_utf8_lossy(&output.stdout).trim().parse().unwrap();
    assert!((value - 0.9659462506152188).abs() < 1e-12);
}
