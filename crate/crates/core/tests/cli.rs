use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torus-control")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, config: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(config).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn report(dir: &Path, name: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{name}.json"))).unwrap()).unwrap()
}

fn run_in(tmp: &TempDir, sub: &str, config: &Value) -> (i32, Value) {
    let cfg = write_config(tmp.path(), &format!("{sub}.config.json"), config);
    let out = tmp.path().join("out");
    let o = run(&[sub, "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.code().is_some());
    let code = o.status.code().unwrap();
    let rep = if out.join(format!("{sub}.json")).exists() { report(&out, sub) } else { Value::Null };
    (code, rep)
}

#[test]
fn exit_codes_for_usage_errors() {
    assert_eq!(run(&["bogus", "--config", "x.json"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["control"]).status.code(), Some(2));
    assert_eq!(run(&["control", "--config", "/nonexistent/config.json"]).status.code(), Some(2));
}

#[test]
fn invalid_config_names_the_field_and_writes_nothing() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("out");
    for (config, field) in [
        (json!({ "grid": { "dim": 1, "N": 32 }, "solver": { "tol": "small" } }), "solver.tol"),
        (json!({ "grid": { "dim": 1, "N": 32 }, "unknown_key": 1 }), "unknown_key"),
        (json!({ "grid": { "dim": 3, "N": 32 } }), "grid"),
        (json!({ "grid": { "dim": 1, "N": 32 }, "window": { "omega": [[0.5, 0.2]] } }), "window"),
        (json!({ "grid": { "dim": 1, "N": 32 }, "nls": { "dt": -1.0 } }), "nls"),
    ] {
        let cfg = write_config(tmp.path(), "bad.json", &config);
        let o = run(&["control", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{config}");
        let stderr = String::from_utf8_lossy(&o.stderr);
        assert!(stderr.contains(field), "{field}: {stderr}");
        assert!(!out.exists());
    }
}

#[test]
fn numerical_failure_writes_error_report() {
    let tmp = TempDir::new().unwrap();
    let (code, rep) = run_in(&tmp, "control", &json!({ "grid": { "dim": 1, "N": 32 }, "solver": { "tol": 1e-14, "max_iter": 1 } }));
    assert_eq!(code, 3);
    assert_eq!(rep["status"], "error");
    assert_eq!(rep["error"]["kind"], "no_convergence");
    assert!(!tmp.path().join("out/control.csv").exists());
}

#[test]
fn full_window_observability_is_one() {
    let tmp = TempDir::new().unwrap();
    let config = json!({
        "grid": { "dim": 1, "N": 32 },
        "window": { "omega": [[0.0, 1.0]], "kind": "sharp", "transition_width": 0.0 },
        "horizon": 1.0
    });
    let (code, rep) = run_in(&tmp, "observability", &config);
    assert_eq!(code, 0);
    let c = rep["results"]["C_T"].as_f64().unwrap();
    assert!((c - 1.0).abs() < 1e-8, "{c}");
    assert_eq!(rep["config_echo"]["grid"]["N"], 32);
    assert!(rep["versions"]["torus_control"].is_string());
}

#[test]
fn free_simulation_conserves_mass() {
    let tmp = TempDir::new().unwrap();
    let (code, rep) = run_in(&tmp, "simulate", &json!({ "grid": { "dim": 1, "N": 32 }, "horizon": 0.5 }));
    assert_eq!(code, 0);
    assert_eq!(rep["results"]["controlled"], false);
    let mut reader = csv::Reader::from_path(tmp.path().join("out/simulate.csv")).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["t", "mass", "observed_mass"]);
    let masses: Vec<f64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();
    assert!(masses.len() > 2);
    assert!(masses.iter().all(|m| (m - masses[0]).abs() <= 1e-12));
}

#[test]
fn control_drives_to_rest_and_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let config = json!({ "grid": { "dim": 1, "N": 32 }, "seed": 5 });
    let (code, rep) = run_in(&tmp, "control", &config);
    assert_eq!(code, 0);
    assert!(rep["results"]["relative_residual"].as_f64().unwrap() <= 1e-6);
    let first_json = fs::read(tmp.path().join("out/control.json")).unwrap();
    let first_csv = fs::read(tmp.path().join("out/control.csv")).unwrap();
    run_in(&tmp, "control", &config);
    assert_eq!(first_json, fs::read(tmp.path().join("out/control.json")).unwrap());
    assert_eq!(first_csv, fs::read(tmp.path().join("out/control.csv")).unwrap());

    let cfg = write_config(tmp.path(), "seeded.json", &config);
    let other = tmp.path().join("other");
    run(&["control", "--config", &cfg, "--out", other.to_str().unwrap(), "--seed", "6", "--format", "json"]);
    assert!(!other.join("control.csv").exists());
    assert_eq!(report(&other, "control")["config_echo"]["seed"], 6);
    assert_ne!(report(&other, "control")["results"]["phi0"], rep["results"]["phi0"]);
}

#[test]
fn sweep_report_feeds_the_miller_cross_check() {
    let tmp = TempDir::new().unwrap();
    let window = json!({ "omega": [[0.0, 0.3]], "kind": "smooth", "transition_width": 0.05 });
    let (code, sweep) = run_in(&tmp, "resolvent-sweep", &json!({ "grid": { "dim": 1, "N": 16 }, "window": window, "sweep": { "n_points": 128 } }));
    assert_eq!(code, 0);
    assert!(sweep["results"]["M_sup"].as_f64().unwrap() > 0.0);
    let rows = csv::Reader::from_path(tmp.path().join("out/resolvent-sweep.csv")).unwrap().records().count();
    assert_eq!(rows, sweep["results"]["n_lambda"].as_u64().unwrap() as usize);

    let report_path = tmp.path().join("out/resolvent-sweep.json");
    let config = json!({
        "grid": { "dim": 1, "N": 16 },
        "window": window,
        "observability": { "sweep_report": report_path, "horizon_factor": 1.5 }
    });
    let (code, obs) = run_in(&tmp, "observability", &config);
    assert_eq!(code, 0);
    let miller = &obs["results"]["miller"];
    assert_eq!(miller["cross_check"], true, "{miller}");
    let t = obs["results"]["T"].as_f64().unwrap();
    assert!((t - 1.5 * sweep["results"]["miller_time"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn nls_pipelines_run() {
    let tmp = TempDir::new().unwrap();
    let base = json!({
        "grid": { "dim": 1, "N": 32 },
        "nls": { "sigma": -1.0, "dt": 0.001, "mass_threshold": 0.1 },
        "initial": { "band": 6, "norm": 0.5 },
        "target": { "band": 6, "norm": 0.05 },
        "seed": 3
    });
    let (code, stab) = run_in(&tmp, "stabilize", &base);
    assert_eq!(code, 0);
    assert!(stab["results"]["gamma"].as_f64().unwrap() > 0.0);
    let ratio = stab["results"]["mass_final"].as_f64().unwrap() / stab["results"]["mass_initial"].as_f64().unwrap();
    assert!(ratio <= 1e-3);

    let (code, global) = run_in(&tmp, "global-control", &base);
    assert_eq!(code, 0);
    assert!(global["results"]["error_to_zero"].as_f64().unwrap() <= 1e-4);
    assert!(global["results"]["error_from_zero"].as_f64().unwrap() <= 1e-4);
    assert_eq!(global["results"]["phases"][0]["type"], "damped");

    let (code, sim) = run_in(&tmp, "simulate", &json!({ "grid": { "dim": 1, "N": 32 }, "nls": { "nonlinear": true } }));
    assert_eq!(code, 0);
    assert!(sim["results"]["relative_mass_drift"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn tensor_check_reports_both_constants() {
    let tmp = TempDir::new().unwrap();
    let (code, rep) = run_in(&tmp, "tensor-check", &json!({ "grid": { "dim": 1, "N": 8 } }));
    assert_eq!(code, 0);
    assert!(rep["results"]["relative_gap"].as_f64().unwrap() <= 1e-6);
    assert_eq!(rep["results"]["N_per_axis"], 8);
}
