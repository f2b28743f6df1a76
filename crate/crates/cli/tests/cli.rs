use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qnslab(args: &[&str], config: Option<&str>, out: &Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qnslab"));
    cmd.args(args).arg("--out").arg(out);
    let dir = tempfile::tempdir().unwrap();
    if let Some(text) = config {
        let path = dir.path().join("config.json");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(&path);
    }
    cmd.output().unwrap()
}

fn summary(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap()
}

const EQUILIBRIUM: &str = r#"{"data": "equilibrium", "points": 32, "t_end": 0.2, "halving_check": false, "bohm_samples": 1}"#;

#[test]
fn equilibrium_run_is_quiet_and_succeeds() {
    let out = tempfile::tempdir().unwrap();
    let res = qnslab(&["qns", "--threads", "1"], Some(EQUILIBRIUM), out.path());
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let s = summary(out.path());
    assert_eq!(s["subcommand"], "qns");
    assert_eq!(s["criteria"], serde_json::json!([6, 7]));
    let run = &s["results"]["run"];
    for key in ["energy_slack", "bd_slack", "mass_drift", "final_energy", "final_dissipation"] {
        assert_eq!(run[key].as_f64(), Some(0.0), "{key}");
    }
    for name in ["series.csv", "energy_plus_dissipation.dat", "bd_entropy.dat", "mass.dat"] {
        assert!(out.path().join(name).exists(), "{name}");
    }
}

#[test]
fn unknown_key_is_a_config_error() {
    let out = tempfile::tempdir().unwrap();
    let res = qnslab(&["qns"], Some(r#"{"pointz": 32}"#), out.path());
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("pointz"));
}

#[test]
fn out_of_range_values_are_config_errors() {
    let out = tempfile::tempdir().unwrap();
    let res = qnslab(&["qns"], Some(r#"{"dim": 5}"#), out.path());
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("dim"));
    let res = qnslab(&["qns"], Some(r#"{"nu": 0.01, "kappa": 0.03}"#), out.path());
    assert_eq!(res.status.code(), Some(2));
    let res = qnslab(&["limit"], Some(r#"{"study": {"q": 3.0}}"#), out.path());
    assert_eq!(res.status.code(), Some(2));
    let res = qnslab(&["qns", "--threads", "0"], Some(EQUILIBRIUM), out.path());
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = tempfile::tempdir().unwrap();
    let res = Command::new(env!("CARGO_BIN_EXE_qnslab"))
        .args(["qns", "--config", "/nonexistent/qnslab.json", "--out"])
        .arg(out.path())
        .output()
        .unwrap();
    assert_eq!(res.status.code(), Some(2));
}

const STRICHARTZ: &str = r#"{"dim": 2, "points": 16, "length": 16.0, "eps_values": [1.0, 0.5, 0.25], "q_values": [2.0, 4.0], "n_times": 5, "width": 1.5}"#;

#[test]
fn same_seed_gives_identical_csv() {
    let (a, b, c) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (dir, seed) in [(&a, "5"), (&b, "5"), (&c, "6")] {
        let res = qnslab(&["strichartz", "--seed", seed], Some(STRICHARTZ), dir.path());
        assert!(matches!(res.status.code(), Some(0) | Some(3)), "{}", String::from_utf8_lossy(&res.stderr));
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("strichartz.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    assert_eq!(summary(a.path())["seed"], 5);
}

#[test]
fn small_limit_study_reports_rates() {
    let out = tempfile::tempdir().unwrap();
    let cfg = r#"{
        "study": {"points": 32, "length": 20.0, "eps_values": [0.4, 0.2, 0.1], "t_end": 0.1, "sample_dt": 0.02},
        "paired": false,
        "taylor_green": {"points": 16, "t_end": 1.0}
    }"#;
    let res = qnslab(&["limit"], Some(cfg), out.path());
    assert!(matches!(res.status.code(), Some(0) | Some(3)), "{}", String::from_utf8_lossy(&res.stderr));
    let s = summary(out.path());
    assert_eq!(s["criteria"], serde_json::json!([8, 9, 10]));
    assert!(s["results"]["rate_a"].as_f64().is_some_and(f64::is_finite));
    assert_eq!(s["results"]["beta"].as_f64(), Some(1.0));
    let names: Vec<&str> = s["invariants"].as_array().unwrap().iter().map(|i| i["name"].as_str().unwrap()).collect();
    for n in ["exponent_table", "taylor_green", "density_rate", "qm_decreasing", "lambda_gap_decreasing"] {
        assert!(names.contains(&n), "{n}");
    }
    assert!(out.path().join("rate_table.csv").exists());
}
