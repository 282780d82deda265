use std::process::{Command, Output};

use serde_json::Value;

fn fquant(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fquant"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn compare_meets_the_residual_target() {
    let out = fquant(&["compare", "--potential", "harmonic", "--cutting", "gaussian", "--a", "2", "--levels", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stderr.is_empty());
    let v = json(&out);
    assert_eq!(v["results"]["converged"], true);
    let levels = v["results"]["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    for l in levels {
        assert!(l["residual"].as_f64().unwrap() <= 1e-6);
    }
    assert_eq!(v["inputs"]["a"], 2.0);
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic() {
    let args = ["compare", "--a", "3", "--levels", "2", "--dims", "2"];
    let first = fquant(&args);
    let second = fquant(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn invalid_input_exits_2_with_stderr_only() {
    for args in [
        &["solve", "--a", "-1"][..],
        &["solve", "--nonsense"],
        &["star", "--omega", "2"],
        &["hydrogen", "--a-cm", "1", "--delta", "1e-3"],
        &["solve", "--potential", "box"],
        &["star", "--neutrons", "1e57", "--radius-cm", "1e-10"],
        &[],
    ] {
        let out = fquant(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with("error:"), "{args:?}: {err}");
    }
    let err = String::from_utf8_lossy(&fquant(&["solve", "--a", "-1"]).stderr).into_owned();
    assert!(err.contains("--a"), "{err}");
}

#[test]
fn unconverged_solve_exits_3() {
    let out = fquant(&["solve", "--a", "2", "--max-doublings", "1", "--rel-tol", "1e-14"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["results"]["converged"], false);
    assert!(!v["warnings"].as_array().unwrap().is_empty());
}

#[test]
fn inputs_block_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let first_path = dir.path().join("first.json");
    let first = fquant(&[
        "analytic", "--a", "0.7", "--omega", "1.3", "--levels", "4", "--dims", "3",
        "--output", first_path.to_str().unwrap(),
    ]);
    assert!(first.status.success());
    assert!(first.stdout.is_empty());
    let text = std::fs::read_to_string(&first_path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();

    // feed the recorded inputs back, minus the output path
    let mut inputs = v["inputs"].clone();
    inputs.as_object_mut().unwrap().remove("output");
    let config = dir.path().join("config.json");
    std::fs::write(&config, inputs.to_string()).unwrap();
    let second = fquant(&["--config", config.to_str().unwrap()]);
    assert!(second.status.success());
    let w = json(&second);
    assert_eq!(v["results"], w["results"]);
}

#[test]
fn config_keys_accept_d_alias_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("star.json");
    std::fs::write(&config, r#"{"subcommand": "star", "D": 1e57, "delta": 1e-27}"#).unwrap();
    let out = fquant(&["--config", config.to_str().unwrap(), "--delta", "1e-26"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["results"]["amplification"].as_f64(), Some(1e5));
    assert_eq!(v["inputs"]["neutrons"].as_f64(), Some(1e57));
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let out = fquant(&["star", "--neutrons", "1e57", "--delta", "1e-26"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"amplification\": 1.0000000000000000e5"), "{text}");
}

#[test]
fn csv_has_one_record_per_level() {
    let out = fquant(&["solve", "--levels", "4", "--format", "csv"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    assert_eq!(&header[0], "n");
    assert_eq!(&header[1], "eigenvalue");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    for (n, row) in rows.iter().enumerate() {
        let e: f64 = row[1].parse().unwrap();
        assert!((e - (n as f64 + 0.5)).abs() < 1e-7);
    }
}

#[test]
fn sweep_reports_bad_values_in_place() {
    let out = fquant(&["sweep", "--vary", "radius", "--values", "3e5,1e-12,3e4"]);
    assert!(out.status.success());
    let v = json(&out);
    let entries = v["results"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 3);
    assert!(entries[0]["report"].is_object());
    assert!(entries[1]["error"].is_string());
    assert!(entries[1].get("report").is_none());
    assert_eq!(entries[2]["report"]["order_amplification"], 6);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn hydrogen_lamb_shift_needs_the_log_argument() {
    let without = json(&fquant(&["hydrogen", "--a-cm", "1", "--n", "2"]));
    assert!(without["results"]["levels"][0].get("lamb_shift_ev").is_none());
    assert_eq!(without["warnings"].as_array().unwrap().len(), 1);

    let with = json(&fquant(&["hydrogen", "--a-cm", "1", "--n", "2", "--bethe-log-argument", "2e4"]));
    let shift = with["results"]["levels"][0]["lamb_shift_ev"].as_f64().unwrap();
    assert!(shift > 0.0);
    assert_eq!(with["results"]["order_delta"], -17);
}

#[test]
fn cgs_units_report_erg() {
    // an electron in a 1e16 rad/s trap, cut at 3 oscillator lengths
    let (m, w) = (9.109e-28f64, 1e16f64);
    let length = (1.054571817e-27 / (m * w)).sqrt();
    let a = format!("{:e}", 3.0 * length);
    let out = fquant(&[
        "compare", "--units", "cgs", "--mass", "9.109e-28", "--omega", "1e16", "--a", &a, "--levels", "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["results"]["units"]["energy"], "erg");
    let ground = v["results"]["levels"][0]["eigenvalue"].as_f64().unwrap();
    let hw = 1.054571817e-27 * w;
    let delta: f64 = 1.0 / 9.0;
    let expected = 0.5 * hw * (1.0 + delta * delta).sqrt() - hw * delta / 2.0;
    assert!((ground / expected - 1.0).abs() < 1e-6, "{ground} vs {expected}");
    assert!(v["results"]["max_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn table_format_and_help() {
    let out = fquant(&["analytic", "--a", "2", "--format", "table"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().next().unwrap().contains("energy"));
    let help = fquant(&["--help"]);
    assert!(help.status.success());
    assert!(String::from_utf8_lossy(&help.stdout).contains("--cutting"));
}
