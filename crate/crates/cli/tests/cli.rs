use std::path::PathBuf;
use std::process::{Command, Output};

use cvqss_core::metrics::closed_form::{closed_form, Scheme};

const HEADER: &str =
    "scheme,r,squeezing_pct,vm_db,eta,gain,t_plus,t_minus,t_q,vcv_plus,vcv_minus,v_q,fidelity";

fn cvqss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvqss"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = cvqss(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Vec<serde_json::Value> {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn num(v: &serde_json::Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} is {:?}", v[key]))
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn csv_header_is_fixed() {
    let text = stdout(&["run", "--scheme", "mz12"]);
    assert_eq!(text.lines().next(), Some(HEADER));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn mach_zehnder_run() {
    let rows = json(&[
        "run", "--scheme", "mz12", "--r", "0:2:0.5", "--format", "json",
    ]);
    assert_eq!(rows.len(), 5);
    for row in &rows {
        assert!((num(row, "t_q") - 2.0).abs() < 1e-12);
        assert!(num(row, "v_q").abs() < 1e-12);
        assert!((num(row, "fidelity") - 1.0).abs() < 1e-12);
    }
}

#[test]
fn classical_feedforward_with_noise() {
    let rows = json(&[
        "run",
        "--scheme",
        "feedforward",
        "--r",
        "0",
        "--vm-db",
        "20",
        "--gain",
        "2.8284271247461903",
        "--format",
        "json",
    ]);
    assert!((num(&rows[0], "t_q") - 2.0 / 3.0).abs() < 1e-9);
    assert!((num(&rows[0], "v_q") - 4.0).abs() < 1e-9);
    assert!((num(&rows[0], "vm_db") - 20.0).abs() < 1e-12);
}

#[test]
fn third_player_learns_nothing() {
    let rows = json(&["run", "--scheme", "single_player_3", "--format", "json"]);
    assert_eq!(num(&rows[0], "t_q"), 0.0);
    assert!((num(&rows[0], "v_q") - 1.0).abs() < 1e-12);
}

#[test]
fn gain_sweep_is_r_major() {
    let rows = json(&[
        "run",
        "--scheme",
        "feedforward",
        "--r",
        "0,1",
        "--gain",
        "0:1:0.5",
        "--format",
        "json",
    ]);
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (num(r, "r"), num(r, "gain"))).collect();
    assert_eq!(
        pairs,
        [
            (0.0, 0.0),
            (0.0, 0.5),
            (0.0, 1.0),
            (1.0, 0.0),
            (1.0, 0.5),
            (1.0, 1.0)
        ]
    );
}

#[test]
fn output_is_deterministic() {
    let args = [
        "run",
        "--scheme",
        "feedforward",
        "--r",
        "0:4:0.25",
        "--gain",
        "optimal",
        "--eta",
        "0.9",
    ];
    assert_eq!(stdout(&args), stdout(&args));
    assert_eq!(stdout(&["table"]), stdout(&["table"]));
}

#[test]
fn config_file_with_flag_override() {
    let path = tmp("scenario.json");
    std::fs::write(
        &path,
        r#"{"scheme": "psa2", "r": [0.5, 1.0], "format": "json", "secret_means": [1.0, 3.0]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let rows = json(&["run", "--config", p]);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["scheme"], "psa2");
    let e = (-1.0f64).exp();
    assert!((num(&rows[0], "fidelity") - 1.0 / (1.0 + e)).abs() < 1e-9);

    let rows = json(&["run", "--config", p, "--r", "2"]);
    assert_eq!(rows.len(), 1);
    assert_eq!(num(&rows[0], "r"), 2.0);
}

#[test]
fn output_file_matches_stdout() {
    let path = tmp("table.csv");
    let _ = std::fs::remove_file(&path);
    let out = cvqss(&["table", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["table"]));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["run", "--eta", "2"][..],
        &["run", "--r", "1:0:0.5"],
        &["run", "--bogus"],
        &["run", "--config", "/nonexistent/scenario.json"],
        &["tv-curve", "--vm-db", "loud"],
        &["verify", "--fixture", "/nonexistent/fixture.json"],
    ] {
        let out = cvqss(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let path = tmp("unknown_field.json");
    std::fs::write(&path, r#"{"scheme": "mz12", "colour": "blue"}"#).unwrap();
    assert_eq!(
        cvqss(&["run", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn table_has_24_entries_with_infinite_variances() {
    let text = stdout(&["table"]);
    assert_eq!(text.lines().count(), 25);
    assert!(text.lines().any(|l| l.ends_with(",inf")));
    let rows = json(&["table", "--format", "json"]);
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().any(|r| r["v_q"].is_null()));
    let cell = rows
        .iter()
        .find(|r| r["players"] == "2,3" && r["regime"] == "clas_n")
        .unwrap();
    assert!((num(cell, "t_q") - 2.0 / 3.0).abs() < 1e-6);
    assert!((num(cell, "v_q") - 4.0).abs() < 1e-6);
    let perfect = rows
        .iter()
        .find(|r| r["players"] == "1,2" && r["regime"] == "quan_n")
        .unwrap();
    assert!((num(perfect, "t_q") - 2.0).abs() < 1e-12);
}

#[test]
fn tv_curve_series() {
    let rows = json(&[
        "tv-curve",
        "--squeezing-pct",
        "0,99",
        "--vm-db",
        "none",
        "--gains",
        "1,2.8284271247461903",
        "--format",
        "json",
    ]);
    assert_eq!(rows.len(), 6);
    let series: Vec<&str> = rows.iter().map(|r| r["series"].as_str().unwrap()).collect();
    assert_eq!(series, ["sp", "cp", "cp", "sp", "cp", "cp"]);
    assert!((num(&rows[0], "t_q") - 1.0).abs() < 1e-12);
    assert!((num(&rows[0], "v_q") - 0.25).abs() < 1e-12);
    let r = num(&rows[3], "r");
    assert!((r - 0.5 * 100f64.ln()).abs() < 1e-12);
    for row in &rows[4..] {
        let cf = closed_form(Scheme::Feedforward, r, 0.0, 1.0, num(row, "gain")).unwrap();
        assert!((num(row, "t_q") - cf.t_q).abs() < 1e-9);
        assert!((num(row, "v_q") - cf.v_q).abs() < 1e-9);
    }
}

#[test]
fn verifier_passes_and_catches_flipped_sign() {
    let out = cvqss(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["pass"], true);
    assert_eq!(summary["families"].as_array().unwrap().len(), 4);

    let flipped = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/golden_flipped.json");
    let out = cvqss(&["verify", "--fixture", flipped.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("[fixture]"), "{err}");
}
