use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn phasecat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasecat")).args(args).output().expect("run phasecat")
}

fn run_ok(args: &[&str]) {
    let out = phasecat(args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn read_validated(path: &Path, schema_name: &str) -> Value {
    let doc: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema(schema_name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{} violates {schema_name}: {errors:?}", path.display());
    doc
}

fn write_config(dir: &TempDir, body: &str) -> PathBuf {
    let p = dir.path().join("config.json");
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn profile_writes_constants_and_table() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out");
    run_ok(&["profile", "--out", s(&out), "--tmax", "12"]);
    let c = read_validated(&out.join("constants.json"), "constants");
    assert!((c["c0"].as_f64().unwrap() - 0.942_809_041_582_063).abs() < 1e-12);
    assert!((c["psi1"]["slope_at_origin"].as_f64().unwrap() + 0.417_803_168_583_516).abs() < 1e-10);

    let mut rdr = csv::Reader::from_path(out.join("profile.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["t", "w", "dw", "psi1", "dpsi1"]);
    let ts: Vec<f64> = rdr.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
    assert_eq!(ts.first(), Some(&-12.0));
    assert_eq!(ts.last(), Some(&12.0));
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, r#"{"tolerances": {"quadrature": 0}}"#);
    let out = phasecat(&["profile", "--config", s(&cfg), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("quadrature"));

    let cfg = write_config(&dir, r#"{"alpha": [0.1]}"#);
    assert_eq!(phasecat(&["solve", "--config", s(&cfg)]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(phasecat(&["place", "--config", s(&missing)]).status.code(), Some(2));
    assert_eq!(phasecat(&["profile", "--tmax", "3", "--out", s(dir.path())]).status.code(), Some(2));
    assert_eq!(phasecat(&["place", "--modes", "x", "--out", s(dir.path())]).status.code(), Some(2));
    assert_eq!(phasecat(&["place", "--jobs", "0", "--out", s(dir.path())]).status.code(), Some(2));
    // nothing was written by the rejected runs
    assert!(!dir.path().join("constants.json").exists());
}

#[test]
fn place_reports_the_critical_ball() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, r#"{"domain": {"shape": "ball", "a": 2.1717}}"#);
    run_ok(&["place", "--config", s(&cfg), "--out", s(dir.path())]);
    let p = read_validated(&dir.path().join("place.json"), "place");
    assert_eq!(p["found"], Value::Bool(true));
    assert!((p["placement"]["y_bar"].as_f64().unwrap() - 1.5089).abs() < 1e-3);
    assert!((p["determinant"].as_f64().unwrap() + 0.285).abs() < 1e-3);
    assert_eq!(p["nondegenerate"], Value::Bool(true));
    assert_eq!(p["spectrum"]["modes"].as_array().unwrap().len(), 1);
}

#[test]
fn place_modes_flag_lists_each_mode() {
    let dir = TempDir::new().unwrap();
    run_ok(&["place", "--modes", "0..3", "--out", s(dir.path())]);
    let p = read_validated(&dir.path().join("place.json"), "place");
    let modes = p["spectrum"]["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 4);
    for (m, entry) in modes.iter().enumerate() {
        assert_eq!(entry["mode"].as_u64(), Some(m as u64));
        assert_eq!(entry["eigenvalues"].as_array().unwrap().len(), 4);
    }
    // rotations of the ball leave a mode-1 kernel; the axisymmetric verdict stands
    assert_eq!(p["nondegenerate"], Value::Bool(true));
    assert_eq!(p["spectrum"]["nondegenerate"], Value::Bool(false));
}

#[test]
fn place_without_critical_catenoid_is_not_an_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, r#"{"domain": {"shape": "ellipsoid", "a": 1, "b": 5}}"#);
    run_ok(&["place", "--config", s(&cfg), "--out", s(dir.path())]);
    let p = read_validated(&dir.path().join("place.json"), "place");
    assert_eq!(p["found"], Value::Bool(false));
    assert!(p["reason"].as_str().unwrap().contains("no critical catenoid"));
}

#[test]
fn place_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_ok(&["place", "--modes", "0..2", "--out", s(&a)]);
    run_ok(&["place", "--modes", "0..2", "--out", s(&b)]);
    assert_eq!(fs::read(a.join("place.json")).unwrap(), fs::read(b.join("place.json")).unwrap());
}

#[test]
fn residual_slopes_with_and_without_psi1() {
    let dir = TempDir::new().unwrap();
    let on = dir.path().join("on");
    run_ok(&["residual", "--out", s(&on)]);
    let with = read_validated(&on.join("slopes.json"), "slopes");
    assert!(with["interior_slope"].as_f64().unwrap() >= 3.5);
    let rows = csv::Reader::from_path(on.join("residuals.csv")).unwrap().records().count();
    assert_eq!(rows, 3);

    let cfg = write_config(&dir, r#"{"with_psi1": false}"#);
    let off = dir.path().join("off");
    run_ok(&["residual", "--config", s(&cfg), "--out", s(&off)]);
    let without = read_validated(&off.join("slopes.json"), "slopes");
    assert!((without["interior_slope"].as_f64().unwrap() - 2.0).abs() < 0.3);
}

#[test]
fn solve_reports_energies_and_distances() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, r#"{"alphas": [0.2, 0.15]}"#);
    run_ok(&["solve", "--config", s(&cfg), "--out", s(dir.path()), "--jobs", "2"]);
    let r = read_validated(&dir.path().join("report.json"), "report");
    assert_eq!(r["all_converged"], Value::Bool(true));
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert!(row["report"]["energy"].as_f64().unwrap() > 20.0);
        assert!(row["report"]["interface_distance"].as_f64().unwrap() < 0.05);
    }
    let mut rdr = csv::Reader::from_path(dir.path().join("solve.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap().get(0), Some("alpha"));
    assert_eq!(rdr.records().count(), 2);
}

#[test]
fn solve_failure_exits_with_code_1_and_keeps_the_report() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, r#"{"alphas": [0.2], "tolerances": {"max_iter": 1}}"#);
    let out = phasecat(&["solve", "--config", s(&cfg), "--out", s(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
    let r = read_validated(&dir.path().join("report.json"), "report");
    assert_eq!(r["all_converged"], Value::Bool(false));
    assert!(r["rows"][0]["failure"].as_str().unwrap().contains("stagnated"));
}

#[test]
fn shipped_config_schema_matches_the_parser() {
    let validator = jsonschema::validator_for(&schema("config")).unwrap();
    let good: Value = serde_json::from_str(
        r#"{"domain": {"shape": "ellipsoid", "a": 2, "b": 2.5}, "alphas": [0.2, 0.1],
            "tolerances": {"newton": 1e-10}, "modes": [0, 1], "seed": "previous"}"#,
    )
    .unwrap();
    assert!(validator.is_valid(&good));
    let unknown: Value = serde_json::from_str(r#"{"alpha": [0.1]}"#).unwrap();
    assert!(!validator.is_valid(&unknown));
    let no_b: Value = serde_json::from_str(r#"{"domain": {"shape": "ellipsoid", "a": 2}}"#).unwrap();
    assert!(!validator.is_valid(&no_b));
}
