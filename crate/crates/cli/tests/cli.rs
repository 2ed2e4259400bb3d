use std::path::Path;
use std::process::{Command, Output};

fn wcolab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wcolab")).args(args).current_dir(dir).output().expect("spawn wcolab")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

const PARABOLIC: &str = r#"{
  "name": "parabolic",
  "space": {"type": "hardy"},
  "phi": {"type": "lft", "coeffs": [[1,0],[1,0],[-1,0],[3,0]]},
  "psi": {"type": "poly", "coeffs": [[1,0]]},
  "N": 48, "M": 12,
  "checks": ["normaloid:NOT_NORMALOID", "normaloid_inequality:VIOLATED", "kernel_adjoint"]
}"#;

#[test]
fn diagnose_holds_expectations() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", PARABOLIC);
    let out = wcolab(&["diagnose", &s], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_expectations_hold"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
    assert_eq!(v["classification"]["kind"], "NonAutoBoundaryContact");
}

#[test]
fn failed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let s =
        write(dir.path(), "s.json", &PARABOLIC.replace("normaloid:NOT_NORMALOID", "normaloid:NORMALOID_CONSISTENT"));
    let out = wcolab(&["diagnose", &s], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL normaloid"));
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", &PARABOLIC.replace(r#""type": "hardy""#, r#""type": "dirichlet""#));
    let out = wcolab(&["classify", &s], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("space.type"));

    let s = write(dir.path(), "t.json", &PARABOLIC.replace(r#""M": 12"#, r#""M": 40"#));
    let out = wcolab(&["classify", &s], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at N"));
}

#[test]
fn non_self_maps_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", &PARABOLIC.replace("[[1,0],[1,0],[-1,0],[3,0]]", "[[2,0],[0,0],[0,0],[1,0]]"));
    let out = wcolab(&["classify", &s], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a self-map"));
}

#[test]
fn sweep_writes_csv_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", PARABOLIC);
    let out = wcolab(
        &["sweep", &s, "--orders", "16,32", "--k-max", "4", "--csv", "c.csv", "--export-matrix", "m.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert!(csv.starts_with("n_or_k,metric,value\n"));
    assert_eq!(csv.lines().filter(|l| l.contains("gelfand_radius")).count(), 4);
    assert!(csv.lines().any(|l| l.starts_with("32,kernel_adjoint_max_residual,")));
    assert!(csv.lines().any(|l| l.starts_with("32,kernel_defect_max,")));
    let m = std::fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert_eq!(m.lines().count(), 1 + 48 * 48);
}

#[test]
fn report_requires_out_and_verify_rejects_tol() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", PARABOLIC);
    assert_eq!(wcolab(&["report", &s], dir.path()).status.code(), Some(2));
    let out = wcolab(&["report", &s, "--out", "r.json", "--orders", "16,32"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert!(v["defects"].is_object());
    assert!(v["convergence"].is_array());
    assert!(v["timestamp"].is_string());
    assert_eq!(wcolab(&["verify", "zero-free", "--tol", "commutator=1"], dir.path()).status.code(), Some(2));
    assert_eq!(wcolab(&["verify", "no-such-preset"], dir.path()).status.code(), Some(2));
}

#[test]
fn tolerance_override_changes_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "s.json", &PARABOLIC.replace(r#""kernel_adjoint""#, r#""hyponormality:NEITHER""#));
    assert_eq!(wcolab(&["diagnose", &s], dir.path()).status.code(), Some(0));
    let out = wcolab(&["diagnose", &s, "--tol", "commutator=10"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}
