//! End-to-end checks of the command-line surface: flags, output contracts,
//! and exit codes.

use std::process::{Command, Output};

fn pitlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pitlab"))
        .args(args)
        .output()
        .expect("spawn pitlab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn eval_default_family_emits_json() {
    let out = pitlab(&["eval", "--z", "1.0,0.5"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["re"].is_f64() && v["im"].is_f64());
    assert!(v["truncation_bound"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["unresolved"], serde_json::Value::Bool(false));
}

#[test]
fn eval_rejects_malformed_point_with_json_error() {
    let out = pitlab(&["eval", "--z", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert!(err["error"].as_str().unwrap().contains("--z"));
    assert_eq!(err["kind"], "config");
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = pitlab(&["eval", "--zz", "1,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_selects_family_and_alpha_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("family.json");
    std::fs::write(
        &path,
        r#"{"phase":{"kind":"rational","p":1,"q":1},"modulus":{"kind":"factorial"},"precision_bits":128}"#,
    )
    .unwrap();
    // p = q = 1 gives f = exp, so f(1) = e.
    let out = pitlab(&["eval", "--z", "1,0", "--config", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["re"].as_f64().unwrap() - std::f64::consts::E).abs() < 1e-12);

    // --alpha replaces the configured phase: alpha = 1/2 gives f(z) with
    // coefficient phases e^{i pi n^2}, i.e. f(1) = cosh(1) - sinh(1) terms
    // rearranged; just check it no longer evaluates to e.
    let out = pitlab(&[
        "eval", "--z", "1,0", "--config", path.to_str().unwrap(), "--alpha", "1/2",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["re"].as_f64().unwrap() - std::f64::consts::E).abs() > 0.1);
}

#[test]
fn grid_csv_contract() {
    let out = pitlab(&["grid", "--rmin", "1", "--rmax", "2", "--nr", "3", "--ntheta", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "r,theta,log_abs_f,flag,trunc_bound,round_bound");
    assert_eq!(lines.count(), 3 * 8);
}

#[test]
fn zeros_csv_and_json_contracts() {
    let dir = tempfile::tempdir().unwrap();
    let out = pitlab(&["zeros", "--rmax", "4"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "re,im,multiplicity,newton_residual,enclosure_radius"
    );
    let n_csv = text.lines().count() - 1;

    let json_path = dir.path().join("zeros.json");
    let out = pitlab(&["zeros", "--rmax", "4", "--out", json_path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(v["zeros"].as_array().unwrap().len(), n_csv);
    assert!(v["completeness_certificate"].is_boolean());
    assert!(v["search_box"].is_object());
}

#[test]
fn zeros_sector_restricts_results() {
    let out = pitlab(&["zeros", "--rmax", "5", "--sector", "0.0,1.0"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    for line in stdout(&out).lines().skip(1) {
        let cols: Vec<f64> =
            line.split(',').take(2).map(|c| c.parse().unwrap()).collect();
        let theta = cols[1].atan2(cols[0]);
        assert!((0.0..=1.0).contains(&theta), "zero outside sector: {line}");
    }
}

#[test]
fn indicator_csv_contract() {
    let out = pitlab(&["indicator", "--rwindow", "2,4", "--ntheta", "64"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "theta,h_est,n_samples,indeterminate");
    assert_eq!(lines.count(), 64);
}

#[test]
fn ratio_csv_contract() {
    let out = pitlab(&["ratio", "--r", "2,4,8"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "r,logM,m2,ratio");
    assert_eq!(lines.count(), 3);
}

#[test]
fn ratio_rejects_unsorted_radii() {
    let out = pitlab(&["ratio", "--r", "8,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pits_reports_components() {
    let out = pitlab(&[
        "pits", "--delta", "0.3", "--eta", "0.5", "--rmin", "2", "--rmax", "3", "--nr",
        "5", "--ntheta", "64",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["covering_sum"].is_f64());
    assert!(v["pits"].is_array());
}

#[test]
fn trigsum_reduces_rational_phase() {
    let out = pitlab(&["trigsum", "--p", "1", "--q", "2"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // alpha = 1/2 gives phases (-1)^n, so f collapses to the single
    // exponential e^{-z}.
    assert_eq!(v["period"], 2);
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);

    let out = pitlab(&["trigsum", "--p", "2", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2), "non-coprime p/q must be rejected");
}

#[test]
fn verify_rejects_unknown_suite() {
    let out = pitlab(&["verify", "--suite", "medium"]);
    assert_eq!(out.status.code(), Some(2));
}
