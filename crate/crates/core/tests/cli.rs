use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qphase::io::{read_csv, StateFile};
use qphase::{BellState, EntanglementReport, QuantumState, C64};
use serde_json::Value;
use tempfile::TempDir;

const H: f64 = FRAC_1_SQRT_2;

fn qphase(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qphase"))
        .args(args)
        .output()
        .expect("spawn qphase")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn pure(amps: &[(f64, f64)]) -> QuantumState {
    QuantumState::Pure(amps.iter().map(|&(re, im)| C64::new(re, im)).collect())
}

fn normalized(amps: &[(f64, f64)]) -> QuantumState {
    QuantumState::normalized(amps.iter().map(|&(re, im)| C64::new(re, im)).collect()).unwrap()
}

fn write_state(dir: &TempDir, name: &str, state: &QuantumState) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, StateFile::from_state(state).to_json()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    assert!(!text.contains('\r'));
    read_csv(text).unwrap()
}

#[test]
fn phase_dist_examples() {
    let dir = TempDir::new().unwrap();
    let zero = write_state(&dir, "zero.json", &pure(&[(1.0, 0.0), (0.0, 0.0)]));
    let (header, rows) = csv_rows(&stdout(&qphase(&["phase-dist", "--state", s(&zero), "--points", "8"])));
    assert_eq!(header, ["phi", "p"]);
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert!((r[1] - 1.0 / TAU).abs() < 1e-15);
    }

    let plus = write_state(&dir, "plus.json", &pure(&[(H, 0.0), (H, 0.0)]));
    let out = dir.path().join("plus.csv");
    stdout(&qphase(&["phase-dist", "--state", s(&plus), "--points", "8", "--out", s(&out)]));
    let (_, rows) = csv_rows(&std::fs::read_to_string(&out).unwrap());
    assert!((rows[0][1] - 1.0 / PI).abs() < 1e-15);
    assert_eq!(rows[4][0], PI);
    assert!(rows[4][1].abs() < 1e-15);
}

#[test]
fn phase_dist_json() {
    let dir = TempDir::new().unwrap();
    let plus = write_state(&dir, "plus.json", &pure(&[(H, 0.0), (H, 0.0)]));
    let text = stdout(&qphase(&["phase-dist", "--state", s(&plus), "--json"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 64);
    // c = γ ρ01 = 1/2, so D = √(1 − 1/4).
    assert!((v["dispersion"].as_f64().unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
}

#[test]
fn phase_herm_examples() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (pure(&[(1.0, 0.0), (0.0, 0.0)]), [0.5, 0.5]),
        (pure(&[(H, 0.0), (0.0, H)]), [1.0, 0.0]),
        // bloch_state(π/2, −π/2)
        (pure(&[(H, 0.0), (0.0, -H)]), [0.0, 1.0]),
    ];
    for (i, (state, expected)) in cases.iter().enumerate() {
        let path = write_state(&dir, &format!("s{i}.json"), state);
        let v: Value = serde_json::from_str(&stdout(&qphase(&["phase-herm", "--state", s(&path)]))).unwrap();
        assert!((v["p_plus"].as_f64().unwrap() - expected[0]).abs() < 1e-15, "case {i}");
        assert!((v["p_minus"].as_f64().unwrap() - expected[1]).abs() < 1e-15, "case {i}");
    }
}

#[test]
fn joint_dist_examples() {
    let dir = TempDir::new().unwrap();
    let flat = 1.0 / (TAU * TAU);

    let mixed = write_state(&dir, "mixed.json", &QuantumState::maximally_mixed(2).unwrap());
    let (header, rows) = csv_rows(&stdout(&qphase(&["joint-dist", "--state", s(&mixed), "--points", "8"])));
    assert_eq!(header, ["phi_plus", "phi_minus", "p"]);
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| (r[2] - flat).abs() < 1e-15));

    let phi = write_state(&dir, "phi.json", &BellState::PhiPlus.state());
    let (_, rows) = csv_rows(&stdout(&qphase(&["joint-dist", "--state", s(&phi), "--points", "8"])));
    for r in rows.iter().filter(|r| r[0] == 0.0) {
        assert!((r[2] - 2.0 * flat).abs() < 1e-15);
    }

    let psi = write_state(&dir, "psi.json", &BellState::PsiPlus.state());
    let (_, rows) = csv_rows(&stdout(&qphase(&["joint-dist", "--state", s(&psi), "--points", "8"])));
    let at_pi: Vec<_> = rows.iter().filter(|r| r[1] == PI).collect();
    assert_eq!(at_pi.len(), 8);
    assert!(at_pi.iter().all(|r| r[2].abs() < 1e-15));
}

#[test]
fn exported_distributions_are_normalized() {
    let dir = TempDir::new().unwrap();
    let one = write_state(&dir, "one.json", &pure(&[(0.6, 0.0), (0.0, 0.8)]));
    let two = write_state(&dir, "two.json", &normalized(&[(0.5, 0.0), (0.5, 0.1), (0.1, 0.5), (0.7, 0.0)]));
    for points in ["8", "33", "64"] {
        let (_, rows) = csv_rows(&stdout(&qphase(&["phase-dist", "--state", s(&one), "--gamma", "0.7", "--points", points])));
        let n = rows.len() as f64;
        let total: f64 = rows.iter().map(|r| r[1]).sum::<f64>() * TAU / n;
        assert!((total - 1.0).abs() <= 1e-6, "1D {points}: {total}");

        let (_, rows) = csv_rows(&stdout(&qphase(&[
            "joint-dist", "--state", s(&two), "--gamma-a", "0.3", "--points", points,
        ])));
        assert_eq!(rows.len() as f64, n * n);
        let total: f64 = rows.iter().map(|r| r[2]).sum::<f64>() * (TAU / n).powi(2);
        assert!((total - 1.0).abs() <= 1e-6, "2D {points}: {total}");
    }
}

fn report(path: &Path) -> EntanglementReport {
    serde_json::from_str(&stdout(&qphase(&["entanglement", "--state", s(path)]))).unwrap()
}

#[test]
fn entanglement_examples() {
    let dir = TempDir::new().unwrap();
    let r = report(&write_state(&dir, "phi.json", &BellState::PhiPlus.state()));
    assert!((r.degree - 1.0).abs() < 1e-12 && (r.concurrence - 1.0).abs() < 1e-12);

    let r = report(&write_state(&dir, "zero.json", &pure(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)])));
    assert!(r.degree.abs() < 1e-12);

    // (H⊗I)|Φ+⟩: maximally entangled, yet C+ and C- cancel.
    let rotated = pure(&[(0.5, 0.0), (0.5, 0.0), (0.5, 0.0), (-0.5, 0.0)]);
    let r = report(&write_state(&dir, "rot.json", &rotated));
    assert!(r.degree.abs() < 1e-12);
    assert!((r.concurrence - 1.0).abs() < 1e-12);
}

#[test]
fn entanglement_report_round_trips() {
    let dir = TempDir::new().unwrap();
    let state = normalized(&[(0.3, 0.1), (0.2, -0.4), (0.5, 0.0), (0.1, 0.3)]);
    let path = write_state(&dir, "s.json", &state);
    let text = stdout(&qphase(&["entanglement", "--state", s(&path), "--gamma-a", "0.37", "--gamma-b", "0.91"]));
    let parsed: EntanglementReport = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(again.trim_end(), text.trim_end());
    let reparsed: EntanglementReport = serde_json::from_str(&again).unwrap();
    assert_eq!(reparsed, parsed);
}

#[test]
fn sweep_rows() {
    let (header, rows) = csv_rows(&stdout(&qphase(&["sweep-epsilon", "--steps", "11"])));
    assert_eq!(header, ["epsilon", "predicted", "computed", "concurrence"]);
    assert_eq!(rows.len(), 11);
    for r in &rows {
        assert!((r[2] - r[1]).abs() <= 1e-12, "{r:?}");
    }
    assert_eq!(rows[0][..2], [0.0, 0.0]);
    assert!(rows[0][2].abs() <= 1e-12);
    assert_eq!(rows[10][..2], [1.0, 1.0]);
    assert_eq!(rows[5][..2], [0.5, 0.5]);
    assert!((rows[5][3] - H).abs() < 1e-12);

    let text = stdout(&qphase(&["sweep-epsilon", "--steps", "3", "--sign", "minus", "--gamma-a", "0.5", "--json"]));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
}

#[test]
fn commands_are_deterministic() {
    let a = stdout(&qphase(&["validate", "--seed", "7"]));
    let b = stdout(&qphase(&["validate", "--seed", "7"]));
    let strip = |t: &str| {
        let mut v: Value = serde_json::from_str(t).unwrap();
        v.as_object_mut().unwrap().remove("elapsed_seconds");
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn validate_across_seeds() {
    for seed in 0..10 {
        let out = qphase(&["validate", "--seed", &seed.to_string()]);
        assert_eq!(out.status.code(), Some(0), "seed {seed}: {}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["passed"], Value::Bool(true));
        assert_eq!(v["seed"], seed);
    }
}

#[test]
fn strict_tolerances_fail_validation() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("tol.json");
    std::fs::write(&path, r#"{"norm": 1e-300}"#).unwrap();
    let out = qphase(&["--tolerances", s(&path), "validate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_64() {
    let dir = TempDir::new().unwrap();
    let zero = write_state(&dir, "zero.json", &pure(&[(1.0, 0.0), (0.0, 0.0)]));
    let neg = dir.path().join("neg.json");
    std::fs::write(&neg, r#"{"norm": -1e-12}"#).unwrap();

    let cases: Vec<Vec<&str>> = vec![
        vec!["--tolerances", s(&neg), "validate"],
        vec!["phase-dist", "--state", s(&zero), "--points", "4"],
        vec!["phase-dist", "--state", s(&zero), "--gamma", "0"],
        vec!["phase-dist", "--state", s(&zero), "--gamma", "1.5"],
        vec!["sweep-epsilon", "--steps", "1"],
        vec!["sweep-epsilon", "--sign", "sideways"],
        vec!["frobnicate"],
        vec![],
    ];
    for args in cases {
        assert_eq!(qphase(&args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(qphase(&["--help"]).status.code(), Some(0));
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let one = write_state(&dir, "one.json", &pure(&[(1.0, 0.0), (0.0, 0.0)]));
    let two = write_state(&dir, "two.json", &BellState::PhiPlus.state());
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "{\"qubits\": 1,\n\"type\": \"pure\",\n\"data\": [[1, 0], \"x\"]}").unwrap();
    let unnormalized = write_state(&dir, "big.json", &pure(&[(1.0, 0.0), (1.0, 0.0)]));
    let missing = dir.path().join("missing.json");

    let cases: [(Vec<&str>, &str); 5] = [
        (vec!["joint-dist", "--state", s(&one)], "2-qubit"),
        (vec!["phase-dist", "--state", s(&two)], "1-qubit"),
        (vec!["phase-herm", "--state", s(&garbage)], "data[1]"),
        (vec!["entanglement", "--state", s(&unnormalized)], "norm"),
        (vec!["phase-dist", "--state", s(&missing)], "missing.json"),
    ];
    for (args, needle) in cases {
        let out = qphase(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn basis_dependence_reports_divergence() {
    let v: Value = serde_json::from_str(&stdout(&qphase(&["basis-dependence"]))).unwrap();
    assert_eq!(v["maximally_entangled"], Value::Bool(true));
    assert!(v["degree"].as_f64().unwrap().abs() < 1e-12);
    assert!((v["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}
