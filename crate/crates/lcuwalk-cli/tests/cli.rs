//! End-to-end tests of the `lcuwalk` binary: exit codes, JSON round-trips,
//! and deterministic seeded output.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lcuwalk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

fn pauli_z_file(dir: &Path) -> String {
    let p = dir.join("h.json");
    write(&p, r#"{"n": 1, "entries": [[0, 0, 1.0, 0.0], [1, 1, -1.0, 0.0]]}"#);
    p.to_str().unwrap().to_string()
}

#[test]
fn evolve_reports_and_writes_state() {
    let dir = tempfile::tempdir().unwrap();
    let h = pauli_z_file(dir.path());
    let state_out = dir.path().join("out.json");
    let out = run(&[
        "evolve", "--input", &h, "--t", "1.0", "--eps", "1e-6", "--basis", "0",
        "--oracle-check", "--out", state_out.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["r"], 2);
    assert!(report["final_error"].as_f64().unwrap() < 1e-6);
    // e^{-iZ}|0> = e^{-i}|0>: amplitude (cos 1, -sin 1).
    let state: serde_json::Value = serde_json::from_str(&fs::read_to_string(&state_out).unwrap()).unwrap();
    let amps = state["amplitudes"].as_array().unwrap();
    assert!((amps[0][0].as_f64().unwrap() - 1f64.cos()).abs() < 1e-6);
    assert!((amps[0][1].as_f64().unwrap() + 1f64.sin()).abs() < 1e-6);
    assert!(amps[1][0].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn evolve_state_file_round_trip_composes() {
    // evolve(t=0.5) twice == evolve(t=1.0), passing the state through JSON.
    let dir = tempfile::tempdir().unwrap();
    let h = pauli_z_file(dir.path());
    let s1 = dir.path().join("s1.json");
    let s2 = dir.path().join("s2.json");
    let s_full = dir.path().join("sfull.json");
    let start = dir.path().join("start.json");
    write(&start, r#"{"amplitudes": [[0.6, 0.0], [0.0, 0.8]]}"#);
    for (t, input, out) in [
        ("0.5", start.to_str().unwrap().to_string(), &s1),
        ("0.5", s1.to_str().unwrap().to_string(), &s2),
        ("1.0", start.to_str().unwrap().to_string(), &s_full),
    ] {
        let r = run(&[
            "evolve", "--input", &h, "--t", t, "--eps", "1e-8", "--state", &input,
            "--out", out.to_str().unwrap(),
        ]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    }
    let a: serde_json::Value = serde_json::from_str(&fs::read_to_string(&s2).unwrap()).unwrap();
    let b: serde_json::Value = serde_json::from_str(&fs::read_to_string(&s_full).unwrap()).unwrap();
    for i in 0..2 {
        for c in 0..2 {
            let x = a["amplitudes"][i][c].as_f64().unwrap();
            let y = b["amplitudes"][i][c].as_f64().unwrap();
            assert!((x - y).abs() < 1e-7, "component ({i},{c}): {x} vs {y}");
        }
    }
}

#[test]
fn missing_input_exits_1() {
    let out = run(&["evolve", "--input", "/nonexistent/h.json", "--t", "1", "--eps", "1e-4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn non_hermitian_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    // (0,1) and (1,0) listed inconsistently.
    write(
        &p,
        r#"{"n": 1, "entries": [[0, 1, 1.0, 0.0], [1, 0, 2.0, 0.0]]}"#,
    );
    let out = run(&["evolve", "--input", p.to_str().unwrap(), "--t", "1", "--eps", "1e-4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn duplicate_entry_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dup.json");
    write(
        &p,
        r#"{"n": 1, "entries": [[0, 0, 1.0, 0.0], [0, 0, 1.0, 0.0]]}"#,
    );
    let out = run(&["evolve", "--input", p.to_str().unwrap(), "--t", "1", "--eps", "1e-4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn near_normalized_state_warns_but_runs() {
    let dir = tempfile::tempdir().unwrap();
    let h = pauli_z_file(dir.path());
    let s = dir.path().join("s.json");
    // Norm differs from 1 by ~5e-8: accepted with a warning, renormalized.
    write(&s, r#"{"amplitudes": [[1.00000005, 0.0], [0.0, 0.0]]}"#);
    let out = run(&["evolve", "--input", &h, "--t", "1", "--eps", "1e-4", "--state", s.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("renormaliz"));
    // --strict-norm rejects the same state.
    let strict = run(&[
        "evolve", "--input", &h, "--t", "1", "--eps", "1e-4",
        "--state", s.to_str().unwrap(), "--strict-norm",
    ]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn walk_check_passes_on_valid_input() {
    let dir = tempfile::tempdir().unwrap();
    let h = pauli_z_file(dir.path());
    let out = run(&["walk-check", "--input", &h]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["isometry_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn bessel_table_accepts_negative_z() {
    let out = run(&["bessel-table", "--z", "-0.5", "--k", "8"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(table["max_difference"].as_f64().unwrap() <= 1e-13);
}

#[test]
fn estimate_matches_evolve_counters() {
    let dir = tempfile::tempdir().unwrap();
    let h = pauli_z_file(dir.path());
    let est = run(&["estimate", "--input", &h, "--t", "1.0", "--eps", "1e-6"]);
    let run_out = run(&["evolve", "--input", &h, "--t", "1.0", "--eps", "1e-6", "--basis", "0"]);
    assert!(est.status.success() && run_out.status.success());
    let e: serde_json::Value = serde_json::from_slice(&est.stdout).unwrap();
    let r: serde_json::Value = serde_json::from_slice(&run_out.stdout).unwrap();
    assert_eq!(e["counters"], r["counters"]);
}

#[test]
fn apply_unitary_matches_direct_product() {
    let dir = tempfile::tempdir().unwrap();
    // Pauli X as the unitary.
    let u = dir.path().join("u.json");
    write(&u, r#"{"dim": 2, "entries": [[0, 1, 1.0, 0.0], [1, 0, 1.0, 0.0]]}"#);
    let out = run(&["apply-unitary", "--input", u.to_str().unwrap(), "--eps", "1e-5", "--basis", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let state: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let amps = state["amplitudes"].as_array().unwrap();
    // X|0> = |1>.
    assert!(amps[0][0].as_f64().unwrap().abs() < 1e-5);
    assert!((amps[1][0].as_f64().unwrap().abs() - 1.0).abs() < 1e-5);
}

#[test]
fn norm_check_ensemble_is_seed_deterministic() {
    let a = run(&["norm-check", "--trials", "10", "--d", "2", "--dim", "8", "--seed", "7"]);
    let b = run(&["norm-check", "--trials", "10", "--d", "2", "--dim", "8", "--seed", "7"]);
    let c = run(&["norm-check", "--trials", "10", "--d", "2", "--dim", "8", "--seed", "8"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}
