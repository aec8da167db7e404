use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn laxkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laxkit")).args(args).output().expect("spawn laxkit")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn json(out: &Output) -> Value {
    assert!(out.status.code().is_some(), "killed: {out:?}");
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn toda_flow_is_isospectral() {
    let out = laxkit(&["flow", "--builtin", "toda-periodic", "-N", "4", "--t-end", "2"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["laxkit_report"], 1);
    assert_eq!(v["command"], "flow");
    assert!(v["isospectral_drift"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["steps"], 2000);
}

#[test]
fn kvm_flow_conserves_three_integrals() {
    let out = laxkit(&["flow", "--builtin", "kvm", "--t-end", "2", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let drift = v["invariant_drift"].as_object().unwrap();
    assert_eq!(drift.len(), 3);
    for (name, d) in drift {
        assert!(d.as_f64().unwrap() < 1e-9, "{name}: {d}");
    }
    let poly = v["kvm_curve"]["polynomial"].as_array().unwrap();
    assert_eq!(poly.len(), 7);
    assert_eq!(poly[6].as_f64(), Some(1.0));
}

#[test]
fn rank_two_flows_with_given_initial_point() {
    // x on the unit sphere, y tangent
    let out = laxkit(&["flow", "--builtin", "neumann", "-N", "3", "--x0", "0.6,0.8,0,-0.4,0.3,0.5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["isospectral_relative_drift"].as_f64().unwrap() < 1e-8);
    let out = laxkit(&["flow", "--builtin", "neumann", "-N", "3", "--x0", "1,2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn flow_rejects_bad_steps() {
    for dt in ["0", "-1e-3", "nan"] {
        let out = laxkit(&["flow", "--builtin", "toda-periodic", "--dt", dt]);
        assert_eq!(code(&out), 1, "dt = {dt}");
        assert!(out.stdout.is_empty());
    }
    let out = laxkit(&["flow", "--builtin", "henon-heiles"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bind A="));
}

#[test]
fn tight_tolerance_is_a_negative_report() {
    let dir = scratch("tight");
    let out = laxkit(&["--out", dir.to_str().unwrap(), "flow", "--builtin", "toda-periodic", "--tol", "1e-30"]);
    assert_eq!(code(&out), 2);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("flow-toda-periodic.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn flow_csv_and_gnuplot() {
    let dir = scratch("gnuplot");
    let d = dir.to_str().unwrap();
    let out = laxkit(&["--out", d, "--bind", "A=1/4", "flow", "--builtin", "henon-heiles", "--stride", "100", "--gnuplot"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.join("flow-henon-heiles.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,y1,y2,x1,x2,H1,H2"));
    assert_eq!(lines.count(), 11);
    let gp = std::fs::read_to_string(dir.join("flow-henon-heiles.gp")).unwrap();
    assert!(gp.contains("'flow-henon-heiles.csv' using 1:7"));
}

#[test]
fn jacobi_free_matrix_matches_fraction() {
    let out = laxkit(&["jacobi", "-a", "1,1", "-b", "0,0", "--a0", "1", "--check-stieltjes"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let s = &v["spectral"]["stieltjes"];
    assert!(s["max_residual"].as_f64().unwrap() < 1e-6);
    assert!(s["mass_error"].as_f64().unwrap() < 1e-8);
    // the gap closes at 0
    assert_eq!(v["spectral"]["atoms"].as_array().unwrap().len(), 0);
}

#[test]
fn jacobi_decimal_input_is_exact() {
    let out = laxkit(&["jacobi", "-a", "1,2,3", "-b", "0.5,-0.5,0", "--orthogonality", "5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("j,band_lo,band_hi,"));
    let bands: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[1].parse().unwrap(), c[2].parse().unwrap())
        })
        .collect();
    for w in bands.windows(2) {
        assert!(w[0].1 <= w[1].0 && w[0].0 < w[0].1);
    }
}

#[test]
fn jacobi_input_file_and_toda() {
    let dir = scratch("jacobi-input");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.json");
    std::fs::write(&path, r#"{"a": [1, "1/2", 0.75], "b": [0, 1, -1]}"#).unwrap();
    let out = laxkit(&["jacobi", "--input", path.to_str().unwrap(), "--toda", "--t-end", "0.5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["toda"]["band_edge_drift"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["spectral"]["a0"], 0.75);
}

#[test]
fn jacobi_rejects_degenerate_input() {
    for args in [&["jacobi", "-a", "1,0", "-b", "0,0"][..], &["jacobi", "-a", "1,1", "-b", "0"], &["jacobi", "-a", "1,x", "-b", "0,0"]] {
        let out = laxkit(args);
        assert_eq!(code(&out), 1, "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn painleve_henon_heiles_series() {
    let out = laxkit(&["painleve", "--builtin", "henon-heiles", "--order", "8"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["obstructions"], 0);
    assert_eq!(v["principal_explicit"], 3);
    let principal = v["weight_vectors"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|w| w["balances"].as_array().unwrap())
        .find(|b| b["principal"] == true)
        .unwrap();
    assert!(principal["family"]["series"]["y1"].as_object().unwrap().len() > 1);
    assert!(principal["curve"]["canonical"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn painleve_rdg_two_sheets_and_morphism() {
    let out = laxkit(&["painleve", "--builtin", "rdg", "--morphism"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!(v["weight_vectors"].as_array().unwrap().iter().any(|w| w["ell"] == 2));
    assert_eq!(v["morphism"]["chain_rule"], true);
}

#[test]
fn painleve_user_file() {
    let dir = scratch("painleve-file");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("osc.ivf");
    std::fs::write(&path, "system osc\nvars x y\neq x = y\neq y = -x^3\ninvariant H = 1/2*y^2 + 1/4*x^4\n").unwrap();
    let out = laxkit(&["painleve", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("weights,balance,sheet,var,exponent,coefficient"));
}

#[test]
fn missing_input_writes_nothing() {
    let dir = scratch("missing");
    let out = laxkit(&["--out", dir.to_str().unwrap(), "painleve", "no-such-file.ivf"]);
    assert_eq!(code(&out), 1);
    assert!(!dir.exists() || std::fs::read_dir(&dir).unwrap().next().is_none());
}

#[test]
fn check_subset_and_tolerance_override() {
    let out = laxkit(&["check", "--only", "painleve", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(": PASS")).count(), 5);
    let out = laxkit(&["check", "--only", "7", "--tol", "1e-16"]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["failed"], 1);
    let out = laxkit(&["check", "--only", "banana"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn reports_are_deterministic() {
    let a = laxkit(&["--seed", "3", "jacobi", "-N", "3", "--check-stieltjes"]);
    let b = laxkit(&["--seed", "3", "jacobi", "-N", "3", "--check-stieltjes"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = laxkit(&["--seed", "4", "jacobi", "-N", "3", "--check-stieltjes"]);
    assert_ne!(a.stdout, c.stdout);
}
