use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;

use monolie::monogenic::{ck_extension, PolyMultivector};
use monolie::poly::Poly;

fn monolie(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_monolie"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn csv_rows(out: &Output) -> Vec<Vec<f64>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

const Z1: &str = r#"{"n": 2, "terms": [{"exp": [1, 0], "coeff": {"blade": 0, "re": 1.0, "im": 0.0}}]}"#;

#[test]
fn verify_clifford_exits_zero() {
    let out = monolie(&["verify", "clifford"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS") && !text.contains("FAIL"));
}

#[test]
fn lie_extend_matches_the_ck_extension() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write(dir.path(), "f.json", Z1);
    let points = write(dir.path(), "p.json", "[[0, 0.3, 0.1], [0.1, [0.2, 0.05], -0.1]]");
    let dec = dir.path().join("d.json");
    let out = monolie(
        &["lie", "decompose", "--poly", &poly, "--max-degree", "3", "--out", dec.to_str().unwrap()],
        &[],
    );
    assert!(out.status.success());
    let out = monolie(&["lie", "extend", "--dec", dec.to_str().unwrap(), "--points", &points, "--K", "20"], &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&out);
    let mut z1 = Poly::zero(2);
    z1.add_term(vec![1, 0], Complex64::new(1.0, 0.0));
    let ck = ck_extension(&PolyMultivector::from_vector_poly(&z1).unwrap()).unwrap();
    let pts = [
        [Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.0), Complex64::new(0.1, 0.0)],
        [Complex64::new(0.1, 0.0), Complex64::new(0.2, 0.05), Complex64::new(-0.1, 0.0)],
    ];
    for (row, p) in rows.iter().zip(&pts) {
        let expect = ck.eval(p).unwrap();
        // paravector columns: z_j as (re, im), blade e_j sits at mask 1 << (j - 1)
        for j in 0..3 {
            let mask = if j == 0 { 0 } else { 1 << (j - 1) };
            let got = Complex64::new(row[1 + 2 * j], row[2 + 2 * j]);
            assert!((got - expect.coeff(mask)).norm() < 1e-10);
        }
    }
}

#[test]
fn legendre_table_ends_at_one() {
    let out = monolie(&["legendre", "table", "--k", "5", "--n", "3", "--grid", "11"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    assert_eq!(fields[0].parse::<f64>().unwrap(), 1.0);
    assert_eq!(fields[1].parse::<f64>().unwrap(), 1.0);
    assert_eq!(fields[3], "true");
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn legendre_eval_accepts_negative_t() {
    let out = monolie(&["legendre", "eval", "--k", "3", "--n", "2", "--t", "-0.5"], &[]);
    assert!(out.status.success());
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-15);
}

#[test]
fn cauchy_transform_reproduces_a_monogenic_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let ck = monolie(&["extend", "ck", "--poly", &write(dir.path(), "f.json", Z1)], &[]);
    assert!(ck.status.success());
    let poly = write(dir.path(), "ck.json", &String::from_utf8(ck.stdout).unwrap());
    let points = write(dir.path(), "p.json", "[[0.1, 0.2, -0.1], [[0.05, 0.1], 0.2, 0]]");
    let out = monolie(&["cauchy", "transform", "--poly", &poly, "--points", &points, "--level", "24"], &[]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    // z_1 extends to x_1 - x_0 e_1
    assert!((rows[0][1] - 0.2).abs() < 1e-9);
    assert!((rows[0][3] + 0.1).abs() < 1e-9);
    assert!((rows[1][1] - 0.2).abs() < 1e-9 && (rows[1][3] + 0.05).abs() < 1e-9 && (rows[1][4] + 0.1).abs() < 1e-9);
}

#[test]
fn opcalc_run_returns_the_symmetrized_product() {
    let dir = tempfile::tempdir().unwrap();
    let tuple = write(
        dir.path(),
        "a.json",
        r#"{"n": 2, "d": 2, "matrices": [[[0.1, 0.2], [-0.05, 0]], [[0, -0.1], [0.15, 0.05]]]}"#,
    );
    let phi = write(
        dir.path(),
        "phi.json",
        r#"{"n": 2, "terms": [{"exp": [1, 1], "coeff": {"re": 1.0}}]}"#,
    );
    let out = monolie(&["opcalc", "run", "--tuple", &tuple, "--phi", &phi, "--r", "0.9"], &[("MONOLIE_THREADS", "2")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // (A1 A2 + A2 A1) / 2
    let expect = [[0.0175, 0.0], [0.00625, 0.0175]];
    for (i, row) in expect.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let entry = &doc["matrix"][i][j];
            assert!((entry[0].as_f64().unwrap() - v).abs() < 1e-9, "{i},{j}: {entry}");
            assert!(entry[1].as_f64().unwrap().abs() < 1e-9);
        }
    }
    assert!(doc["max_tail_ratio"].as_f64().unwrap() < 1.0);
}

#[test]
fn lie_geometry_commands() {
    let dir = tempfile::tempdir().unwrap();
    let points = write(dir.path(), "p.json", "[[[0.1, 0.2], 0.3, 0], [1.2, 0, 0]]");
    let out = monolie(&["lie", "member", "--points", &points], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with("true"));
    assert!(text.lines().nth(2).unwrap().ends_with("false"));
    let out = monolie(&["lie", "gamma", "--points", &points], &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("0,ball,"));
    assert!(text.lines().nth(2).unwrap().starts_with("1,point,"));
}

#[test]
fn output_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let out = monolie(&["verify", "geometry", "--seed", "7", "--out", path.to_str().unwrap()], &[]);
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(monolie(&["nonsense"], &[]).status.code(), Some(2));
    assert_eq!(monolie(&["lie", "norm", "--points", "/nonexistent.json"], &[]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(monolie(&["extend", "ck", "--poly", &bad], &[]).status.code(), Some(2));
    assert_eq!(monolie(&["verify", "nosuchsuite"], &[]).status.code(), Some(2));
    // numerical failure after valid parsing
    let tuple = write(dir.path(), "a.json", r#"{"n": 1, "d": 1, "matrices": [[[0.5]]]}"#);
    let phi = write(dir.path(), "phi.json", r#"{"n": 1, "terms": [{"exp": [0], "coeff": {"re": 1.0}}]}"#);
    assert_eq!(monolie(&["opcalc", "run", "--tuple", &tuple, "--phi", &phi], &[]).status.code(), Some(1));
}
