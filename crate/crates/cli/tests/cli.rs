use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use harmap_core::{qc_constant, Grid, HarmonicMap, QcConstant};
use serde_json::Value;
use tempfile::TempDir;

fn harmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmap"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn value_of(out: &Output) -> f64 {
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    v["value"].as_f64().unwrap()
}

#[test]
fn functional_identity_area_and_length() {
    let dir = TempDir::new().unwrap();
    let id = write(dir.path(), "id.json", r#"{"a":[[0,0],[1,0]],"b":[[0,0]]}"#);
    let out = harmap(&["functional", "--map", &id, "--name", "area", "--r", "0.7"]);
    assert!(out.status.success());
    assert!((value_of(&out) - 0.49).abs() < 1e-15);
    let out = harmap(&["functional", "--map", &id, "--name", "length", "--r", "0.5"]);
    assert!((value_of(&out) - std::f64::consts::PI).abs() < 1e-14);
}

#[test]
fn functional_bloch_of_affine_map() {
    let dir = TempDir::new().unwrap();
    let aff = write(
        dir.path(),
        "aff.json",
        r#"{"a":[[0,0],[1.25,0]],"b":[[0.75,0]]}"#,
    );
    let out = harmap(&["functional", "--map", &aff, "--name", "bloch"]);
    assert!(out.status.success());
    assert!((value_of(&out) - 2.0).abs() < 1e-12);
}

#[test]
fn functional_emits_table() {
    let dir = TempDir::new().unwrap();
    let id = write(dir.path(), "id.json", r#"{"a":[[0,0],[1,0]],"b":[[0,0]]}"#);
    let table = dir.path().join("t.csv");
    let out = harmap(&[
        "functional",
        "--map",
        &id,
        "--name",
        "area",
        "--emit-table",
        table.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(table).unwrap();
    assert!(text.starts_with("r,area,length,isoperimetric_rhs,three_circles_rhs\n"));
    assert_eq!(text.lines().count(), 100);
}

#[test]
fn functional_input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"a":[[0,0],[1,0]"#);
    assert_eq!(
        harmap(&["functional", "--map", &bad, "--name", "area"])
            .status
            .code(),
        Some(2)
    );
    let id = write(dir.path(), "id.json", r#"{"a":[[0,0],[1,0]],"b":[[0,0]]}"#);
    assert_eq!(
        harmap(&["functional", "--map", &id, "--name", "area", "--r", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        harmap(&["functional", "--map", &id, "--name", "volume"])
            .status
            .code(),
        Some(2)
    );
    let missing = dir.path().join("nope.json");
    assert_eq!(
        harmap(&[
            "functional",
            "--map",
            missing.to_str().unwrap(),
            "--name",
            "area"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn verify_builtin_trio_passes_with_equality_rows() {
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        r#"{"suites":["three-circles","hardy-area","coeff-bound","gradient-bound","isoperimetric"],
            "maps":{"builtin":["identity","affine-extremal","dilation"]}}"#,
    );
    let out = harmap(&["verify", "--config", &config]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows: Vec<Value> = out
        .stdout
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).unwrap())
        .collect();
    assert!(rows.iter().all(|r| r["status"] == "pass"));
    let eq = |name: &str| {
        rows.iter().find(|r| r["name"] == name).unwrap()["equality"]
            .as_bool()
            .unwrap()
    };
    assert!(eq("identity/three-circles[r1=0.1,r=0.3]"));
    assert!(eq("identity/hardy-area"));
    assert!(eq("affine-extremal/three-circles[r1=0.3,r=0.9]"));
}

#[test]
fn verify_csv_columns() {
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        r#"{"suites":["hardy-area"],"maps":{"builtin":["identity"]}}"#,
    );
    let report = dir.path().join("r.csv");
    let out = harmap(&[
        "verify",
        "--config",
        &config,
        "--format",
        "csv",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(report).unwrap();
    assert_eq!(
        text,
        "name,n,lhs,rhs,margin,status\nidentity/hardy-area,,1,1,0,pass\n"
    );
}

#[test]
fn verify_config_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        r#"{"suites":["no-such-suite"],"maps":{"builtin":["identity"]}}"#,
    );
    assert_eq!(
        harmap(&["verify", "--config", &config]).status.code(),
        Some(2)
    );
    let config = write(
        dir.path(),
        "d.json",
        r#"{"suites":["hardy-area"],"maps":{}}"#,
    );
    assert_eq!(
        harmap(&["verify", "--config", &config]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_rejects_bad_thread_count() {
    let dir = TempDir::new().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        r#"{"suites":["hardy-area"],"maps":{"builtin":["identity"]}}"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_harmap"))
        .args(["verify", "--config", &config])
        .env("HARMAP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn fuzz_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let res = harmap(&[
            "fuzz",
            "--count",
            "2",
            "--degree",
            "1",
            "--seed",
            "7",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(res.status.success());
    }
    let files = read_dir_bytes(&a);
    assert_eq!(files.len(), 3);
    assert_eq!(files, read_dir_bytes(&b));
}

#[test]
fn fuzz_dominance_and_target_k() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m");
    let res = harmap(&[
        "fuzz",
        "--count",
        "20",
        "--degree",
        "6",
        "--seed",
        "1",
        "--dominance",
        "--target-k",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(res.status.success());
    for (name, bytes) in read_dir_bytes(&out) {
        if name == "manifest.json" {
            continue;
        }
        let text = String::from_utf8(bytes).unwrap();
        let f = HarmonicMap::from_json(&text).unwrap();
        assert!((1..=f.degree()).all(|n| f.b(n).norm() <= f.a(n).norm()));
        match qc_constant(&f, &Grid::default()).unwrap() {
            QcConstant::Bounded { k, .. } => assert!(k <= 3.0, "{name}: K = {k}"),
            QcConstant::Unbounded { .. } => panic!("{name} is not quasiconformal"),
        }
        // load -> serialize is byte-identical
        assert_eq!(f.to_json() + "\n", text);
    }
}

#[test]
fn fuzz_generation_failure_exits_3() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m");
    let res = harmap(&[
        "fuzz",
        "--count",
        "1",
        "--degree",
        "32",
        "--decay",
        "0.999",
        "--target-k",
        "1.5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        res.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
}

#[test]
fn fuzz_rejects_bad_flags() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("m");
    assert_eq!(
        harmap(&["fuzz", "--degree", "0", "--out", out.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        harmap(&["fuzz", "--decay", "1.5", "--out", out.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
