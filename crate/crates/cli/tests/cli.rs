use std::path::PathBuf;
use std::process::{Command, Output};

use cubic_sections::io;
use cubic_sections::monodromy::transform_path;
use cubic_sections::symmetry::fermat_translations;
use cubic_sections::{CubicForm, Tolerances};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubic-sections"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn fermat_counts_table() {
    let v = json(&["counts", &data("fermat.json"), "--k-max", "3"]);
    let rows: Vec<(u64, u64, u64)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["k"].as_u64().unwrap(), r["expected"].as_u64().unwrap(), r["observed"].as_u64().unwrap()))
        .collect();
    assert_eq!(rows, vec![(1, 9, 9), (2, 27, 27), (3, 72, 72)]);
}

#[test]
fn fermat_inflections() {
    let v = json(&["inflections", &data("fermat.json")]);
    assert_eq!(v["count"], 9);
    for p in v["points"].as_array().unwrap() {
        assert!(p["residual"].as_f64().unwrap() <= 1e-8);
        // every Fermat inflection has a zero coordinate
        let zero = p["xyz"].as_array().unwrap().iter().any(|z| z[0].as_f64().unwrap().hypot(z[1].as_f64().unwrap()) < 1e-12);
        assert!(zero);
    }
}

#[test]
fn csv_has_one_row_per_point() {
    let out = run(&["type3k", &data("fermat.json"), "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 28);
    assert_eq!(io::parse_points_csv(&text).unwrap().len(), 27);
}

#[test]
fn verdict_lines() {
    assert_eq!(json(&["verdict", "10"])["verdict"], "OBSTRUCTED (n is not a multiple of 9)");
    assert_eq!(json(&["verdict", "36"])["verdict"], "CONSTRUCTIBLE S={1,2}");
    assert_eq!(json(&["verdict", "18"])["verdict"], "OPEN");
    let sizes: Vec<u64> = json(&["sizes", "180"])["sizes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_u64().unwrap())
        .collect();
    assert_eq!(sizes, vec![9, 27, 36, 72, 81, 99, 108, 117, 135, 144, 180]);
    assert_eq!(json(&["j2", "6"])["j2"], 24);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["inflections", &data("xyz.json")]).status.code(), Some(3));
    assert_eq!(run(&["inflections", "missing.json"]).status.code(), Some(2));
    assert_eq!(run(&["torsion", &data("fermat.json"), "13"]).status.code(), Some(2));
    assert_eq!(run(&["verdict", "0"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["inflections", &data("fermat.json"), "--tol-match", "-1"]).status.code(), Some(2));
}

#[test]
fn failures_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = run(&["inflections", &data("xyz.json"), "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    assert!(!target.exists());
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("flex.json");
    let out = run(&["inflections", &data("fermat.json"), "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["count"], 9);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["type3k", &data("fermat.json"), "2"]);
    let b = run(&["type3k", &data("fermat.json"), "2"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tracking_files() {
    assert_eq!(json(&["track", &data("constant_path.json")])["permutation"], "()");
    assert_eq!(json(&["track", &data("hesse_loop.json")])["permutation"], "()");

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("shift.json");
    let (a, _) = fermat_translations();
    let path = transform_path(&a, &CubicForm::fermat(), 9, 3, &Tolerances::default()).unwrap();
    std::fs::write(&file, io::path_to_json(&path)).unwrap();
    let v = json(&["track", file.to_str().unwrap()]);
    let cycles = v["permutation"].as_str().unwrap();
    assert_eq!(cycles.matches('(').count(), 3, "{cycles}");
    assert_eq!(json(&["track", file.to_str().unwrap(), "--section", "type3k(2)"])["images"].as_array().unwrap().len(), 27);
    assert_eq!(run(&["track", file.to_str().unwrap(), "--section", "bogus"]).status.code(), Some(2));
}

#[test]
fn path_through_discriminant_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let from = CubicForm::hesse(cubic_sections::Complex::new(-4.0, 0.0));
    let to = CubicForm::hesse(cubic_sections::Complex::new(-2.0, 0.0));
    let path = cubic_sections::monodromy::ParameterPath::new(vec![(from, to)], 4, 1e-4).unwrap();
    std::fs::write(&file, io::path_to_json(&path)).unwrap();
    assert_eq!(run(&["track", file.to_str().unwrap()]).status.code(), Some(5));
}

#[test]
fn hesse_and_selftest() {
    let v = json(&["hesse", &data("fermat.json")]);
    assert!(v["residual"].as_f64().unwrap() <= 1e-6);
    let v = json(&["selftest", "--seed", "3"]);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}
