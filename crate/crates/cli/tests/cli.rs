use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;
use trigspline_cli::{run, EXIT_NUMERIC, EXIT_PARSE, EXIT_VALIDATION};

fn run_args(args: &[&str]) -> i32 {
    run(std::iter::once("trigspline").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Data rows as (t, value, tail_bound, status).
fn rows(path: &Path) -> Vec<(f64, f64, f64, String)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,value,tail_bound,status"));
    lines
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            (c[0].parse().unwrap(), c[1].parse().unwrap(), c[2].parse().unwrap(), c[3].to_string())
        })
        .collect()
}

const POLYNOMIAL: &str = r#"{
  "spline": {
    "i1": 0, "i2": 0, "r": 1, "n": 9,
    "filters": {"gamma": [1.0, 0.0, 0.0], "eta": [1.0, 0.0, 0.0]},
    "factor": {"family": "ConstantPower", "alpha": 1.0, "r": 1}
  },
  "samples": 1,
  "k": 1
}"#;

const TRUNCATED: &str = r#"{
  "spline": {
    "i1": 0, "i2": 0, "r": 1, "n": 9,
    "factor": {"family": "Transformed", "transform": "Log", "a": 2.5,
               "base": "ConstantPower", "alpha": 0.5, "r": 1}
  },
  "samples": 4
}"#;

#[test]
fn figure_curve_is_one_at_its_own_node() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run_args(&["figures", "--out", path_str(dir.path())]), 0);
    let r = rows(&dir.path().join("st5_I10_I20.csv"));
    assert_eq!(r.len(), 721);
    let (t, v, _, status) = &r[320];
    assert!((t - 8.0 * PI / 9.0).abs() < 1e-10);
    assert!((v - 1.0).abs() < 1e-8);
    assert_eq!(status, "ok");
    for name in ["st5_I10_I21.csv", "st5_I11_I20.csv", "st5_I11_I21.csv"] {
        assert_eq!(rows(&dir.path().join(name)).len(), 721);
    }
}

#[test]
fn figures_are_byte_identical_across_runs() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    assert_eq!(run_args(&["figures", "--out", path_str(a.path())]), 0);
    assert_eq!(run_args(&["figures", "--out", path_str(b.path())]), 0);
    for e in fs::read_dir(a.path()).unwrap() {
        let name = e.unwrap().file_name();
        let x = fs::read(a.path().join(&name)).unwrap();
        assert_eq!(x, fs::read(b.path().join(&name)).unwrap());
        assert!(!x.contains(&b'\r'));
    }
}

#[test]
fn polynomial_mode_at_origin_is_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "poly.json", POLYNOMIAL);
    let out = dir.path().join("out.csv");
    assert_eq!(run_args(&["fundamental", "--config", &cfg, "--out", path_str(&out)]), 0);
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].0, 0.0);
    assert!((r[0].1 - 1.0).abs() < 1e-12);
}

#[test]
fn flags_override_the_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "poly.json", POLYNOMIAL);
    let out = dir.path().join("out.csv");
    let code = run_args(&[
        "fundamental", "--config", &cfg, "--samples", "9", "--k", "2", "--epsilon", "1e-12", "--out", path_str(&out),
    ]);
    assert_eq!(code, 0);
    let r = rows(&out);
    assert_eq!(r.len(), 9);
    // k = 2 sits at t = 2π/9, the second sample
    for (i, row) in r.iter().enumerate() {
        let want = if i == 1 { 1.0 } else { 0.0 };
        assert!((row.1 - want).abs() < 1e-12, "{i}: {}", row.1);
    }
}

#[test]
fn json_output_is_an_array_of_rows() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("f.json");
    assert_eq!(run_args(&["factors", "--samples", "4", "--format", "json", "--out", path_str(&out)]), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1]["j"], 2);
    assert!((rows[1]["value"].as_f64().unwrap() - 0.25).abs() < 1e-15);
    assert!(rows[3]["envelope"].as_f64().unwrap() >= rows[3]["value"].as_f64().unwrap());
}

#[test]
fn factors_table_has_fixed_formatting() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("f.csv");
    assert_eq!(run_args(&["factors", "--samples", "2", "--out", path_str(&out)]), 0);
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        "j,value,envelope\n1,1.00000000000e0,1.00000000000e0\n2,2.50000000000e-1,2.50000000000e-1\n"
    );
}

#[test]
fn interpolate_reads_node_samples() {
    let dir = TempDir::new().unwrap();
    let mut csv = String::from("k,f\n");
    // rows out of order on purpose
    for k in (1..=9).rev() {
        csv.push_str(&format!("{k},{}\n", (2.0 * PI * (k - 1) as f64 / 9.0).cos()));
    }
    let input = write(&dir, "samples.csv", &csv);
    let out = dir.path().join("s.csv");
    assert_eq!(run_args(&["interpolate", &input, "--samples", "18", "--out", path_str(&out)]), 0);
    let r = rows(&out);
    assert_eq!(r.len(), 18);
    for (i, row) in r.iter().enumerate().step_by(2) {
        let node = 2.0 * PI * i as f64 / 18.0;
        assert!((row.0 - node).abs() < 1e-10);
        assert!((row.1 - node.cos()).abs() < 1e-12, "{i}");
    }
}

#[test]
fn interpolate_rejects_bad_sample_files() {
    let dir = TempDir::new().unwrap();
    let missing = write(&dir, "missing.csv", "k,f\n1,0.5\n2,0.5\n");
    assert_eq!(run_args(&["interpolate", &missing]), EXIT_PARSE);
    let header = write(&dir, "header.csv", "x,y\n1,0.5\n");
    assert_eq!(run_args(&["interpolate", &header]), EXIT_PARSE);
    let mut dup = String::from("k,f\n");
    for k in [1, 2, 3, 4, 5, 6, 7, 8, 8] {
        dup.push_str(&format!("{k},1\n"));
    }
    let dup = write(&dir, "dup.csv", &dup);
    assert_eq!(run_args(&["interpolate", &dup]), EXIT_PARSE);
    let junk = write(&dir, "junk.csv", "k,f\n1,abc\n");
    assert_eq!(run_args(&["interpolate", &junk]), EXIT_PARSE);
}

#[test]
fn validate_default_config_passes() {
    assert_eq!(run_args(&["validate"]), 0);
}

#[test]
fn config_errors_exit_with_parse_code() {
    let dir = TempDir::new().unwrap();
    let syntax = write(&dir, "a.json", "{\n  \"samples\": 3,\n  \"k\": ]\n}");
    assert_eq!(run_args(&["factors", "--config", &syntax]), EXIT_PARSE);
    let even = POLYNOMIAL.replace("\"n\": 9", "\"n\": 8");
    let even = write(&dir, "b.json", &even);
    assert_eq!(run_args(&["fundamental", "--config", &even]), EXIT_PARSE);
    let unknown = write(&dir, "c.json", "{\"colour\": 1}");
    assert_eq!(run_args(&["factors", "--config", &unknown]), EXIT_PARSE);
    assert_eq!(run_args(&["fundamental", "--k", "10"]), EXIT_PARSE);
    assert_eq!(run_args(&["nonsense"]), EXIT_PARSE);
    assert_eq!(run_args(&["factors", "--config", "/definitely/not/here.json"]), EXIT_PARSE);
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trigspline"))
}

#[test]
fn config_diagnostic_names_line_and_column() {
    let dir = TempDir::new().unwrap();
    let syntax = write(&dir, "a.json", "{\n  \"samples\": 3,\n  \"k\": ]\n}");
    let o = binary().args(["factors", "--config", &syntax]).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_PARSE));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("line 3 column"), "{msg}");
}

#[test]
fn degenerate_denominator_exits_with_numeric_code() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "bump.json",
        r#"{"spline": {"i1": 0, "i2": 1, "r": 1, "n": 3,
            "factor": {"family": "BumpPoly", "alpha": 0.2, "r": 1}}, "k": 1, "samples": 4}"#,
    );
    let o = binary().args(["fundamental", "--config", &cfg]).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_NUMERIC));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("j = "), "{msg}");
}

#[test]
fn mmax_override_marks_incomplete_rows() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "t.json", TRUNCATED);
    let out = dir.path().join("t.csv");
    let o = binary()
        .args(["fundamental", "--config", &cfg, "--out", path_str(&out)])
        .env("TRIGSPLINE_MMAX", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&out);
    assert_eq!(r.len(), 4);
    assert!(r.iter().all(|row| row.3 == "TRUNCATION-INCOMPLETE" && row.2 > 1e-10));

    let o = binary()
        .args(["fundamental", "--config", &cfg, "--out", path_str(&out)])
        .env_remove("TRIGSPLINE_MMAX")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(rows(&out).iter().all(|row| row.3 == "ok" && row.2 <= 1e-10));

    let o = binary().args(["factors"]).env("TRIGSPLINE_MMAX", "lots").output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_PARSE));
}

#[test]
fn failing_suite_exits_with_validation_code() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "t.json", TRUNCATED);
    let o = binary()
        .args(["validate", "--config", &cfg])
        .env("TRIGSPLINE_MMAX", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_VALIDATION));
    let table = String::from_utf8_lossy(&o.stdout);
    assert!(table.lines().any(|l| l.starts_with("oracle equivalence") && l.contains("FAIL")), "{table}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle equivalence"));
}
