use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tgd(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgd"))
        .args(args)
        .current_dir(dir)
        .env_remove("TGD_THREADS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let j = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(j).unwrap().parse().unwrap()).collect()
}

fn write_sine(dir: &Path, h: f64) {
    let mut s = String::from("y\n");
    for i in 0..200 {
        s.push_str(&format!("{}\n", (i as f64 * h).sin()));
    }
    fs::write(dir.join("sine.csv"), s).unwrap();
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&tgd(d, &["--help"])), 0);
    assert_eq!(code(&tgd(d, &["gen-op", "--bogus"])), 1);
    assert_eq!(code(&tgd(d, &["validate-kernel", "--kernel", "weibull", "--k", "1.5"])), 2);
    assert_eq!(code(&tgd(d, &["apply", "-i", "missing.csv"])), 3);
}

#[test]
fn noise_needs_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    write_sine(dir.path(), 0.1);
    let out = tgd(dir.path(), &["noise", "-i", "sine.csv", "-o", "n.csv", "--sigma", "0.1"]);
    assert_eq!(code(&out), 1);
    let out = tgd(dir.path(), &["noise", "-i", "sine.csv", "-o", "n.csv", "--sigma", "0.1", "--seed", "3"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn saved_operator_reproduces_inline_result() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_sine(d, 0.1);
    assert_eq!(code(&tgd(d, &["gen-op", "--kernel", "exponential", "-N", "4", "-o", "op.json"])), 0);
    assert_eq!(code(&tgd(d, &["apply", "--op", "op.json", "-i", "sine.csv", "-o", "a.csv"])), 0);
    assert_eq!(code(&tgd(d, &["apply", "--kernel", "exponential", "-N", "4", "-i", "sine.csv", "-o", "b.csv"])), 0);
    assert_eq!(fs::read(d.join("a.csv")).unwrap(), fs::read(d.join("b.csv")).unwrap());
}

#[test]
fn baselines_share_units_with_normalized_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let h = 0.01;
    write_sine(d, h);
    let out = tgd(
        d,
        &[
            "--norm-constant",
            "apply",
            "-i",
            "sine.csv",
            "-o",
            "d.csv",
            "-N",
            "3",
            "--spacing",
            "0.01",
            "--compare",
            "central,smoothdiff",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(d.join("d.csv")).unwrap();
    for name in ["tgd", "central", "smoothdiff"] {
        let v = column(&text, name);
        let slope = v[100];
        let expected = (100.0 * h).cos();
        assert!((slope - expected).abs() < 1e-2, "{name}: {slope} vs {expected}");
    }
}

#[test]
fn two_dimensional_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // f = 3x - 2y on a 16 x 16 grid, rows are y
    let mut s = String::new();
    for r in 0..16 {
        let row: Vec<String> = (0..16).map(|c| (3 * c - 2 * r).to_string()).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    fs::write(d.join("plane.csv"), s).unwrap();
    let args = ["--norm-constant", "--boundary", "valid", "apply", "-i", "plane.csv", "-o", "gx.csv", "--construction", "orthogonal", "-N", "2"];
    assert_eq!(code(&tgd(d, &args)), 0);
    let text = fs::read_to_string(d.join("gx.csv")).unwrap();
    let values: Vec<f64> = text.lines().flat_map(|l| l.split(',')).map(|v| v.parse().unwrap()).collect();
    assert_eq!(values.len(), 12 * 12);
    assert!(values.iter().all(|v| (v - 3.0).abs() < 1e-9), "{values:?}");
}
