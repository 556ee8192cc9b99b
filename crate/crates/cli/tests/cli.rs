use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use algpencil::algebra::registry;
use algpencil::exact::{Matrix, Rational};
use algpencil_cli::document::{parse_algebra, serialize_algebra};
use tempfile::TempDir;

const NAMES: [&str; 8] = ["L1", "L2", "T2", "M2", "D", "C2", "T3", "Z2"];

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algpencil")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn doc(dir: &TempDir, name: &str) -> PathBuf {
    write(dir, &format!("{name}.json"), &serialize_algebra(&registry(name).unwrap()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[test]
fn check_reports_unity() {
    let dir = TempDir::new().unwrap();
    let o = run(&["check", s(&doc(&dir, "T2"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("unity: 1"));
    let o = run(&["--json", "check", s(&doc(&dir, "T2"))]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["unity"], "1");
    assert_eq!(v["associative"], true);
}

#[test]
fn check_reports_violation() {
    let dir = TempDir::new().unwrap();
    let mut a = registry("T2").unwrap();
    let mut table = a.table().to_vec();
    table[2][1] = vec![q(0), q(1), q(1)];
    a = algpencil::algebra::Algebra::new(a.names().to_vec(), table, None).unwrap();
    let o = run(&["--json", "check", s(&write(&dir, "bad.json", &serialize_algebra(&a)))]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["violation"]["triple"], serde_json::json!(["y", "x", "x"]));
    assert_eq!(v["violation"]["difference"], serde_json::json!([0, -1, 0]));
}

#[test]
fn malformed_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let text = serialize_algebra(&registry("T2").unwrap());
    let o = run(&["check", s(&write(&dir, "cut.json", &text[..text.len() / 2]))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line"));
    let o = run(&["check", s(&write(&dir, "dim.json", r#"{"dim": 2, "basis": ["a"], "table": []}"#))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("basis"));
    assert_eq!(run(&["check", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn analyze_t2_at_given_functional() {
    let dir = TempDir::new().unwrap();
    let p = doc(&dir, "T2");
    let o = run(&["analyze", s(&p), "--functional", "1,2,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("−25·λμ(λ+μ)"));
    let o = run(&["--json", "analyze", s(&p), "--functional", "1,2,4"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let alphas: Vec<String> =
        v["decomposition"]["blocks"].as_array().unwrap().iter().map(|b| b["alpha"].to_string()).collect();
    assert_eq!(alphas, ["0", "1", "\"∞\""]);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    assert_eq!(v["block_formula"]["passed"], true);
}

#[test]
fn analyze_accepts_negative_functional_and_shift() {
    let dir = TempDir::new().unwrap();
    let o = run(&["analyze", s(&doc(&dir, "T2")), "--functional", "-1,2,-4", "--mu", "-3/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("μ = -3/2"));
}

#[test]
fn analyze_l1_and_degenerate_z2() {
    let dir = TempDir::new().unwrap();
    let o = run(&["analyze", s(&doc(&dir, "L1")), "--functional", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("= −λμ"));
    let z = doc(&dir, "Z2");
    assert_eq!(run(&["analyze", s(&z)]).status.code(), Some(3));
    assert_eq!(run(&["analyze", s(&z), "--functional", "0,1"]).status.code(), Some(3));
}

fn random_presentation(name: &str, seed: u64) -> algpencil::algebra::Algebra {
    use rand::{Rng, SeedableRng};
    let a = registry(name).unwrap();
    let n = a.dim();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| q(rng.random_range(-5..=5))).collect()).collect();
        let m = Matrix::from_rows(rows, n);
        if m.det_ff().unwrap() != q(0) {
            return a.change_basis(&m).unwrap();
        }
    }
}

#[test]
fn canon_labels() {
    let dir = TempDir::new().unwrap();
    let l2 = write(&dir, "l2.json", &serialize_algebra(&random_presentation("L2", 7)));
    let o = run(&["--json", "canon", s(&l2)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["label"], "L2");
    let t2 = write(&dir, "t2.json", &serialize_algebra(&random_presentation("T2", 11)));
    let o = run(&["canon", s(&t2)]);
    assert!(stdout(&o).contains("T2_UPPER_TRIANGULAR"));
    assert_eq!(run(&["canon", s(&doc(&dir, "M2"))]).status.code(), Some(4));
}

#[test]
fn split_t2_passes() {
    let dir = TempDir::new().unwrap();
    let o = run(&["split", s(&doc(&dir, "T2"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[pass] rank1_eqn"));
    assert_eq!(run(&["split", s(&doc(&dir, "M2"))]).status.code(), Some(4));
}

const ONE_IDEMPOTENT: &str = r#"{"dim": 1, "basis": ["x"], "table": [[[1]]]}"#;
const ONE_ZERO: &str = r#"{"dim": 1, "basis": ["y"], "table": [[[0]]]}"#;

#[test]
fn build_round_trips_registry_t2() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", ONE_IDEMPOTENT);
    let hp = write(&dir, "hp.json", &ONE_IDEMPOTENT.replace("\"x\"", "\"y\""));
    let pairing = write(&dir, "p.json", r#"{"pairing": [[1]]}"#);
    let built = run(&["build", s(&h), s(&hp), s(&pairing)]);
    assert_eq!(built.status.code(), Some(0));
    assert_eq!(built.stdout, run(&["registry", "T2"]).stdout);
}

#[test]
fn build_rejects_broken_pair() {
    let dir = TempDir::new().unwrap();
    let h = write(&dir, "h.json", ONE_IDEMPOTENT);
    let hp = write(&dir, "hp.json", ONE_ZERO);
    let pairing = write(&dir, "p.json", "[[1]]");
    let o = run(&["build", s(&h), s(&hp), s(&pairing)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("rank1_eqn violated"));
}

#[test]
fn batch_keeps_order_and_takes_worst_code() {
    let dir = TempDir::new().unwrap();
    let paths: Vec<PathBuf> = ["T2", "Z2", "L1"].iter().map(|n| doc(&dir, n)).collect();
    let args: Vec<&str> = ["--json", "analyze"].into_iter().chain(paths.iter().map(|p| s(p))).collect();
    let o = run(&args);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let got: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["path"].as_str().unwrap()).collect();
    let want: Vec<&str> = paths.iter().map(|p| s(p)).collect();
    assert_eq!(got, want);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    for name in ["T2", "M2", "D"] {
        let p = doc(&dir, name);
        let a = run(&["--json", "analyze", s(&p), "--seed", "3"]);
        let b = run(&["--json", "analyze", s(&p), "--seed", "3"]);
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("report.txt");
    let o = run(&["--out", s(&target), "check", s(&doc(&dir, "L2"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(target).unwrap().contains("associative: yes"));
}

#[test]
fn registry_documents_round_trip() {
    for name in NAMES {
        let a = registry(name).unwrap();
        let text = serialize_algebra(&a);
        let back = parse_algebra(&text).unwrap();
        assert_eq!(back, a, "{name}");
        assert_eq!(serialize_algebra(&back), text, "{name}");
    }
}
