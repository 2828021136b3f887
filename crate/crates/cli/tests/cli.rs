use std::path::Path;
use std::process::{Command, Output};

use g2contact_cli::report::from_json;
use tempfile::TempDir;

const CONSTANT_XI: &str = r#"
[[fields.xi]]
coeff = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]
wave = [0, 0, 0, 0, 0, 0, 0]
phase = "cos"
"#;

const GENERIC_XI: &str = r#"
[[fields.xi]]
coeff = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0]
wave = [0, 0, 0, 0, 0, 0, 0]
phase = "cos"

[[fields.xi]]
coeff = [0.4, -0.3, 0.0, 0.2, 0.0, 0.1, 0.0]
wave = [1, 0, 1, 0, 0, 1, 0]
phase = "sin"

[[fields.xi]]
coeff = [0.0, 0.3, 0.5, 0.0, -0.2, 0.0, 0.3]
wave = [0, 1, 0, 0, 1, 0, 1]
phase = "cos"
"#;

const PARALLEL_PAIR: &str = r#"
[[fields.u]]
coeff = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
wave = [0, 0, 0, 0, 0, 0, 0]
phase = "cos"

[[fields.v]]
coeff = [2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
wave = [0, 0, 0, 0, 0, 0, 0]
phase = "cos"
"#;

const ORTHONORMAL_PAIR: &str = r#"
[[fields.u]]
coeff = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
wave = [0, 0, 0, 0, 0, 0, 0]
phase = "cos"

[[fields.v]]
coeff = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]
wave = [0, 0, 0, 0, 0, 0, 0]
phase = "cos"
"#;

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("fields.toml");
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn g2contact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2contact")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn constant_field_is_cosymplectic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), CONSTANT_XI);
    let out = dir.path().join("out");
    let o = g2contact(&["--config", &cfg, "--suite", "classify", "--subsamples", "40", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = from_json(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let names: Vec<&str> = report.classify.as_ref().unwrap().most_specific.iter().map(|t| t.name()).collect();
    assert_eq!(names, vec!["cosymplectic"]);
    assert!(report.passed());
}

#[test]
fn generic_field_fails_theorem_ledger() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), GENERIC_XI);
    let o = g2contact(&["--config", &cfg, "--suite", "theorems", "--subsamples", "60"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("theorems: "), "{err}");
    let report = from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    assert_eq!(report.first_failure.as_deref(), Some("theorems: case 1"));
}

#[test]
fn algebra_suite_passes_without_fields() {
    let o = g2contact(&["--suite", "algebra", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("all assertions pass"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), CONSTANT_XI);
    assert_eq!(g2contact(&["--config", &cfg, "--suite", "three_structure"]).status.code(), Some(2));
    assert_eq!(g2contact(&["--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(g2contact(&["--resolution", "2"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_g2contact"))
        .args(["--suite", "algebra"])
        .env("G2CONTACT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn degenerate_pair_exits_3() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), PARALLEL_PAIR);
    let o = g2contact(&["--config", &cfg, "--suite", "three_structure", "--subsamples", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn vanishing_xi_exits_3() {
    let dir = TempDir::new().unwrap();
    let body = CONSTANT_XI.replace("wave = [0, 0, 0, 0, 0, 0, 0]", "wave = [1, 0, 0, 0, 0, 0, 0]");
    let cfg = write_config(dir.path(), &body);
    let o = g2contact(&["--config", &cfg, "--suite", "classify", "--resolution", "4", "--subsamples", "16384"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = g2contact(&["--suite", "algebra", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let missing = dir.path().join("absent.toml");
    assert_eq!(g2contact(&["--config", missing.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), GENERIC_XI);
    let run = || g2contact(&["--config", &cfg, "--suite", "algebra,classify", "--subsamples", "30", "--seed", "5"]);
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let report = from_json(&text).unwrap();
    assert_eq!(g2contact_cli::report::to_json(&report), text);
    assert_eq!(report.points.len(), 30);
}

#[test]
fn csv_has_one_row_per_sample() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), GENERIC_XI);
    let o = g2contact(&["--config", &cfg, "--suite", "classify", "--subsamples", "25", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(r.headers().unwrap().len(), 1 + 7 + 18 + 12);
    assert_eq!(r.records().count(), 25);
}

#[test]
fn text_lists_classes_in_order() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), GENERIC_XI);
    let o = g2contact(&["--config", &cfg, "--suite", "classify", "--subsamples", "20", "--format", "text"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let pos: Vec<usize> = (1..=12).map(|k| text.find(&format!("\n  C{k} ")).expect("class row")).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn constant_pair_reports_cross_product_mismatch() {
    // The pair is 3-cosymplectic, but φ₃ is not ξ₃× and the run says so.
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), ORTHONORMAL_PAIR);
    let o = g2contact(&["--config", &cfg, "--suite", "three_structure", "--subsamples", "10"]);
    assert_eq!(o.status.code(), Some(1));
    let report = from_json(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let t = report.three_structure.unwrap();
    assert_eq!(t.cosymplectic.verdict(), "3-cosymplectic");
    assert_eq!(report.first_failure.as_deref(), Some("three_structure: phi3 = xi3 x"));
    assert!(report.assertions.iter().filter(|a| a.name.starts_with("ac3s")).all(|a| a.passed));
}
