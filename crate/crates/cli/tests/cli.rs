use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(args)
        .env_remove("EINRES_WAIVERS")
        .output()
        .expect("verify runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn shipped(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name);
    std::fs::read_to_string(p).expect("shipped data")
}

#[test]
fn full_run_passes_with_shipped_waivers() {
    let o = verify(&["--suite", "all", "--format", "md"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let md = String::from_utf8(o.stdout).unwrap();
    assert!(md.contains("mismatch"), "waived mismatches stay visible");
    assert!(md.contains("total_umbilic"));
}

#[test]
fn json_output_is_deterministic() {
    let a = verify(&["--suite", "boundary-d2d2", "--format", "json"]);
    let b = verify(&["--suite", "boundary-d2d2", "--format", "json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "einres-report/1");
    assert_eq!(v["suites"][0]["suite"], "boundary-d2d2");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&verify(&["--suite", "nonsense"])), 2);
    assert_eq!(code(&verify(&[])), 2);
    let missing = verify(&["--suite", "interior", "--expected-override", "/nonexistent/file.toml"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn corrupt_override_exits_two() {
    let f = fixture("corrupt-interior.toml");
    let o = verify(&["--suite", "interior", "--expected-override", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("verify:"));
}

#[test]
fn changed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("interior.toml");
    let text = shipped("interior.toml").replacen(r#"einstein = "8/3""#, r#"einstein = "3""#, 1);
    std::fs::write(&path, text).unwrap();
    let o = verify(&["--suite", "interior", "--format", "json", "--expected-override", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suites"][0]["claims"][0]["status"], "mismatch");
}

#[test]
fn empty_waiver_file_exposes_mismatches() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("none.toml");
    std::fs::write(&path, "format = \"einres-waivers/1\"\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_verify"))
        .args(["--suite", "boundary-d2d2"])
        .env("EINRES_WAIVERS", &path)
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn intermediates_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.md");
    let inter = dir.path().join("inter");
    let o = verify(&[
        "--suite",
        "boundary-d2d2",
        "--emit-intermediates",
        inter.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().contains("phi_1"));
    let dump = std::fs::read_to_string(inter.join("boundary-d2d2.txt")).unwrap();
    assert!(!dump.is_empty());
}
