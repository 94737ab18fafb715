use std::process::Command;

use d2lab::cli::run;
use d2lab::report::RunReport;

fn code(args: &[&str]) -> i32 {
    let mut argv = vec!["d2lab"];
    argv.extend_from_slice(args);
    run(argv).code
}

fn report_at(path: &std::path::Path) -> RunReport {
    let text = std::fs::read_to_string(path).unwrap();
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

#[test]
fn verify_algebra_passes() {
    let out = run(["d2lab", "verify-algebra", "--n", "6"]);
    assert_eq!(out.code, 0);
    let r = out.report.unwrap();
    assert!(r.checks.iter().any(|c| c.name.contains("anticommutation") && c.passed));
    assert!(r.checks.iter().any(|c| c.name.contains("skew-adjoint") && c.passed));
}

#[test]
fn verify_complex_passes() {
    let out = run(["d2lab", "verify-complex", "--n", "4"]);
    assert_eq!(out.code, 0);
    let r = out.report.unwrap();
    assert!(r.checks.iter().any(|c| c.name.contains("D1∘D0 = 0")));
    assert!(r.checks.iter().any(|c| c.name.contains("□_0 = Δ²")));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["verify-ellipticity", "--n", "3", "--samples", "0"]), 2);
    assert_eq!(code(&["verify-algebra", "--bogus"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["field", "apply", "--op", "D7", "--input", "x", "--out", "y"]), 2);
}

#[test]
fn failed_checks_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let c = code(&["bm-reproduce", "--level", "4", "--tol", "1e-12", "--report", path.to_str().unwrap()]);
    assert_eq!(c, 1);
    let r = report_at(&path);
    assert!(!r.passed);
    assert!(r.checks.iter().all(|c| c.tolerance.is_finite()));
}

#[test]
fn ellipticity_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("e.jsonl");
    assert_eq!(code(&["verify-ellipticity", "--n", "4", "--samples", "7", "--seed", "3", "--report", path.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["expected"], 2);
    let r = report_at(&path);
    assert_eq!(r.seed, Some(3));
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        assert_eq!(code(&["kernels", "check", "--n", "3", "--samples", "20", "--seed", "5", "--report", p.to_str().unwrap()]), 0);
    }
    let (ra, rb) = (report_at(&a), report_at(&b));
    assert_eq!(
        serde_json::to_string(&ra.without_timing()).unwrap(),
        serde_json::to_string(&rb.without_timing()).unwrap()
    );
}

#[test]
fn generate_apply_and_solve() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    assert_eq!(code(&["field", "gen-planewave", "--grid-points", "6", "--out", &p("pw.d2grid"), "--report", &p("r0.json")]), 0);
    assert_eq!(code(&["field", "apply", "--op", "D0", "--input", &p("pw.d2grid"), "--out", &p("d0.d2grid"), "--report", &p("r1.json")]), 0);
    let r = report_at(std::path::Path::new(&p("r1.json")));
    let ratio = r.results["output_max_norm"].as_f64().unwrap() / r.results["input_max_norm"].as_f64().unwrap();
    assert!(ratio < 0.1);

    assert_eq!(code(&["field", "gen-bump", "--d0", "--grid-points", "8", "--out", &p("f.d2grid"), "--report", &p("r2.json")]), 0);
    std::fs::write(p("pts.json"), "[[0.3,0,0,0,0,0],[0,0.2,0,0.1,0,0]]").unwrap();
    // Default threshold refuses the stored 8/axis bump.
    assert_eq!(code(&["solve", "--input", &p("f.d2grid"), "--points", &p("pts.json"), "--report", &p("r3.json")]), 1);
    let r = report_at(std::path::Path::new(&p("r3.json")));
    assert!(r.results["error"].as_str().unwrap().contains("compatibility"));
    assert_eq!(
        code(&["solve", "--input", &p("f.d2grid"), "--points", &p("pts.json"), "--compat-threshold", "3", "--report", &p("r4.json")]),
        0
    );
    let r = report_at(std::path::Path::new(&p("r4.json")));
    assert!(r.checks.iter().any(|c| c.name.contains("D0 u") && c.value < 0.05));
}

#[test]
fn binary_honours_thread_variable() {
    let bin = env!("CARGO_BIN_EXE_d2lab");
    let ok = Command::new(bin).args(["verify-algebra", "--n", "3"]).env("D2LAB_THREADS", "1").output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["verify-algebra", "--n", "3"]).env("D2LAB_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("hartogs-demo"));
}
