//! End-to-end tests of the `verify` binary: exit codes, report formats,
//! determinism, and the check catalog.

use std::path::PathBuf;
use std::process::{Command, Output};

fn verify() -> Command {
    Command::new(env!("CARGO_BIN_EXE_verify"))
}

fn run(args: &[&str]) -> Output {
    verify().args(args).output().expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn tmp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("acm3-cli-{}-{name}", std::process::id()));
    p
}

#[test]
fn all_checks_pass_on_the_flat_model_with_exit_zero() {
    let out = run(&["--manifold", "flat3cos", "--points", "3", "--seed", "11"]);
    let text = stdout_of(&out);
    assert_eq!(out.status.code(), Some(0), "stdout:\n{text}");
    assert!(text.contains("manifold=flat3cos"));
    assert!(text.lines().any(|l| l.starts_with("PASS  riemann-vanishes")));
    assert!(text.contains("failed=0"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn a_failing_check_yields_exit_one() {
    // An impossible tolerance forces failures without touching the models.
    // The sphere chart works through rational coordinate expressions, so its
    // residuals are rounding-level but never exactly zero.
    let out = run(&[
        "--manifold",
        "sphere3sas",
        "--points",
        "2",
        "--tol-curved",
        "1e-300",
        "--suite",
        "structure",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout_of(&out);
    assert!(text.lines().any(|l| l.starts_with("FAIL")), "stdout:\n{text}");
    assert!(!text.contains("failed=0"), "stdout:\n{text}");
}

#[test]
fn usage_errors_yield_exit_two() {
    assert_eq!(run(&["--manifold", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["--manifold", "flat3cos", "--order", "7"]).status.code(), Some(2));
    assert_eq!(run(&["--manifold", "flat3cos", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn json_reports_are_reproducible_apart_from_timing() {
    let args = ["--manifold", "flat3cos-scrambled", "--points", "2", "--report", "json"];
    let strip = |s: &str| -> String {
        s.lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n")
    };
    let a = stdout_of(&run(&args));
    let b = stdout_of(&run(&args));
    assert_eq!(strip(&a), strip(&b));
    assert!(a.contains("\"manifold\": \"flat3cos-scrambled\""));
}

#[test]
fn json_report_has_the_expected_shape_and_float_format() {
    let path = tmp_path("shape.json");
    let out = run(&[
        "--manifold",
        "flat3cos",
        "--points",
        "2",
        "--report",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = std::fs::read_to_string(&path).expect("report written");
    std::fs::remove_file(&path).ok();
    for key in [
        "\"manifold\"",
        "\"n\"",
        "\"seed\"",
        "\"order\"",
        "\"conventions\"",
        "\"wedge\"",
        "\"matrix_reading\"",
        "\"quaternion_side\"",
        "\"checks\"",
        "\"paper_ref\"",
        "\"max_residual\"",
        "\"tolerance\"",
        "\"points_sampled\"",
        "\"summary\"",
        "\"passed\"",
        "\"failed\"",
        "\"total\"",
        "\"elapsed_ms\"",
    ] {
        assert!(json.contains(key), "missing {key} in:\n{json}");
    }
    // Residuals and tolerances are printed as %.12e scientific floats:
    // d.dddddddddddd e (sign) (>= 2 exponent digits).
    let is_sci_12 = |v: &str| -> bool {
        let v = v.strip_prefix('-').unwrap_or(v);
        let Some((mant, exp)) = v.split_once('e') else { return false };
        mant.len() == 14
            && mant.as_bytes()[1] == b'.'
            && (exp.starts_with('+') || exp.starts_with('-'))
            && exp.len() >= 3
    };
    let mut seen = 0;
    for line in json.lines() {
        let t = line.trim_start();
        if t.starts_with("\"max_residual\":") || t.starts_with("\"tolerance\":") {
            let v = t.split(':').nth(1).unwrap().trim().trim_end_matches(',');
            assert!(is_sci_12(v), "not a %.12e float: {v}");
            seen += 1;
        }
    }
    assert!(seen >= 60, "only {seen} float fields found");
}

#[test]
fn text_report_lines_follow_the_fixed_layout() {
    let out = run(&["--manifold", "flat3cos", "--points", "2", "--suite", "musical"]);
    let text = stdout_of(&out);
    let mut check_lines = 0;
    for line in text.lines() {
        if line.starts_with("PASS") || line.starts_with("FAIL") {
            check_lines += 1;
            assert!(line.contains("max_residual="), "bad line: {line}");
            assert!(line.contains("tol="), "bad line: {line}");
            assert!(line.ends_with(')'), "bad line: {line}");
        }
    }
    assert!(check_lines >= 5, "musical suite produced {check_lines} lines");
    assert!(text.lines().last().unwrap().starts_with("summary: passed="));
}

#[test]
fn the_catalog_lists_every_check_and_the_required_ids() {
    let out = run(&["--list-checks"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() >= 30, "catalog has {} entries", lines.len());
    for id in ["torsion-horizontal-formula", "metric-reconstruction-banyaga", "scalar-curvature-total"] {
        assert!(
            lines.iter().any(|l| l.starts_with(id)),
            "catalog is missing {id}"
        );
    }
}

#[test]
fn suite_filter_limits_the_checks_run() {
    let out = run(&["--manifold", "flat3cos", "--points", "2", "--suite", "darboux"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for line in text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")) {
        assert!(line.contains("darboux"), "non-darboux check in filtered run: {line}");
    }
}
