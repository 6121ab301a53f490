//! Deterministic verification reports.
//!
//! A report is a list of named checks, each carrying the worst residual it
//! observed and the tolerance it was held to, plus the conventions the whole
//! engine is pinned to (so numbers can be compared across implementations).
//! Serialization is deliberately hand-rolled: field order is fixed, floats
//! are printed in C-style `%.12e` scientific notation, and two runs with the
//! same inputs produce byte-identical output except for the wall-clock
//! `elapsed_ms` entry.

use std::fmt::Write as _;

/// The sign and reading conventions every number in a report depends on.
#[derive(Debug, Clone)]
pub struct Conventions {
    pub wedge: &'static str,
    pub matrix_reading: &'static str,
    pub quaternion_side: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            wedge: "(a ^ b)(X, Y) = (a(X) b(Y) - a(Y) b(X)) / 2; \
                    d eta(X, Y) = (X.eta(Y) - Y.eta(X) - eta([X, Y])) / 2",
            matrix_reading: "endomorphism matrices act on column vectors; \
                             Phi(X, Y) = g(X, phi Y)",
            quaternion_side: "sphere structure from right quaternion \
                              multiplication by i, j, k",
        }
    }
}

/// One verified identity: its worst residual over the sampled points and
/// whether that met the tolerance.
#[derive(Debug, Clone)]
pub struct VerificationCheck {
    pub id: String,
    pub description: String,
    pub reference: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub points_sampled: usize,
}

impl VerificationCheck {
    /// Builds a check result, deciding `pass` from the residual: non-finite
    /// residuals always fail.
    pub fn evaluate(
        id: impl Into<String>,
        description: impl Into<String>,
        reference: impl Into<String>,
        max_residual: f64,
        tolerance: f64,
        points_sampled: usize,
    ) -> Self {
        Self {
            id: id.into(),
            description: description.into(),
            reference: reference.into(),
            max_residual,
            tolerance,
            pass: max_residual.is_finite() && max_residual <= tolerance,
            points_sampled,
        }
    }
}

/// A full verification run over one model.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub manifold: String,
    pub n: usize,
    pub seed: u64,
    pub order: usize,
    pub conventions: Conventions,
    pub checks: Vec<VerificationCheck>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed_count(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }

    pub fn failed_count(&self) -> usize {
        self.checks.len() - self.passed_count()
    }

    pub fn all_passed(&self) -> bool {
        self.failed_count() == 0
    }

    /// JSON rendering with fixed field order and `%.12e` floats.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"manifold\": {},", json_string(&self.manifold));
        let _ = writeln!(s, "  \"n\": {},", self.n);
        let _ = writeln!(s, "  \"seed\": {},", self.seed);
        let _ = writeln!(s, "  \"order\": {},", self.order);
        s.push_str("  \"conventions\": {\n");
        let _ = writeln!(s, "    \"wedge\": {},", json_string(self.conventions.wedge));
        let _ = writeln!(s, "    \"matrix_reading\": {},", json_string(self.conventions.matrix_reading));
        let _ = writeln!(s, "    \"quaternion_side\": {}", json_string(self.conventions.quaternion_side));
        s.push_str("  },\n");
        s.push_str("  \"checks\": [");
        for (i, c) in self.checks.iter().enumerate() {
            s.push_str(if i == 0 { "\n" } else { ",\n" });
            s.push_str("    {\n");
            let _ = writeln!(s, "      \"id\": {},", json_string(&c.id));
            let _ = writeln!(s, "      \"description\": {},", json_string(&c.description));
            let _ = writeln!(s, "      \"paper_ref\": {},", json_string(&c.reference));
            let _ = writeln!(s, "      \"max_residual\": {},", format_sci(c.max_residual, 12));
            let _ = writeln!(s, "      \"tolerance\": {},", format_sci(c.tolerance, 12));
            let _ = writeln!(s, "      \"pass\": {},", c.pass);
            let _ = writeln!(s, "      \"points_sampled\": {}", c.points_sampled);
            s.push_str("    }");
        }
        s.push_str("\n  ],\n");
        s.push_str("  \"summary\": {\n");
        let _ = writeln!(s, "    \"passed\": {},", self.passed_count());
        let _ = writeln!(s, "    \"failed\": {},", self.failed_count());
        let _ = writeln!(s, "    \"total\": {}", self.checks.len());
        s.push_str("  },\n");
        let _ = writeln!(s, "  \"elapsed_ms\": {}", self.elapsed_ms);
        s.push_str("}\n");
        s
    }

    /// Plain-text rendering: a header, one line per check, and a summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "manifold={}  n={}  seed={}  order={}",
            self.manifold, self.n, self.seed, self.order
        );
        let _ = writeln!(s, "wedge: {}", self.conventions.wedge);
        let _ = writeln!(s, "matrix_reading: {}", self.conventions.matrix_reading);
        let _ = writeln!(s, "quaternion_side: {}", self.conventions.quaternion_side);
        s.push('\n');
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{}  {}  max_residual={}  tol={}  ({})",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                format_sci(c.max_residual, 3),
                format_sci(c.tolerance, 1),
                c.reference
            );
        }
        s.push('\n');
        let _ = writeln!(
            s,
            "summary: passed={} failed={} total={} elapsed_ms={}",
            self.passed_count(),
            self.failed_count(),
            self.checks.len(),
            self.elapsed_ms
        );
        s
    }
}

/// C-style `%.<precision>e` formatting: mantissa with fixed decimals and a
/// signed, zero-padded (at least two digit) exponent, e.g. `4.200000000000e+01`.
/// Non-finite values render as `null` so JSON stays parseable.
pub fn format_sci(x: f64, precision: usize) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    let raw = format!("{:.*e}", precision, x);
    let (mantissa, exp) = raw.split_once('e').expect("exponential format always contains 'e'");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    format!("{}e{}{:02}", mantissa, if exp < 0 { '-' } else { '+' }, exp.abs())
}

/// Minimal JSON string escaping (quotes, backslash, control characters).
fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_formatting_matches_c_percent_e() {
        assert_eq!(format_sci(42.0, 12), "4.200000000000e+01");
        assert_eq!(format_sci(0.0, 12), "0.000000000000e+00");
        assert_eq!(format_sci(1e-9, 1), "1.0e-09");
        assert_eq!(format_sci(-3.25e-13, 3), "-3.250e-13");
        assert_eq!(format_sci(6.02214076e23, 4), "6.0221e+23");
        assert_eq!(format_sci(1.0e123, 1), "1.0e+123");
        assert_eq!(format_sci(f64::NAN, 3), "null");
    }

    fn sample_report() -> VerificationReport {
        VerificationReport {
            manifold: "flat3cos".to_string(),
            n: 1,
            seed: 42,
            order: 3,
            conventions: Conventions::default(),
            checks: vec![
                VerificationCheck::evaluate(
                    "acms-phi-square",
                    "phi squares to -1 plus the Reeb correction",
                    "phi_a^2 = -I + eta_a (x) xi_a",
                    3.2e-14,
                    1e-9,
                    32,
                ),
                VerificationCheck::evaluate(
                    "made-up-failure",
                    "illustrates a failing entry",
                    "none",
                    0.5,
                    1e-9,
                    4,
                ),
            ],
            elapsed_ms: 12,
        }
    }

    #[test]
    fn json_has_fixed_shape_and_consistent_summary() {
        let report = sample_report();
        let json = report.to_json();
        assert!(json.contains("\"manifold\": \"flat3cos\""));
        assert!(json.contains("\"max_residual\": 3.200000000000e-14"));
        assert!(json.contains("\"tolerance\": 1.000000000000e-09"));
        assert!(json.contains("\"paper_ref\": \"phi_a^2 = -I + eta_a (x) xi_a\""));
        assert!(json.contains("\"passed\": 1"));
        assert!(json.contains("\"failed\": 1"));
        assert!(json.contains("\"total\": 2"));
        // Field order is part of the contract.
        let manifold_at = json.find("\"manifold\"").unwrap();
        let seed_at = json.find("\"seed\"").unwrap();
        let checks_at = json.find("\"checks\"").unwrap();
        let summary_at = json.find("\"summary\"").unwrap();
        let elapsed_at = json.find("\"elapsed_ms\"").unwrap();
        assert!(manifold_at < seed_at && seed_at < checks_at);
        assert!(checks_at < summary_at && summary_at < elapsed_at);
    }

    #[test]
    fn json_is_reproducible_for_identical_inputs() {
        assert_eq!(sample_report().to_json(), sample_report().to_json());
    }

    #[test]
    fn text_lines_follow_the_documented_layout() {
        let text = sample_report().to_text();
        assert!(text.contains(
            "PASS  acms-phi-square  max_residual=3.200e-14  tol=1.0e-09  (phi_a^2 = -I + eta_a (x) xi_a)"
        ));
        assert!(text.contains("FAIL  made-up-failure"));
        assert!(text.contains("summary: passed=1 failed=1 total=2 elapsed_ms=12"));
    }

    #[test]
    fn non_finite_residuals_fail() {
        let check = VerificationCheck::evaluate("x", "d", "r", f64::NAN, 1e-9, 1);
        assert!(!check.pass);
    }

    #[test]
    fn json_strings_are_escaped() {
        assert_eq!(json_string("a\"b\\c\n"), "\"a\\\"b\\\\c\\n\"");
    }
}
