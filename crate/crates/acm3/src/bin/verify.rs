//! Command-line verifier.
//!
//! Builds one of the bundled models, samples chart points, runs the selected
//! check suite, and writes a text or JSON report.  Exit code 0 means every
//! check passed, 1 means at least one failed, and 2 is reserved for usage
//! errors.

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use acm3::canonical::CanonicalConnection;
use acm3::checks::{registry, run_checks, CheckContext, Suite};
use acm3::models::Model;
use acm3::report::{Conventions, VerificationReport};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ManifoldArg {
    /// Flat space R^{4n+3} with its translation-invariant 3-cosymplectic
    /// structure.
    #[value(name = "flat3cos")]
    Flat3Cos,
    /// The round sphere S^{4n+3} with its 3-Sasakian structure, in a
    /// stereographic chart.
    #[value(name = "sphere3sas")]
    Sphere3Sas,
    /// The flat model pushed through a seeded nonlinear diffeomorphism, so
    /// nothing is constant in coordinates.
    #[value(name = "flat3cos-scrambled")]
    Flat3CosScrambled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    All,
    Structure,
    Connection,
    Curvature,
    Darboux,
    Musical,
}

impl SuiteArg {
    fn to_suite(self) -> Option<Suite> {
        match self {
            SuiteArg::All => None,
            SuiteArg::Structure => Some(Suite::Structure),
            SuiteArg::Connection => Some(Suite::Connection),
            SuiteArg::Curvature => Some(Suite::Curvature),
            SuiteArg::Darboux => Some(Suite::Darboux),
            SuiteArg::Musical => Some(Suite::Musical),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportArg {
    Text,
    Json,
}

/// Verifies the structure, connection, curvature, frame, and reconstruction
/// identities of the bundled almost contact metric 3-structures at sampled
/// chart points.
#[derive(Parser)]
#[command(name = "verify", version, about)]
struct Args {
    /// Model to verify.
    #[arg(long, value_enum, required_unless_present = "list_checks")]
    manifold: Option<ManifoldArg>,

    /// Quaternionic size parameter; the chart has dimension 4n+3.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,

    /// Number of chart points to sample.
    #[arg(long, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    points: u32,

    /// Seed for point sampling and auxiliary test fields.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Tolerance for identities on the flat models.
    #[arg(long, default_value_t = 1e-9)]
    tol_flat: f64,

    /// Tolerance for identities on the curved model.
    #[arg(long, default_value_t = 1e-7)]
    tol_curved: f64,

    /// Highest jet order to cross-check against finite differences.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    order: u8,

    /// Restrict the run to one thematic suite.
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,

    /// Report format.
    #[arg(long, value_enum, default_value_t = ReportArg::Text)]
    report: ReportArg,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,

    /// Parallel-transport integration steps per unit chart distance.
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    ode_steps: u32,

    /// List every registered check id and the identity it verifies, then
    /// exit.
    #[arg(long)]
    list_checks: bool,
}

/// Writes to stdout, tolerating a closed pipe (e.g. `verify ... | head`).
fn write_stdout(s: &str) {
    let _ = std::io::stdout().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let args = Args::parse();

    if args.list_checks {
        let mut listing = String::new();
        for def in registry() {
            listing.push_str(&format!(
                "{:<36} [{}]  {}\n",
                def.id,
                def.suite.label(),
                def.reference
            ));
        }
        write_stdout(&listing);
        return ExitCode::SUCCESS;
    }

    let n = args.n as usize;
    let model = match args.manifold.expect("clap enforces --manifold") {
        ManifoldArg::Flat3Cos => Model::flat(n),
        ManifoldArg::Sphere3Sas => Model::sphere(n),
        ManifoldArg::Flat3CosScrambled => Model::scrambled_flat(n, args.seed),
    };

    let started = Instant::now();
    let points = model.sample_points(args.points as usize, args.seed);
    let canonical = CanonicalConnection::new(model.structure().clone());
    let ctx = CheckContext {
        model: &model,
        points: &points,
        seed: args.seed,
        order: args.order as usize,
        ode_steps: args.ode_steps as usize,
        tol_flat: args.tol_flat,
        tol_curved: args.tol_curved,
        canonical: &canonical,
    };
    let checks = run_checks(&ctx, args.suite.to_suite());

    let report = VerificationReport {
        manifold: model.kind().label().to_string(),
        n,
        seed: args.seed,
        order: args.order as usize,
        conventions: Conventions::default(),
        checks,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };

    let rendered = match args.report {
        ReportArg::Text => report.to_text(),
        ReportArg::Json => report.to_json(),
    };
    match &args.out {
        Some(path) => {
            if let Err(err) = fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {err}", path.display());
                return ExitCode::from(2);
            }
        }
        None => write_stdout(&rendered),
    }

    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
