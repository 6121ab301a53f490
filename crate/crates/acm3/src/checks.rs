//! The verification check registry.
//!
//! Every identity the engine can verify is declared here once, with a stable
//! kebab-case id, a one-line description, the formula it tests, the suite it
//! belongs to, the models it applies to, and a tolerance policy.  The
//! registry order is the report order.  Each check returns the worst
//! residual it saw across its sampled points; a report entry passes when
//! that residual meets the tolerance.
//!
//! Auxiliary fields (test vector fields, scalars, forms) are seeded
//! deterministically per check id, so reports are reproducible for a fixed
//! `(model, n, seed, points, order)` tuple.  Checks that evaluate nested
//! covariant derivatives cap how many points they visit: residual maxima
//! stabilize after a few points and the expensive graphs dominate runtime.

use crate::canonical::CanonicalConnection;
use crate::contact3::{
    form_matrix_on_basis, recover_metric, recover_phi_horizontal, AcmStructure, Acm3Structure,
    StructureClass,
};
use crate::darboux::{adapted_form_constants, build_darboux_frame, DarbouxError, DarbouxFrame};
use crate::fields::{
    lie_bracket, lie_derivative_endomorphism, lie_derivative_metric, OneForm, VectorField,
};
use crate::jets::ChartPoint;
use crate::models::{Model, ModelKind};
use crate::report::VerificationCheck;
use crate::riemann::Connection;
use crate::sampling::{derive_seed, random_polynomial_scalar, random_vector_field, SplitMix64};

/// Thematic grouping of checks; the CLI `--suite` flag filters on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Structure,
    Connection,
    Curvature,
    Darboux,
    Musical,
}

impl Suite {
    pub fn label(self) -> &'static str {
        match self {
            Suite::Structure => "structure",
            Suite::Connection => "connection",
            Suite::Curvature => "curvature",
            Suite::Darboux => "darboux",
            Suite::Musical => "musical",
        }
    }
}

/// Everything a check needs in order to run.
pub struct CheckContext<'a> {
    pub model: &'a Model,
    pub points: &'a [ChartPoint],
    pub seed: u64,
    pub order: usize,
    pub ode_steps: usize,
    pub tol_flat: f64,
    pub tol_curved: f64,
    pub canonical: &'a CanonicalConnection,
}

impl CheckContext<'_> {
    /// The default tolerance for the model under test.
    pub fn model_tolerance(&self) -> f64 {
        if self.model.kind().is_curved() {
            self.tol_curved
        } else {
            self.tol_flat
        }
    }
}

/// Result of running one check.
pub struct CheckOutcome {
    pub max_residual: f64,
    pub points_sampled: usize,
}

/// Tolerance policy for a check.
enum Tol {
    /// `tol_flat` or `tol_curved`, by model.
    Model,
    Fixed(f64),
    /// Computed from the context (e.g. depends on `n`).
    Fn(fn(&CheckContext) -> f64),
}

/// One registered check.
pub struct CheckDef {
    pub id: &'static str,
    pub description: &'static str,
    pub reference: &'static str,
    pub suite: Suite,
    applies: fn(&Model) -> bool,
    tolerance: Tol,
    run: fn(&CheckContext) -> CheckOutcome,
}

impl CheckDef {
    pub fn applies_to(&self, model: &Model) -> bool {
        (self.applies)(model)
    }

    pub fn tolerance_in(&self, ctx: &CheckContext) -> f64 {
        match self.tolerance {
            Tol::Model => ctx.model_tolerance(),
            Tol::Fixed(t) => t,
            Tol::Fn(f) => f(ctx),
        }
    }

    /// Runs the check and wraps the outcome as a report entry.
    pub fn execute(&self, ctx: &CheckContext) -> VerificationCheck {
        let outcome = (self.run)(ctx);
        VerificationCheck::evaluate(
            self.id,
            self.description,
            self.reference,
            outcome.max_residual,
            self.tolerance_in(ctx),
            outcome.points_sampled,
        )
    }
}

/// The full catalog, in report order.
pub fn registry() -> &'static [CheckDef] {
    REGISTRY
}

/// Runs every applicable check of the selected suite (or all suites).
pub fn run_checks(ctx: &CheckContext, suite: Option<Suite>) -> Vec<VerificationCheck> {
    registry()
        .iter()
        .filter(|c| suite.is_none_or(|s| s == c.suite))
        .filter(|c| c.applies_to(ctx.model))
        .map(|c| c.execute(ctx))
        .collect()
}

// ---------------------------------------------------------------------------
// Applicability predicates and small helpers
// ---------------------------------------------------------------------------

fn any_model(_: &Model) -> bool {
    true
}

fn flat_only(m: &Model) -> bool {
    !m.kind().is_curved()
}

fn curved_only(m: &Model) -> bool {
    m.kind().is_curved()
}

fn scrambled_only(m: &Model) -> bool {
    m.kind() == ModelKind::ScrambledFlat
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

fn capped(points: &[ChartPoint], cap: usize) -> &[ChartPoint] {
    &points[..points.len().min(cap)]
}

fn rng_for(ctx: &CheckContext, tag: &str) -> SplitMix64 {
    SplitMix64::new(derive_seed(ctx.seed, tag))
}

fn seeded_vectors(ctx: &CheckContext, tag: &str, count: usize) -> Vec<VectorField> {
    let mut rng = rng_for(ctx, tag);
    (0..count).map(|_| random_vector_field(&mut rng, ctx.model.dim())).collect()
}

fn seeded_horizontal(ctx: &CheckContext, tag: &str, count: usize) -> Vec<VectorField> {
    let s = ctx.model.structure();
    seeded_vectors(ctx, tag, count).iter().map(|f| s.horizontal_projection(f)).collect()
}

/// Worst residual of a per-point function over (at most `cap`) points.
fn worst_over(points: &[ChartPoint], cap: usize, f: impl Fn(&ChartPoint) -> f64) -> CheckOutcome {
    let pts = capped(points, cap);
    let max_residual = pts.iter().map(&f).fold(0.0_f64, f64::max);
    CheckOutcome { max_residual, points_sampled: pts.len() }
}

/// Worst single-structure residual over all three substructures and points.
fn per_single(ctx: &CheckContext, f: fn(&AcmStructure, &ChartPoint) -> f64) -> CheckOutcome {
    let singles: Vec<AcmStructure> = (0..3).map(|a| ctx.model.structure().single(a)).collect();
    worst_over(ctx.points, usize::MAX, |p| {
        singles.iter().map(|s| f(s, p)).fold(0.0_f64, f64::max)
    })
}

fn per_triple(ctx: &CheckContext, f: fn(&Acm3Structure, &ChartPoint) -> f64) -> CheckOutcome {
    let s = ctx.model.structure();
    worst_over(ctx.points, usize::MAX, |p| f(s, p))
}

// Point caps: identities on raw tensor components are cheap and use every
// point; identities built from lazy field graphs (covariant derivatives)
// visit fewer points; nested-curvature identities visit fewest.
const FIELD_CAP: usize = 4;
const HEAVY_CAP: usize = 2;

// ---------------------------------------------------------------------------
// Structure suite
// ---------------------------------------------------------------------------

fn run_jet_fd_oracle(ctx: &CheckContext) -> CheckOutcome {
    let m = ctx.model.dim();
    let s = ctx.model.structure();
    let mut rng = rng_for(ctx, "jet-fd-oracle");
    let e = random_vector_field(&mut rng, m);
    let f = random_vector_field(&mut rng, m);
    // A scalar that exercises the model's metric, 1-form, and endomorphism
    // components together.
    let scalar =
        s.metric.apply(&e, &f).add(&s.eta[0].apply(&e)).add(&s.eta[2].apply(&s.phi[1].apply(&f)));
    let poly = random_polynomial_scalar(&mut rng, m);
    let rel = |jet: f64, fd: f64| (jet - fd).abs() / fd.abs().max(1.0);
    worst_over(ctx.points, HEAVY_CAP, |p| {
        let jet = scalar.eval(p, 2);
        let mut worst = 0.0_f64;
        let h1 = 1e-5;
        for a in 0..m {
            let fd = (scalar.value(&p.shifted(a, h1)) - scalar.value(&p.shifted(a, -h1)))
                / (2.0 * h1);
            worst = worst.max(rel(jet.d1(a), fd));
        }
        let h2 = 1e-4;
        for a in 0..m {
            for b in a..m {
                let fd = if a == b {
                    (scalar.value(&p.shifted(a, h2)) - 2.0 * scalar.value(p)
                        + scalar.value(&p.shifted(a, -h2)))
                        / (h2 * h2)
                } else {
                    let pp = scalar.value(&p.shifted(a, h2).shifted(b, h2));
                    let pm = scalar.value(&p.shifted(a, h2).shifted(b, -h2));
                    let mp = scalar.value(&p.shifted(a, -h2).shifted(b, h2));
                    let mm = scalar.value(&p.shifted(a, -h2).shifted(b, -h2));
                    (pp - pm - mp + mm) / (4.0 * h2 * h2)
                };
                worst = worst.max(rel(jet.d2(a, b), fd));
            }
        }
        if ctx.order >= 3 {
            // Third derivatives: a seeded quadratic must have exactly zero
            // third jets, and the wide-stencil difference agrees to roundoff.
            let pj = poly.eval(p, 3);
            let h3 = 0.05;
            for a in 0..m {
                let fd = (poly.value(&p.shifted(a, 2.0 * h3)) - 2.0 * poly.value(&p.shifted(a, h3))
                    + 2.0 * poly.value(&p.shifted(a, -h3))
                    - poly.value(&p.shifted(a, -2.0 * h3)))
                    / (2.0 * h3 * h3 * h3);
                worst = worst.max(rel(pj.d3(a, a, a), fd));
            }
        }
        worst
    })
}

fn run_phi_square(ctx: &CheckContext) -> CheckOutcome {
    per_single(ctx, AcmStructure::residual_phi_square)
}

fn run_eta_xi(ctx: &CheckContext) -> CheckOutcome {
    per_single(ctx, AcmStructure::residual_eta_xi)
}

fn run_phi_xi(ctx: &CheckContext) -> CheckOutcome {
    per_single(ctx, AcmStructure::residual_phi_xi)
}

fn run_eta_phi(ctx: &CheckContext) -> CheckOutcome {
    per_single(ctx, AcmStructure::residual_eta_phi)
}

fn run_compatibility(ctx: &CheckContext) -> CheckOutcome {
    per_single(ctx, AcmStructure::residual_compatibility)
}

fn run_triple_phi(ctx: &CheckContext) -> CheckOutcome {
    per_triple(ctx, Acm3Structure::triple_phi_residual)
}

fn run_triple_xi(ctx: &CheckContext) -> CheckOutcome {
    per_triple(ctx, Acm3Structure::triple_xi_residual)
}

fn run_triple_eta(ctx: &CheckContext) -> CheckOutcome {
    per_triple(ctx, Acm3Structure::triple_eta_residual)
}

fn run_reeb_orthonormal(ctx: &CheckContext) -> CheckOutcome {
    per_triple(ctx, Acm3Structure::reeb_orthonormality_residual)
}

fn run_form_skew(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let m = s.dim();
    let forms: Vec<_> = (0..3).map(|a| s.fundamental_form(a)).collect();
    worst_over(ctx.points, usize::MAX, |p| {
        let mut worst = 0.0_f64;
        for form in &forms {
            let c = form.eval(p, 0);
            for i in 0..m {
                for j in 0..m {
                    worst = worst.max((c[i * m + j].value() + c[j * m + i].value()).abs());
                }
            }
        }
        worst
    })
}

fn run_normality(ctx: &CheckContext) -> CheckOutcome {
    let singles: Vec<AcmStructure> = (0..3).map(|a| ctx.model.structure().single(a)).collect();
    worst_over(ctx.points, 8, |p| {
        singles.iter().map(|s| s.normality_residual(p)).fold(0.0_f64, f64::max)
    })
}

fn run_dphi_closed(ctx: &CheckContext) -> CheckOutcome {
    let singles: Vec<AcmStructure> = (0..3).map(|a| ctx.model.structure().single(a)).collect();
    worst_over(ctx.points, 8, |p| {
        singles.iter().map(|s| s.dphi_residual(p)).fold(0.0_f64, f64::max)
    })
}

fn run_deta_vanishes(ctx: &CheckContext) -> CheckOutcome {
    per_single(ctx, AcmStructure::deta_residual)
}

fn run_deta_equals_phi(ctx: &CheckContext) -> CheckOutcome {
    per_single(ctx, AcmStructure::contact_metric_residual)
}

fn run_killing_reeb(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let derivs: Vec<_> = (0..3).map(|a| lie_derivative_metric(&s.xi[a], &s.metric)).collect();
    worst_over(ctx.points, 8, |p| {
        derivs.iter().map(|d| max_abs(&d.matrix_values(p))).fold(0.0_f64, f64::max)
    })
}

fn lie_phi_residual(ctx: &CheckContext, subtract_formula: bool) -> CheckOutcome {
    let s = ctx.model.structure();
    let mut fields = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            let mut lie = lie_derivative_endomorphism(&s.xi[a], &s.phi[b]);
            if subtract_formula {
                for c in 0..3 {
                    let eps = crate::contact3::epsilon(a, b, c);
                    if eps != 0.0 {
                        lie = lie.sub(&s.phi[c].scale(2.0 * eps));
                    }
                }
            }
            fields.push(lie);
        }
    }
    worst_over(ctx.points, 8, |p| {
        fields.iter().map(|f| max_abs(&f.matrix_values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_lie_phi_vanishes(ctx: &CheckContext) -> CheckOutcome {
    lie_phi_residual(ctx, false)
}

fn run_lie_phi_formula(ctx: &CheckContext) -> CheckOutcome {
    lie_phi_residual(ctx, true)
}

fn classification_outcome(ctx: &CheckContext, expected: StructureClass) -> CheckOutcome {
    let pts = capped(ctx.points, 4);
    let class = ctx.model.structure().classify(pts, ctx.model_tolerance());
    CheckOutcome {
        max_residual: if class == expected { 0.0 } else { 1.0 },
        points_sampled: pts.len(),
    }
}

fn run_classification_cosymplectic(ctx: &CheckContext) -> CheckOutcome {
    classification_outcome(ctx, StructureClass::Cosymplectic)
}

fn run_classification_sasakian(ctx: &CheckContext) -> CheckOutcome {
    classification_outcome(ctx, StructureClass::Sasakian)
}

fn run_scramble_eta_shifted(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let m = s.dim();
    let vertical_start = 4 * s.n();
    let p = &ctx.points[0];
    let eta1 = s.eta[0].eval(p, 0);
    let mut witness = 0.0_f64;
    for i in 0..m {
        let unscrambled = f64::from(i == vertical_start);
        witness = witness.max((eta1[i].value() - unscrambled).abs());
    }
    CheckOutcome { max_residual: (0.1 - witness).max(0.0), points_sampled: 1 }
}

// ---------------------------------------------------------------------------
// Connection suite
// ---------------------------------------------------------------------------

fn run_lc_torsion_free(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "lc-torsion", 3);
    let lc = ctx.canonical.levi_civita();
    let t1 = lc.torsion(&fields[0], &fields[1]);
    let t2 = lc.torsion(&fields[1], &fields[2]);
    worst_over(ctx.points, FIELD_CAP, |p| max_abs(&t1.values(p)).max(max_abs(&t2.values(p))))
}

fn run_lc_metric(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "lc-metric", 3);
    let (e, f, g) = (&fields[0], &fields[1], &fields[2]);
    let lc = ctx.canonical.levi_civita();
    let metric = lc.metric();
    let residual = metric
        .apply(f, g)
        .directional_derivative(e)
        .sub(&metric.apply(&lc.covariant_derivative(e, f), g))
        .sub(&metric.apply(f, &lc.covariant_derivative(e, g)));
    worst_over(ctx.points, FIELD_CAP, |p| residual.value(p).abs())
}

fn nabla_xi_residual(ctx: &CheckContext, add_phi: bool) -> CheckOutcome {
    let s = ctx.model.structure();
    let fields = seeded_vectors(ctx, "nabla-xi", 2);
    let lc = ctx.canonical.levi_civita();
    let mut residuals = Vec::new();
    for e in &fields {
        for alpha in 0..3 {
            let mut d = lc.covariant_derivative(e, &s.xi[alpha]);
            if add_phi {
                d = d.add(&s.phi[alpha].apply(e));
            }
            residuals.push(d);
        }
    }
    worst_over(ctx.points, FIELD_CAP, |p| {
        residuals.iter().map(|r| max_abs(&r.values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_cosym_nabla_xi(ctx: &CheckContext) -> CheckOutcome {
    nabla_xi_residual(ctx, false)
}

fn run_sasaki_nabla_xi(ctx: &CheckContext) -> CheckOutcome {
    nabla_xi_residual(ctx, true)
}

fn run_reeb_bracket_horizontal(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let xs = seeded_horizontal(ctx, "reeb-bracket", 2);
    let mut pairings = Vec::new();
    for x in &xs {
        for alpha in 0..3 {
            let bracket = lie_bracket(x, &s.xi[alpha]);
            for beta in 0..3 {
                pairings.push(s.eta[beta].apply(&bracket));
            }
        }
    }
    worst_over(ctx.points, FIELD_CAP, |p| {
        pairings.iter().map(|v| v.value(p).abs()).fold(0.0_f64, f64::max)
    })
}

fn run_canonical_xi_parallel(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let fields = seeded_vectors(ctx, "canon-xi", 2);
    let mut residuals = Vec::new();
    for e in &fields {
        for alpha in 0..3 {
            residuals.push(ctx.canonical.covariant_derivative(e, &s.xi[alpha]));
        }
    }
    worst_over(ctx.points, FIELD_CAP, |p| {
        residuals.iter().map(|r| max_abs(&r.values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_canonical_eta_parallel(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "canon-eta", 2);
    let mut residuals = Vec::new();
    for alpha in 0..3 {
        residuals.push(ctx.canonical.covariant_derivative_eta(alpha, &fields[0], &fields[1]));
    }
    worst_over(ctx.points, FIELD_CAP, |p| {
        residuals.iter().map(|r| r.value(p).abs()).fold(0.0_f64, f64::max)
    })
}

fn run_canonical_metric_parallel(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "canon-metric", 3);
    let (e, f, g) = (&fields[0], &fields[1], &fields[2]);
    let metric = &ctx.model.structure().metric;
    let residual = metric
        .apply(f, g)
        .directional_derivative(e)
        .sub(&metric.apply(&ctx.canonical.covariant_derivative(e, f), g))
        .sub(&metric.apply(f, &ctx.canonical.covariant_derivative(e, g)));
    worst_over(ctx.points, FIELD_CAP, |p| residual.value(p).abs())
}

fn run_canonical_phi_parallel(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "canon-phi", 2);
    let mut residuals = Vec::new();
    for alpha in 0..3 {
        residuals.push(ctx.canonical.covariant_derivative_phi(alpha, &fields[0], &fields[1]));
    }
    worst_over(ctx.points, HEAVY_CAP, |p| {
        residuals.iter().map(|r| max_abs(&r.values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_canonical_phi_formula(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "canon-phi-formula", 2);
    let (e, f) = (&fields[0], &fields[1]);
    let mut residuals = Vec::new();
    for alpha in 0..3 {
        residuals.push(
            ctx.canonical
                .covariant_derivative_phi(alpha, e, f)
                .sub(&ctx.canonical.phi_derivative_prediction(alpha, e, f)),
        );
    }
    worst_over(ctx.points, HEAVY_CAP, |p| {
        residuals.iter().map(|r| max_abs(&r.values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_canonical_phi_vertical_special(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let x = &seeded_horizontal(ctx, "canon-phi-special", 1)[0];
    let residual = ctx
        .canonical
        .covariant_derivative_phi(0, &s.xi[1], x)
        .add(&s.phi[2].apply(x).scale(2.0));
    worst_over(ctx.points, HEAVY_CAP, |p| max_abs(&residual.values(p)))
}

fn run_canonical_equals_lc(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "canon-vs-lc", 2);
    let (e, f) = (&fields[0], &fields[1]);
    let lc = ctx.canonical.levi_civita();
    let diff = ctx.canonical.covariant_derivative(e, f).sub(&lc.covariant_derivative(e, f));
    worst_over(ctx.points, FIELD_CAP, |p| max_abs(&diff.values(p)))
}

fn run_canonical_leibniz(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "canon-leibniz", 2);
    let (e, f) = (&fields[0], &fields[1]);
    let mut rng = rng_for(ctx, "canon-leibniz-scalar");
    let h = random_polynomial_scalar(&mut rng, ctx.model.dim());
    let residual = ctx
        .canonical
        .covariant_derivative(e, &f.scale_by(&h))
        .sub(&f.scale_by(&h.directional_derivative(e)))
        .sub(&ctx.canonical.covariant_derivative(e, f).scale_by(&h));
    worst_over(ctx.points, HEAVY_CAP, |p| max_abs(&residual.values(p)))
}

fn run_torsion_horizontal(ctx: &CheckContext) -> CheckOutcome {
    let xs = seeded_horizontal(ctx, "torsion-horizontal", 2);
    let (x, y) = (&xs[0], &xs[1]);
    let residual =
        ctx.canonical.torsion(x, y).sub(&ctx.canonical.torsion_prediction(x, y));
    worst_over(ctx.points, HEAVY_CAP, |p| max_abs(&residual.values(p)))
}

fn run_torsion_mixed(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let x = &seeded_horizontal(ctx, "torsion-mixed", 1)[0];
    let residuals: Vec<_> = (0..3).map(|a| ctx.canonical.torsion(x, &s.xi[a])).collect();
    worst_over(ctx.points, HEAVY_CAP, |p| {
        residuals.iter().map(|r| max_abs(&r.values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_torsion_vertical(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let mut residuals = Vec::new();
    for a in 0..3 {
        for b in (a + 1)..3 {
            residuals.push(
                ctx.canonical.torsion(&s.xi[a], &s.xi[b]).sub(&lie_bracket(&s.xi[b], &s.xi[a])),
            );
        }
    }
    worst_over(ctx.points, HEAVY_CAP, |p| {
        residuals.iter().map(|r| max_abs(&r.values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_torsion_general(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "torsion-general", 2);
    let (e, f) = (&fields[0], &fields[1]);
    let residual =
        ctx.canonical.torsion(e, f).sub(&ctx.canonical.torsion_prediction(e, f));
    worst_over(ctx.points, HEAVY_CAP, |p| max_abs(&residual.values(p)))
}

fn run_horizontal_bracket_eta(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let xs = seeded_horizontal(ctx, "horizontal-bracket", 3);
    let mut pairings = Vec::new();
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            let bracket = lie_bracket(&xs[i], &xs[j]);
            for alpha in 0..3 {
                pairings.push(s.eta[alpha].apply(&bracket));
            }
        }
    }
    worst_over(ctx.points, FIELD_CAP, |p| {
        pairings.iter().map(|v| v.value(p).abs()).fold(0.0_f64, f64::max)
    })
}

fn run_nonintegrability_witness(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let xs = seeded_horizontal(ctx, "nonintegrability", 2);
    let bracket = lie_bracket(&xs[0], &xs[1]);
    let pairings: Vec<_> = (0..3).map(|a| s.eta[a].apply(&bracket)).collect();
    let pts = capped(ctx.points, FIELD_CAP);
    let witness = pts
        .iter()
        .flat_map(|p| pairings.iter().map(move |v| v.value(p).abs()))
        .fold(0.0_f64, f64::max);
    CheckOutcome { max_residual: (0.1 - witness).max(0.0), points_sampled: pts.len() }
}

// ---------------------------------------------------------------------------
// Curvature suite
// ---------------------------------------------------------------------------

fn run_riemann_vanishes(ctx: &CheckContext) -> CheckOutcome {
    let lc = ctx.canonical.levi_civita();
    worst_over(ctx.points, usize::MAX, |p| max_abs(&lc.riemann_values(p)))
}

fn run_ricci_flat(ctx: &CheckContext) -> CheckOutcome {
    let lc = ctx.canonical.levi_civita();
    worst_over(ctx.points, usize::MAX, |p| max_abs(&lc.ricci_values(p)))
}

fn run_scalar_curvature(ctx: &CheckContext) -> CheckOutcome {
    let n = ctx.model.n() as f64;
    let target = 2.0 * (2.0 * n + 1.0) * (4.0 * n + 3.0);
    let lc = ctx.canonical.levi_civita();
    worst_over(ctx.points, 8, |p| (lc.scalar_curvature(p) - target).abs())
}

fn run_einstein_ricci(ctx: &CheckContext) -> CheckOutcome {
    let einstein = 4.0 * ctx.model.n() as f64 + 2.0;
    let lc = ctx.canonical.levi_civita();
    let metric = &ctx.model.structure().metric;
    let m = ctx.model.dim();
    worst_over(ctx.points, 8, |p| {
        let ric = lc.ricci_values(p);
        let g = metric.matrix_values(p);
        let mut worst = 0.0_f64;
        for i in 0..m * m {
            worst = worst.max((ric[i] - einstein * g[i]).abs());
        }
        worst
    })
}

fn run_sectional_vertical(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let lc = ctx.canonical.levi_civita();
    worst_over(ctx.points, 8, |p| {
        let xi: Vec<Vec<f64>> = (0..3).map(|a| s.xi[a].values(p)).collect();
        let mut worst = 0.0_f64;
        for a in 0..3 {
            for b in (a + 1)..3 {
                worst = worst.max((lc.sectional_curvature(p, &xi[a], &xi[b]) - 1.0).abs());
            }
        }
        worst
    })
}

fn run_sectional_constant(ctx: &CheckContext) -> CheckOutcome {
    let m = ctx.model.dim();
    let mut rng = rng_for(ctx, "sectional");
    let planes: Vec<(Vec<f64>, Vec<f64>)> = (0..2)
        .map(|_| {
            let u: Vec<f64> = (0..m).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let v: Vec<f64> = (0..m).map(|_| rng.uniform(-1.0, 1.0)).collect();
            (u, v)
        })
        .collect();
    let lc = ctx.canonical.levi_civita();
    worst_over(ctx.points, 8, |p| {
        planes
            .iter()
            .map(|(u, v)| (lc.sectional_curvature(p, u, v) - 1.0).abs())
            .fold(0.0_f64, f64::max)
    })
}

fn run_bianchi_first(ctx: &CheckContext) -> CheckOutcome {
    let lc = ctx.canonical.levi_civita();
    let m = ctx.model.dim();
    worst_over(ctx.points, 4, |p| {
        let r = lc.riemann_values(p);
        let at = |l: usize, i: usize, j: usize, k: usize| r[((l * m + i) * m + j) * m + k];
        let mut worst = 0.0_f64;
        for l in 0..m {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        worst =
                            worst.max((at(l, i, j, k) + at(l, j, k, i) + at(l, k, i, j)).abs());
                    }
                }
            }
        }
        worst
    })
}

fn run_riemann_operator_vs_tensor(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "riemann-operator", 3);
    let (x, y, z) = (&fields[0], &fields[1], &fields[2]);
    let lc = ctx.canonical.levi_civita();
    let m = ctx.model.dim();
    let operator = lc.curvature_operator(x, y, z);
    worst_over(ctx.points, HEAVY_CAP, |p| {
        let op = operator.values(p);
        let r = lc.riemann_values(p);
        let (xv, yv, zv) = (x.values(p), y.values(p), z.values(p));
        let mut worst = 0.0_f64;
        for l in 0..m {
            let mut acc = 0.0;
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        acc += r[((l * m + i) * m + j) * m + k] * xv[i] * yv[j] * zv[k];
                    }
                }
            }
            worst = worst.max((op[l] - acc).abs());
        }
        worst
    })
}

fn run_rtilde_xi_annihilated(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let fields = seeded_vectors(ctx, "rtilde-xi", 2);
    let residuals: Vec<_> = (0..3)
        .map(|a| ctx.canonical.curvature_operator(&fields[0], &fields[1], &s.xi[a]))
        .collect();
    worst_over(ctx.points, 1, |p| {
        residuals.iter().map(|r| max_abs(&r.values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_rtilde_vertical_pair(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let e = &seeded_vectors(ctx, "rtilde-vertical", 1)[0];
    let mut residuals = Vec::new();
    for a in 0..3 {
        for b in (a + 1)..3 {
            residuals.push(ctx.canonical.curvature_operator(&s.xi[a], &s.xi[b], e));
        }
    }
    worst_over(ctx.points, 1, |p| {
        residuals.iter().map(|r| max_abs(&r.values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_rtilde_mixed(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let xs = seeded_horizontal(ctx, "rtilde-mixed", 2);
    let residuals: Vec<_> = (0..3)
        .map(|a| ctx.canonical.curvature_operator(&xs[0], &s.xi[a], &xs[1]))
        .collect();
    worst_over(ctx.points, 1, |p| {
        residuals.iter().map(|r| max_abs(&r.values(p))).fold(0.0_f64, f64::max)
    })
}

fn run_rtilde_horizontal_formula(ctx: &CheckContext) -> CheckOutcome {
    let xs = seeded_horizontal(ctx, "rtilde-horizontal", 3);
    let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
    let residual = ctx
        .canonical
        .curvature_operator(x, y, z)
        .sub(&ctx.canonical.horizontal_curvature_prediction(x, y, z));
    worst_over(ctx.points, 1, |p| max_abs(&residual.values(p)))
}

fn run_projected_scalar(ctx: &CheckContext) -> CheckOutcome {
    let n = ctx.model.n() as f64;
    let target = if ctx.model.kind().is_curved() { 16.0 * n * (n + 2.0) } else { 0.0 };
    worst_over(ctx.points, HEAVY_CAP, |p| {
        (ctx.canonical.projected_scalar_curvature(p) - target).abs()
    })
}

fn run_projected_scalar_spread(ctx: &CheckContext) -> CheckOutcome {
    let pts = capped(ctx.points, 4);
    let values: Vec<f64> =
        pts.iter().map(|p| ctx.canonical.projected_scalar_curvature(p)).collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    CheckOutcome { max_residual: hi - lo, points_sampled: pts.len() }
}

fn run_nonflatness_witness(ctx: &CheckContext) -> CheckOutcome {
    let value = ctx.canonical.projected_scalar_curvature(&ctx.points[0]);
    CheckOutcome { max_residual: (1e-3 - value).max(0.0), points_sampled: 1 }
}

// ---------------------------------------------------------------------------
// Musical suite
// ---------------------------------------------------------------------------

fn run_musical_roundtrip(ctx: &CheckContext) -> CheckOutcome {
    let fields = seeded_vectors(ctx, "musical-roundtrip", 2);
    let metric = &ctx.model.structure().metric;
    let e = &fields[0];
    let vector_residual = metric.sharp(&metric.flat(e)).sub(e);
    let components = fields[1].clone();
    let m = ctx.model.dim();
    let omega = OneForm::from_fn(m, move |p, order| components.eval(p, order));
    let form_residual = metric.flat(&metric.sharp(&omega)).sub(&omega);
    worst_over(ctx.points, FIELD_CAP, |p| {
        let v = max_abs(&vector_residual.values(p));
        let w = form_residual.eval(p, 0).iter().fold(0.0_f64, |acc, j| acc.max(j.value().abs()));
        v.max(w)
    })
}

fn run_musical_form_dual(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let xs = seeded_horizontal(ctx, "musical-dual", 2);
    let (x, y) = (&xs[0], &xs[1]);
    let g_xy = s.metric.apply(x, y);
    let mut residuals = Vec::new();
    for alpha in 0..3 {
        let lhs = s.fundamental_form(alpha).apply(&s.phi[alpha].apply(x), y);
        residuals.push(lhs.sub(&g_xy));
    }
    worst_over(ctx.points, FIELD_CAP, |p| {
        residuals.iter().map(|r| r.value(p).abs()).fold(0.0_f64, f64::max)
    })
}

fn run_musical_skew_identity(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let xs = seeded_horizontal(ctx, "musical-skew", 2);
    let (x, y) = (&xs[0], &xs[1]);
    // Phi_2(phi_3 X, Y) = -Phi_3(phi_2 X, Y) = Phi_1(X, Y) on horizontal
    // arguments.
    let a = s.fundamental_form(1).apply(&s.phi[2].apply(x), y);
    let b = s.fundamental_form(2).apply(&s.phi[1].apply(x), y);
    let c = s.fundamental_form(0).apply(x, y);
    let r1 = a.add(&b);
    let r2 = a.sub(&c);
    worst_over(ctx.points, FIELD_CAP, |p| r1.value(p).abs().max(r2.value(p).abs()))
}

fn run_phi_from_forms(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let m = s.dim();
    let forms = [s.fundamental_form(0), s.fundamental_form(1), s.fundamental_form(2)];
    worst_over(ctx.points, FIELD_CAP, |p| {
        let basis = s.horizontal_basis(p);
        let k = basis.len();
        let g = s.metric.matrix_values(p);
        let gram_inv = {
            let gram = nalgebra::DMatrix::from_fn(k, k, |r, c| {
                let mut acc = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        acc += g[i * m + j] * basis[r][i] * basis[c][j];
                    }
                }
                acc
            });
            gram.try_inverse().expect("horizontal Gram matrix must be invertible")
        };
        let mut worst = 0.0_f64;
        for alpha in 0..3 {
            let recovered = recover_phi_horizontal(&forms, alpha, p, &basis);
            // True matrix of phi_alpha in the basis: solve the Gram system
            // for the coefficients of phi_alpha b_j against the basis.
            let phi = s.phi[alpha].matrix_values(p);
            for j in 0..k {
                let mut image = vec![0.0; m];
                for r in 0..m {
                    for c in 0..m {
                        image[r] += phi[r * m + c] * basis[j][c];
                    }
                }
                // rhs_r = g(phi b_j, b_r)
                let rhs = nalgebra::DVector::from_fn(k, |r, _| {
                    let mut acc = 0.0;
                    for i in 0..m {
                        for l in 0..m {
                            acc += g[i * m + l] * image[i] * basis[r][l];
                        }
                    }
                    acc
                });
                let coeffs = &gram_inv * rhs;
                for r in 0..k {
                    worst = worst.max((recovered[(r, j)] - coeffs[r]).abs());
                }
            }
        }
        worst
    })
}

fn run_metric_reconstruction_banyaga(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let m = s.dim();
    let forms = [s.fundamental_form(0), s.fundamental_form(1), s.fundamental_form(2)];
    worst_over(ctx.points, FIELD_CAP, |p| {
        let basis = s.horizontal_basis(p);
        let b1 = form_matrix_on_basis(&forms[0], p, &basis);
        let b2 = form_matrix_on_basis(&forms[1], p, &basis);
        let b3 = form_matrix_on_basis(&forms[2], p, &basis);
        let recovered =
            -(b3 * b2.try_inverse().expect("form matrix must be invertible") * b1);
        let g = s.metric.matrix_values(p);
        let k = basis.len();
        let mut worst = 0.0_f64;
        for r in 0..k {
            for c in 0..k {
                let mut acc = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        acc += g[i * m + j] * basis[r][i] * basis[c][j];
                    }
                }
                worst = worst.max((recovered[(r, c)] - acc).abs());
            }
        }
        worst
    })
}

fn run_metric_reconstruction_full(ctx: &CheckContext) -> CheckOutcome {
    let s = ctx.model.structure();
    let forms = [s.fundamental_form(0), s.fundamental_form(1), s.fundamental_form(2)];
    let xi = s.xi.clone();
    let eta = s.eta.clone();
    worst_over(ctx.points, FIELD_CAP, |p| {
        let recovered = recover_metric(&forms, &xi, &eta, p);
        let g = s.metric.matrix_values(p);
        recovered
            .iter()
            .zip(&g)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    })
}

// ---------------------------------------------------------------------------
// Darboux suite
// ---------------------------------------------------------------------------

/// Builds the frame at the first sample point and returns it along with the
/// probe points the frame should be evaluated at.
fn darboux_frame_for(ctx: &CheckContext) -> (DarbouxFrame, Vec<ChartPoint>) {
    let base = &ctx.points[0];
    let frame = build_darboux_frame(ctx.model, base, ctx.ode_steps)
        .expect("darboux checks only apply to flat models");
    let probes: Vec<ChartPoint> = if ctx.points.len() > 1 {
        capped(&ctx.points[1..], HEAVY_CAP).to_vec()
    } else {
        vec![base.clone()]
    };
    (frame, probes)
}

fn run_darboux_orthonormal(ctx: &CheckContext) -> CheckOutcome {
    let (frame, probes) = darboux_frame_for(ctx);
    let s = ctx.model.structure();
    let m = s.dim();
    let mut worst = 0.0_f64;
    for q in &probes {
        let vectors = frame.frame_at(q);
        let g = s.metric.matrix_values(q);
        for r in 0..m {
            for c in 0..m {
                let mut acc = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        acc += g[i * m + j] * vectors[r][i] * vectors[c][j];
                    }
                }
                worst = worst.max((acc - f64::from(r == c)).abs());
            }
        }
    }
    CheckOutcome { max_residual: worst, points_sampled: probes.len() }
}

fn run_darboux_phi_relations(ctx: &CheckContext) -> CheckOutcome {
    let (frame, probes) = darboux_frame_for(ctx);
    let s = ctx.model.structure();
    let (m, n) = (s.dim(), s.n());
    let mut worst = 0.0_f64;
    for q in &probes {
        let vectors = frame.frame_at(q);
        for alpha in 0..3 {
            let phi = s.phi[alpha].matrix_values(q);
            for i in 0..n {
                let expected = &vectors[(alpha + 1) * n + i];
                for r in 0..m {
                    let got: f64 = (0..m).map(|c| phi[r * m + c] * vectors[i][c]).sum();
                    worst = worst.max((got - expected[r]).abs());
                }
            }
        }
    }
    CheckOutcome { max_residual: worst, points_sampled: probes.len() }
}

fn run_darboux_constants(ctx: &CheckContext) -> CheckOutcome {
    let (frame, probes) = darboux_frame_for(ctx);
    let s = ctx.model.structure();
    let (m, n) = (s.dim(), s.n());
    let forms = [s.fundamental_form(0), s.fundamental_form(1), s.fundamental_form(2)];
    let mut worst = 0.0_f64;
    for q in &probes {
        let vectors = frame.frame_at(q);
        for alpha in 0..3 {
            let comps = forms[alpha].eval(q, 0);
            let expected = adapted_form_constants(alpha, n);
            for r in 0..m {
                for c in 0..m {
                    let mut acc = 0.0;
                    for i in 0..m {
                        for j in 0..m {
                            acc += comps[i * m + j].value() * vectors[r][i] * vectors[c][j];
                        }
                    }
                    worst = worst.max((acc - expected[r][c]).abs());
                }
            }
        }
    }
    CheckOutcome { max_residual: worst, points_sampled: probes.len() }
}

fn run_darboux_brackets(ctx: &CheckContext) -> CheckOutcome {
    let (frame, probes) = darboux_frame_for(ctx);
    let m = ctx.model.dim();
    let q = &probes[0];
    let h = 1e-4;
    let plus: Vec<Vec<Vec<f64>>> = (0..m).map(|a| frame.frame_at(&q.shifted(a, h))).collect();
    let minus: Vec<Vec<Vec<f64>>> = (0..m).map(|a| frame.frame_at(&q.shifted(a, -h))).collect();
    let at_q = frame.frame_at(q);
    let partial = |a: usize, r: usize, k: usize| (plus[a][r][k] - minus[a][r][k]) / (2.0 * h);
    let mut worst = 0.0_f64;
    for r in 0..m {
        for c in (r + 1)..m {
            for k in 0..m {
                let mut bracket = 0.0;
                for j in 0..m {
                    bracket += at_q[r][j] * partial(j, c, k) - at_q[c][j] * partial(j, r, k);
                }
                worst = worst.max(bracket.abs());
            }
        }
    }
    CheckOutcome { max_residual: worst, points_sampled: 1 }
}

fn run_darboux_rejection(ctx: &CheckContext) -> CheckOutcome {
    let outcome = match build_darboux_frame(ctx.model, &ctx.points[0], ctx.ode_steps) {
        Err(DarbouxError::NotFlat { residual }) if residual > 0.1 => 0.0,
        _ => 1.0,
    };
    CheckOutcome { max_residual: outcome, points_sampled: 1 }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

fn tol_scalar_curvature(ctx: &CheckContext) -> f64 {
    if ctx.model.n() == 1 {
        1e-5
    } else {
        1e-4
    }
}

fn tol_projected_scalar(ctx: &CheckContext) -> f64 {
    if !ctx.model.kind().is_curved() {
        ctx.tol_flat
    } else if ctx.model.n() == 1 {
        1e-4
    } else {
        1e-3
    }
}

static REGISTRY: &[CheckDef] = &[
    // ---- structure ----
    CheckDef {
        id: "jet-fd-oracle",
        description: "jet partial derivatives of model-derived scalars agree with central finite differences (relative)",
        reference: "d^k f via jets vs central differences, orders 1..order",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Fixed(1e-6),
        run: run_jet_fd_oracle,
    },
    CheckDef {
        id: "acms-phi-square",
        description: "each endomorphism squares to minus identity plus the Reeb correction",
        reference: "phi_a^2 = -I + xi_a (x) eta_a",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_phi_square,
    },
    CheckDef {
        id: "acms-eta-xi",
        description: "each 1-form pairs to one with its Reeb field",
        reference: "eta_a(xi_a) = 1",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_eta_xi,
    },
    CheckDef {
        id: "acms-phi-xi",
        description: "each endomorphism annihilates its Reeb field",
        reference: "phi_a xi_a = 0",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_phi_xi,
    },
    CheckDef {
        id: "acms-eta-phi",
        description: "each 1-form annihilates the image of its endomorphism",
        reference: "eta_a . phi_a = 0",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_eta_phi,
    },
    CheckDef {
        id: "acms-compatibility",
        description: "the metric is compatible with each structure",
        reference: "g(phi_a X, phi_a Y) = g(X, Y) - eta_a(X) eta_a(Y)",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_compatibility,
    },
    CheckDef {
        id: "triple-phi-composition",
        description: "the three endomorphisms compose quaternionically",
        reference: "phi_c = phi_a phi_b - xi_a (x) eta_b = -phi_b phi_a + xi_b (x) eta_a",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_triple_phi,
    },
    CheckDef {
        id: "triple-phi-xi",
        description: "the endomorphisms permute the Reeb fields cyclically",
        reference: "xi_c = phi_a xi_b = -phi_b xi_a",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_triple_xi,
    },
    CheckDef {
        id: "triple-eta-phi",
        description: "the 1-forms compose with the endomorphisms cyclically",
        reference: "eta_c = eta_a . phi_b = -eta_b . phi_a",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_triple_eta,
    },
    CheckDef {
        id: "reeb-orthonormal",
        description: "the three Reeb fields are orthonormal",
        reference: "g(xi_a, xi_b) = delta_ab",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_reeb_orthonormal,
    },
    CheckDef {
        id: "fundamental-form-skew",
        description: "each fundamental 2-form is antisymmetric",
        reference: "Phi_a(X, Y) = g(X, phi_a Y) = -Phi_a(Y, X)",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_form_skew,
    },
    CheckDef {
        id: "normality-nijenhuis",
        description: "each structure is normal: the torsion tensor of the almost complex cone vanishes",
        reference: "N_a = [phi_a, phi_a] + 2 d eta_a (x) xi_a = 0",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_normality,
    },
    CheckDef {
        id: "dphi-closed",
        description: "each fundamental 2-form is closed",
        reference: "d Phi_a = 0",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_dphi_closed,
    },
    CheckDef {
        id: "deta-vanishes",
        description: "the Reeb 1-forms are closed on the translation-invariant model",
        reference: "d eta_a = 0",
        suite: Suite::Structure,
        applies: flat_only,
        tolerance: Tol::Model,
        run: run_deta_vanishes,
    },
    CheckDef {
        id: "deta-equals-phi",
        description: "the Reeb 1-forms differentiate to the fundamental forms on the sphere",
        reference: "d eta_a = Phi_a",
        suite: Suite::Structure,
        applies: curved_only,
        tolerance: Tol::Model,
        run: run_deta_equals_phi,
    },
    CheckDef {
        id: "killing-reeb",
        description: "each Reeb field is a Killing field of the metric",
        reference: "L_{xi_a} g = 0",
        suite: Suite::Structure,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_killing_reeb,
    },
    CheckDef {
        id: "lie-phi-vanishes",
        description: "Reeb flows preserve every endomorphism on the flat model",
        reference: "L_{xi_a} phi_b = 0",
        suite: Suite::Structure,
        applies: flat_only,
        tolerance: Tol::Fixed(1e-12),
        run: run_lie_phi_vanishes,
    },
    CheckDef {
        id: "lie-phi-formula",
        description: "Reeb flows rotate the endomorphisms on the sphere",
        reference: "L_{xi_a} phi_b = 2 sum_c eps_abc phi_c",
        suite: Suite::Structure,
        applies: curved_only,
        tolerance: Tol::Model,
        run: run_lie_phi_formula,
    },
    CheckDef {
        id: "classification-cosymplectic",
        description: "the classifier labels the flat model cosymplectic",
        reference: "normal + d eta_a = 0 + d Phi_a = 0",
        suite: Suite::Structure,
        applies: flat_only,
        tolerance: Tol::Fixed(0.5),
        run: run_classification_cosymplectic,
    },
    CheckDef {
        id: "classification-sasakian",
        description: "the classifier labels the sphere model Sasakian",
        reference: "normal + d eta_a = Phi_a",
        suite: Suite::Structure,
        applies: curved_only,
        tolerance: Tol::Fixed(0.5),
        run: run_classification_sasakian,
    },
    CheckDef {
        id: "scramble-eta-shifted",
        description: "the scrambled chart genuinely moves the Reeb 1-forms off their coordinate expressions",
        reference: "max |eta_1 - dz_1| >= 0.1 (witness margin)",
        suite: Suite::Structure,
        applies: scrambled_only,
        tolerance: Tol::Fixed(1e-12),
        run: run_scramble_eta_shifted,
    },
    // ---- connection ----
    CheckDef {
        id: "levi-civita-torsion-free",
        description: "the metric connection is torsion-free",
        reference: "nabla_X Y - nabla_Y X - [X, Y] = 0",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_lc_torsion_free,
    },
    CheckDef {
        id: "levi-civita-metric",
        description: "the metric connection preserves the metric",
        reference: "X.g(Y, Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z)",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_lc_metric,
    },
    CheckDef {
        id: "cosym-nabla-xi",
        description: "Reeb fields are parallel for the metric connection on the flat model",
        reference: "nabla_E xi_a = 0",
        suite: Suite::Connection,
        applies: flat_only,
        tolerance: Tol::Model,
        run: run_cosym_nabla_xi,
    },
    CheckDef {
        id: "sasaki-nabla-xi",
        description: "Reeb fields rotate by the endomorphisms under the metric connection on the sphere",
        reference: "nabla_E xi_a = -phi_a E",
        suite: Suite::Connection,
        applies: curved_only,
        tolerance: Tol::Model,
        run: run_sasaki_nabla_xi,
    },
    CheckDef {
        id: "reeb-bracket-horizontal",
        description: "brackets of horizontal fields with Reeb fields stay horizontal",
        reference: "eta_b([X, xi_a]) = 0 for horizontal X",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Fixed(1e-8),
        run: run_reeb_bracket_horizontal,
    },
    CheckDef {
        id: "canonical-xi-parallel",
        description: "the canonical connection makes every Reeb field parallel",
        reference: "nabla~_E xi_a = 0",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_canonical_xi_parallel,
    },
    CheckDef {
        id: "canonical-eta-parallel",
        description: "the canonical connection makes every Reeb 1-form parallel",
        reference: "(nabla~_E eta_a)(F) = 0",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_canonical_eta_parallel,
    },
    CheckDef {
        id: "canonical-metric-parallel",
        description: "the canonical connection preserves the metric",
        reference: "E.g(F, G) = g(nabla~_E F, G) + g(F, nabla~_E G)",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_canonical_metric_parallel,
    },
    CheckDef {
        id: "canonical-phi-parallel",
        description: "the canonical connection makes every endomorphism parallel on the flat model",
        reference: "nabla~ phi_a = 0",
        suite: Suite::Connection,
        applies: flat_only,
        tolerance: Tol::Model,
        run: run_canonical_phi_parallel,
    },
    CheckDef {
        id: "canonical-phi-formula",
        description: "the canonical derivative of each endomorphism follows the rotation formula on the sphere",
        reference: "(nabla~_E phi_a) F = -2 sum_bc eps_abc eta_b(E) phi_c F^h",
        suite: Suite::Connection,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_canonical_phi_formula,
    },
    CheckDef {
        id: "canonical-phi-vertical-special",
        description: "special case of the rotation formula in a Reeb direction",
        reference: "(nabla~_{xi_2} phi_1) X = -2 phi_3 X for horizontal X",
        suite: Suite::Connection,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_canonical_phi_vertical_special,
    },
    CheckDef {
        id: "canonical-equals-levi-civita",
        description: "the canonical and metric connections coincide on the flat model",
        reference: "nabla~ = nabla",
        suite: Suite::Connection,
        applies: flat_only,
        tolerance: Tol::Fixed(1e-12),
        run: run_canonical_equals_lc,
    },
    CheckDef {
        id: "canonical-leibniz",
        description: "the canonical connection satisfies the Leibniz rule",
        reference: "nabla~_E (f F) = (E.f) F + f nabla~_E F",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_canonical_leibniz,
    },
    CheckDef {
        id: "torsion-horizontal-formula",
        description: "canonical torsion on horizontal fields is carried by the Reeb directions",
        reference: "T~(X, Y) = 2 sum_c d eta_c(X, Y) xi_c",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_torsion_horizontal,
    },
    CheckDef {
        id: "torsion-mixed",
        description: "canonical torsion vanishes on mixed horizontal/Reeb pairs",
        reference: "T~(X, xi_a) = 0",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_torsion_mixed,
    },
    CheckDef {
        id: "torsion-vertical",
        description: "canonical torsion on Reeb pairs is the reversed bracket",
        reference: "T~(xi_a, xi_b) = [xi_b, xi_a]",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_torsion_vertical,
    },
    CheckDef {
        id: "torsion-general-formula",
        description: "canonical torsion of general fields matches its decomposition",
        reference: "T~(E, F) = 2 sum_c d eta_c(E^h, F^h) xi_c + sum_ab eta_a(E) eta_b(F) [xi_b, xi_a]",
        suite: Suite::Connection,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_torsion_general,
    },
    CheckDef {
        id: "horizontal-bracket-eta",
        description: "the horizontal distribution is involutive on the flat model",
        reference: "eta_a([X, Y]) = 0 for horizontal X, Y",
        suite: Suite::Connection,
        applies: flat_only,
        tolerance: Tol::Model,
        run: run_horizontal_bracket_eta,
    },
    CheckDef {
        id: "horizontal-nonintegrability-witness",
        description: "the horizontal distribution is non-involutive on the sphere (witness margin 0.1)",
        reference: "exists horizontal X, Y with |eta_a([X, Y])| >= 0.1",
        suite: Suite::Connection,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-12),
        run: run_nonintegrability_witness,
    },
    // ---- curvature ----
    CheckDef {
        id: "riemann-vanishes",
        description: "the curvature tensor vanishes identically on the flat model",
        reference: "R = 0",
        suite: Suite::Curvature,
        applies: flat_only,
        tolerance: Tol::Fixed(1e-12),
        run: run_riemann_vanishes,
    },
    CheckDef {
        id: "ricci-flat",
        description: "the Ricci tensor vanishes identically on the flat model",
        reference: "Ric = 0",
        suite: Suite::Curvature,
        applies: flat_only,
        tolerance: Tol::Fixed(1e-12),
        run: run_ricci_flat,
    },
    CheckDef {
        id: "scalar-curvature-total",
        description: "scalar curvature of the sphere model equals its closed form",
        reference: "scal = 2(2n+1)(4n+3)",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fn(tol_scalar_curvature),
        run: run_scalar_curvature,
    },
    CheckDef {
        id: "einstein-ricci",
        description: "the sphere model is Einstein with the derived constant",
        reference: "Ric = (scal / dim) g = (4n+2) g",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_einstein_ricci,
    },
    CheckDef {
        id: "sectional-vertical",
        description: "vertical planes have unit sectional curvature",
        reference: "K(xi_a, xi_b) = 1",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_sectional_vertical,
    },
    CheckDef {
        id: "sectional-constant",
        description: "random planes have unit sectional curvature (round metric)",
        reference: "K(X, Y) = 1",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_sectional_constant,
    },
    CheckDef {
        id: "bianchi-first",
        description: "the curvature tensor satisfies the first Bianchi identity",
        reference: "R(X, Y)Z + R(Y, Z)X + R(Z, X)Y = 0",
        suite: Suite::Curvature,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_bianchi_first,
    },
    CheckDef {
        id: "riemann-operator-vs-tensor",
        description: "operator-form curvature agrees with the coordinate tensor",
        reference: "nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z = R^l_ijk X^i Y^j Z^k e_l",
        suite: Suite::Curvature,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_riemann_operator_vs_tensor,
    },
    CheckDef {
        id: "rtilde-xi-annihilated",
        description: "canonical curvature annihilates the Reeb fields",
        reference: "R~(E, F) xi_a = 0",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_rtilde_xi_annihilated,
    },
    CheckDef {
        id: "rtilde-vertical-pair",
        description: "canonical curvature vanishes on Reeb pairs",
        reference: "R~(xi_a, xi_b) = 0",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_rtilde_vertical_pair,
    },
    CheckDef {
        id: "rtilde-mixed-basic",
        description: "canonical curvature vanishes on mixed horizontal/Reeb pairs",
        reference: "R~(X, xi_a) Y = 0 for horizontal X, Y",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_rtilde_mixed,
    },
    CheckDef {
        id: "rtilde-horizontal-formula",
        description: "canonical curvature on horizontal fields matches the comparison formula",
        reference: "R~(X, Y)Z = (R(X, Y)Z)^h + sum_a [2 d eta_a(X, Y) phi_a Z - d eta_a(Y, Z) phi_a X + d eta_a(X, Z) phi_a Y]",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_rtilde_horizontal_formula,
    },
    CheckDef {
        id: "projected-scalar-curvature",
        description: "horizontal scalar curvature of the canonical connection equals its closed form",
        reference: "scal^h(R~) = 16n(n+2) (sphere) / 0 (flat)",
        suite: Suite::Curvature,
        applies: any_model,
        tolerance: Tol::Fn(tol_projected_scalar),
        run: run_projected_scalar,
    },
    CheckDef {
        id: "projected-scalar-spread",
        description: "horizontal scalar curvature is constant across sample points",
        reference: "max - min of scal^h(R~) over points",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-4),
        run: run_projected_scalar_spread,
    },
    CheckDef {
        id: "nonflatness-witness",
        description: "strictly positive horizontal scalar curvature obstructs flat adapted charts",
        reference: "scal^h(R~) > 0 (witness margin 1e-3)",
        suite: Suite::Curvature,
        applies: curved_only,
        tolerance: Tol::Fixed(1e-12),
        run: run_nonflatness_witness,
    },
    // ---- musical ----
    CheckDef {
        id: "g-musical-roundtrip",
        description: "lowering then raising (and vice versa) is the identity",
        reference: "sharp(flat(X)) = X, flat(sharp(w)) = w",
        suite: Suite::Musical,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_musical_roundtrip,
    },
    CheckDef {
        id: "musical-form-dual",
        description: "each fundamental form composed with its endomorphism reproduces the metric on horizontal fields",
        reference: "Phi_a(phi_a X, Y) = g(X, Y) for horizontal X, Y",
        suite: Suite::Musical,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_musical_form_dual,
    },
    CheckDef {
        id: "musical-skew-identity",
        description: "mixed form/endomorphism compositions agree up to sign on horizontal fields",
        reference: "Phi_2(phi_3 X, Y) = -Phi_3(phi_2 X, Y) = Phi_1(X, Y)",
        suite: Suite::Musical,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_musical_skew_identity,
    },
    CheckDef {
        id: "phi-from-forms",
        description: "the horizontal endomorphisms are recovered from the three fundamental forms alone",
        reference: "phi_a|_H = -1/2 sum_bc eps_abc (Phi_b)^{-1} Phi_c on a horizontal basis",
        suite: Suite::Musical,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_phi_from_forms,
    },
    CheckDef {
        id: "metric-reconstruction-banyaga",
        description: "the horizontal metric is recovered from the three fundamental forms alone",
        reference: "g|_H = -Phi_3 Phi_2^{-1} Phi_1 on a horizontal basis",
        suite: Suite::Musical,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_metric_reconstruction_banyaga,
    },
    CheckDef {
        id: "metric-reconstruction-full",
        description: "the full coordinate metric is recovered from forms and Reeb data alone",
        reference: "g from (Phi_a, xi_a, eta_a) with orthonormal vertical block",
        suite: Suite::Musical,
        applies: any_model,
        tolerance: Tol::Model,
        run: run_metric_reconstruction_full,
    },
    // ---- darboux ----
    CheckDef {
        id: "darboux-frame-orthonormal",
        description: "the transported adapted frame stays orthonormal",
        reference: "g(E_r, E_s) = delta_rs at transported points",
        suite: Suite::Darboux,
        applies: flat_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_darboux_orthonormal,
    },
    CheckDef {
        id: "darboux-frame-phi-relations",
        description: "the transported frame keeps its quaternionic leg structure",
        reference: "Y_i = phi_1 X_i, U_i = phi_2 X_i, V_i = phi_3 X_i",
        suite: Suite::Darboux,
        applies: flat_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_darboux_phi_relations,
    },
    CheckDef {
        id: "darboux-frame-constants",
        description: "the fundamental forms have constant components in the adapted frame",
        reference: "Phi_a(E_r, E_s) matches the fixed integer table (signs forced by the structure algebra)",
        suite: Suite::Darboux,
        applies: flat_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_darboux_constants,
    },
    CheckDef {
        id: "darboux-frame-brackets",
        description: "the adapted frame fields commute pairwise",
        reference: "[E_r, E_s] = 0 (finite-difference oracle)",
        suite: Suite::Darboux,
        applies: flat_only,
        tolerance: Tol::Fixed(1e-6),
        run: run_darboux_brackets,
    },
    CheckDef {
        id: "darboux-sphere-rejection",
        description: "frame construction rejects curved charts with an explicit error",
        reference: "flatness precondition: max |R| <= 1e-9 fails on the sphere",
        suite: Suite::Darboux,
        applies: curved_only,
        tolerance: Tol::Fixed(0.5),
        run: run_darboux_rejection,
    },
];
