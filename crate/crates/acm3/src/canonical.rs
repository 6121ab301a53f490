//! The canonical connection of an almost contact metric 3-structure.
//!
//! Writing `E^h = E - sum_a eta_a(E) xi_a` for the horizontal part and
//! `nabla` for the Levi-Civita connection, the canonical connection is
//!
//! ```text
//! nabla~_E F = (nabla_{E^h} F^h)^h
//!            + sum_a eta_a(E) [xi_a, F^h]
//!            + sum_a (E . eta_a(F)) xi_a .
//! ```
//!
//! It parallelizes the Reeb fields and the metric, restricts to the
//! horizontal distribution, and its torsion concentrates the failure of
//! horizontal integrability:
//!
//! ```text
//! T~(E, F) = 2 sum_c d eta_c(E^h, F^h) xi_c
//!          + sum_ab eta_a(E) eta_b(F) [xi_b, xi_a] ,
//! ```
//!
//! so `T~(X, Y) = 2 sum_c d eta_c(X, Y) xi_c` for horizontal `X, Y`,
//! `T~(X, xi_a) = 0`, and `T~(xi_a, xi_b) = [xi_b, xi_a]`.  Its curvature on
//! horizontal fields compares to the Levi-Civita curvature by
//!
//! ```text
//! R~(X, Y)Z = (R(X, Y)Z)^h + sum_a [ 2 d eta_a(X, Y) phi_a Z
//!                                   - d eta_a(Y, Z) phi_a X
//!                                   + d eta_a(X, Z) phi_a Y ] ,
//! ```
//!
//! which on the 3-Sasakian sphere reproduces the quaternion-projective
//! horizontal geometry (horizontal scalar curvature `16n(n + 2)`) and on
//! the flat model collapses to `R~ = R = 0`.

use crate::contact3::{epsilon, Acm3Structure};
use crate::fields::{lie_bracket, ScalarField, VectorField};
use crate::jets::ChartPoint;
use crate::riemann::{Connection, LeviCivita};

/// The canonical connection attached to a 3-structure (see module docs).
#[derive(Clone)]
pub struct CanonicalConnection {
    structure: Acm3Structure,
    levi_civita: LeviCivita,
}

impl CanonicalConnection {
    pub fn new(structure: Acm3Structure) -> Self {
        let levi_civita = LeviCivita::new(structure.metric.clone());
        Self { structure, levi_civita }
    }

    pub fn structure(&self) -> &Acm3Structure {
        &self.structure
    }

    pub fn levi_civita(&self) -> &LeviCivita {
        &self.levi_civita
    }

    /// The torsion predicted by the decomposition formula in the module
    /// docs (to be compared with the direct `torsion` computation).
    pub fn torsion_prediction(&self, e: &VectorField, f: &VectorField) -> VectorField {
        let s = &self.structure;
        let eh = s.horizontal_projection(e);
        let fh = s.horizontal_projection(f);
        let mut out = VectorField::zero(s.dim());
        for c in 0..3 {
            let coeff = s.eta[c].d().apply(&eh, &fh).scale(2.0);
            out = out.add(&s.xi[c].scale_by(&coeff));
        }
        for a in 0..3 {
            for b in 0..3 {
                let coeff = s.eta[a].apply(e).mul(&s.eta[b].apply(f));
                out = out.add(&lie_bracket(&s.xi[b], &s.xi[a]).scale_by(&coeff));
            }
        }
        out
    }

    /// The comparison-formula prediction for `R~(X, Y)Z` on horizontal
    /// arguments (see module docs).
    pub fn horizontal_curvature_prediction(
        &self,
        x: &VectorField,
        y: &VectorField,
        z: &VectorField,
    ) -> VectorField {
        let s = &self.structure;
        let mut out = s.horizontal_projection(&self.levi_civita.curvature_operator(x, y, z));
        for a in 0..3 {
            let da = s.eta[a].d();
            out = out.add(&s.phi[a].apply(z).scale_by(&da.apply(x, y).scale(2.0)));
            out = out.sub(&s.phi[a].apply(x).scale_by(&da.apply(y, z)));
            out = out.add(&s.phi[a].apply(y).scale_by(&da.apply(x, z)));
        }
        out
    }

    /// The covariant derivative of the structure endomorphism:
    /// `(nabla~_E phi_a) F = nabla~_E (phi_a F) - phi_a (nabla~_E F)`.
    pub fn covariant_derivative_phi(
        &self,
        alpha: usize,
        e: &VectorField,
        f: &VectorField,
    ) -> VectorField {
        let phi = &self.structure.phi[alpha];
        self.covariant_derivative(e, &phi.apply(f))
            .sub(&phi.apply(&self.covariant_derivative(e, f)))
    }

    /// The 3-Sasakian prediction
    /// `(nabla~_E phi_a) F = -2 sum_bc eps_abc eta_b(E) phi_c F^h`.
    pub fn phi_derivative_prediction(
        &self,
        alpha: usize,
        e: &VectorField,
        f: &VectorField,
    ) -> VectorField {
        let s = &self.structure;
        let fh = s.horizontal_projection(f);
        let mut out = VectorField::zero(s.dim());
        for b in 0..3 {
            for c in 0..3 {
                let eps = epsilon(alpha, b, c);
                if eps != 0.0 {
                    let coeff = s.eta[b].apply(e).scale(-2.0 * eps);
                    out = out.add(&s.phi[c].apply(&fh).scale_by(&coeff));
                }
            }
        }
        out
    }

    /// The covariant derivative of the Reeb 1-form paired with `F`:
    /// `(nabla~_E eta_a)(F) = E . eta_a(F) - eta_a(nabla~_E F)`.
    pub fn covariant_derivative_eta(
        &self,
        alpha: usize,
        e: &VectorField,
        f: &VectorField,
    ) -> ScalarField {
        let eta = &self.structure.eta[alpha];
        eta.apply(f)
            .directional_derivative(e)
            .sub(&eta.apply(&self.covariant_derivative(e, f)))
    }

    /// The scalar curvature of the canonical connection restricted to the
    /// horizontal distribution at `p`: the `g`-trace of `g(R~(E_a, E_b) E_b,
    /// E_a)` over a horizontal orthonormal frame.
    pub fn projected_scalar_curvature(&self, p: &ChartPoint) -> f64 {
        let s = &self.structure;
        let m = s.dim();
        let g = s.metric.matrix_values(p);
        let ip = |a: &[f64], b: &[f64]| -> f64 {
            let mut acc = 0.0;
            for i in 0..m {
                for j in 0..m {
                    acc += g[i * m + j] * a[i] * b[j];
                }
            }
            acc
        };
        // g-orthonormalize the horizontal basis at p.
        let mut frame: Vec<Vec<f64>> = Vec::new();
        for raw in s.horizontal_basis(p) {
            let mut v = raw;
            for f in &frame {
                let d = ip(&v, f);
                for (vi, fi) in v.iter_mut().zip(f) {
                    *vi -= d * fi;
                }
            }
            let norm = ip(&v, &v).sqrt();
            for vi in &mut v {
                *vi /= norm;
            }
            frame.push(v);
        }
        // Horizontal frame *fields*: projected constant extensions.  The
        // curvature is tensorial, so the extension does not matter.
        let fields: Vec<VectorField> = frame
            .iter()
            .map(|v| s.horizontal_projection(&VectorField::constant(v.clone())))
            .collect();
        let mut scal = 0.0;
        for (a, ea) in fields.iter().enumerate() {
            for (b, eb) in fields.iter().enumerate() {
                if a == b {
                    continue;
                }
                let r = self.curvature_operator(ea, eb, eb).values(p);
                scal += ip(&r, &frame[a]);
            }
        }
        scal
    }
}

impl Connection for CanonicalConnection {
    fn dim(&self) -> usize {
        self.structure.dim()
    }

    fn covariant_derivative(&self, e: &VectorField, f: &VectorField) -> VectorField {
        let s = &self.structure;
        let eh = s.horizontal_projection(e);
        let fh = s.horizontal_projection(f);
        let mut out = s.horizontal_projection(&self.levi_civita.covariant_derivative(&eh, &fh));
        for a in 0..3 {
            out = out.add(&lie_bracket(&s.xi[a], &fh).scale_by(&s.eta[a].apply(e)));
            let vertical_rate = s.eta[a].apply(f).directional_derivative(e);
            out = out.add(&s.xi[a].scale_by(&vertical_rate));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Model;
    use crate::sampling::{derive_seed, random_polynomial_scalar, random_vector_field, SplitMix64};

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    #[test]
    fn canonical_equals_levi_civita_on_the_flat_model() {
        let model = Model::flat(1);
        let conn = CanonicalConnection::new(model.structure().clone());
        let mut rng = SplitMix64::new(derive_seed(3, "flat-cmp"));
        let e = random_vector_field(&mut rng, model.dim());
        let f = random_vector_field(&mut rng, model.dim());
        let p = &model.sample_points(1, 11)[0];
        let canonical = conn.covariant_derivative(&e, &f).values(p);
        let lc = conn.levi_civita().covariant_derivative(&e, &f).values(p);
        for (a, b) in canonical.iter().zip(&lc) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        // ... and the torsion vanishes.
        assert!(max_abs(&conn.torsion(&e, &f).values(p)) < 1e-12);
    }

    #[test]
    fn reeb_fields_are_parallel() {
        for model in [Model::flat(1), Model::sphere(1)] {
            let conn = CanonicalConnection::new(model.structure().clone());
            let mut rng = SplitMix64::new(derive_seed(5, "xi-parallel"));
            let e = random_vector_field(&mut rng, model.dim());
            let p = &model.sample_points(1, 13)[0];
            for alpha in 0..3 {
                let nabla = conn.covariant_derivative(&e, &model.structure().xi[alpha]);
                assert!(
                    max_abs(&nabla.values(p)) < 1e-10,
                    "xi_{alpha} not parallel on {:?}",
                    model.kind()
                );
            }
        }
    }

    #[test]
    fn metric_is_parallel_for_general_fields() {
        let model = Model::sphere(1);
        let s = model.structure();
        let conn = CanonicalConnection::new(s.clone());
        let mut rng = SplitMix64::new(derive_seed(7, "metric-parallel"));
        let e = random_vector_field(&mut rng, model.dim());
        let f = random_vector_field(&mut rng, model.dim());
        let h = random_vector_field(&mut rng, model.dim());
        let p = &model.sample_points(1, 17)[0];
        let lhs = s.metric.apply(&f, &h).directional_derivative(&e).value(p);
        let rhs = s
            .metric
            .apply(&conn.covariant_derivative(&e, &f), &h)
            .add(&s.metric.apply(&f, &conn.covariant_derivative(&e, &h)))
            .value(p);
        assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn eta_is_parallel_on_both_models() {
        for model in [Model::flat(1), Model::sphere(1)] {
            let conn = CanonicalConnection::new(model.structure().clone());
            let mut rng = SplitMix64::new(derive_seed(11, "eta-parallel"));
            let e = random_vector_field(&mut rng, model.dim());
            let f = random_vector_field(&mut rng, model.dim());
            let p = &model.sample_points(1, 19)[0];
            for alpha in 0..3 {
                let v = conn.covariant_derivative_eta(alpha, &e, &f).value(p);
                assert!(v.abs() < 1e-10, "eta_{alpha} residual {v} on {:?}", model.kind());
            }
        }
    }

    #[test]
    fn torsion_matches_the_decomposition_formula() {
        let model = Model::sphere(1);
        let conn = CanonicalConnection::new(model.structure().clone());
        let mut rng = SplitMix64::new(derive_seed(13, "torsion"));
        let e = random_vector_field(&mut rng, model.dim());
        let f = random_vector_field(&mut rng, model.dim());
        let p = &model.sample_points(1, 23)[0];
        let direct = conn.torsion(&e, &f).values(p);
        let predicted = conn.torsion_prediction(&e, &f).values(p);
        for (a, b) in direct.iter().zip(&predicted) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn torsion_special_cases_on_the_sphere() {
        let model = Model::sphere(1);
        let s = model.structure();
        let conn = CanonicalConnection::new(s.clone());
        let mut rng = SplitMix64::new(derive_seed(17, "torsion-cases"));
        let x = s.horizontal_projection(&random_vector_field(&mut rng, model.dim()));
        let y = s.horizontal_projection(&random_vector_field(&mut rng, model.dim()));
        let p = &model.sample_points(1, 29)[0];
        // Horizontal pair: T~(X, Y) = 2 sum_c d eta_c(X, Y) xi_c.
        let direct = conn.torsion(&x, &y).values(p);
        let mut expect = VectorField::zero(model.dim());
        for c in 0..3 {
            let coeff = s.eta[c].d().apply(&x, &y).scale(2.0);
            expect = expect.add(&s.xi[c].scale_by(&coeff));
        }
        let ev = expect.values(p);
        for (a, b) in direct.iter().zip(&ev) {
            assert!((a - b).abs() < 1e-9, "horizontal torsion {a} vs {b}");
        }
        // Mixed pair vanishes.
        for alpha in 0..3 {
            let t = conn.torsion(&x, &s.xi[alpha]).values(p);
            assert!(max_abs(&t) < 1e-9, "mixed torsion {:?}", t);
        }
        // Vertical pair: T~(xi_1, xi_2) = [xi_2, xi_1] = -2 xi_3.
        let t = conn.torsion(&s.xi[0], &s.xi[1]).values(p);
        let expect = s.xi[2].scale(-2.0).values(p);
        for (a, b) in t.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-9, "vertical torsion {a} vs {b}");
        }
    }

    #[test]
    fn leibniz_and_tensoriality_in_the_direction() {
        let model = Model::sphere(1);
        let conn = CanonicalConnection::new(model.structure().clone());
        let mut rng = SplitMix64::new(derive_seed(19, "leibniz"));
        let e = random_vector_field(&mut rng, model.dim());
        let f = random_vector_field(&mut rng, model.dim());
        let fun = random_polynomial_scalar(&mut rng, model.dim());
        let p = &model.sample_points(1, 31)[0];
        // nabla~_{u E} F = u nabla~_E F.
        let scaled_dir = conn.covariant_derivative(&e.scale_by(&fun), &f).values(p);
        let base = conn.covariant_derivative(&e, &f).values(p);
        let uval = fun.value(p);
        for (a, b) in scaled_dir.iter().zip(&base) {
            assert!((a - uval * b).abs() < 1e-10);
        }
        // nabla~_E (u F) = (E . u) F + u nabla~_E F.
        let lhs = conn.covariant_derivative(&e, &f.scale_by(&fun)).values(p);
        let eu = fun.directional_derivative(&e).value(p);
        let fv = f.values(p);
        for i in 0..model.dim() {
            let rhs = eu * fv[i] + uval * base[i];
            assert!((lhs[i] - rhs).abs() < 1e-10, "{} vs {rhs}", lhs[i]);
        }
    }

    #[test]
    fn curvature_annihilates_reeb_and_vertical_pairs() {
        let model = Model::sphere(1);
        let s = model.structure();
        let conn = CanonicalConnection::new(s.clone());
        let mut rng = SplitMix64::new(derive_seed(23, "rtilde"));
        let e = random_vector_field(&mut rng, model.dim());
        let f = random_vector_field(&mut rng, model.dim());
        let p = &model.sample_points(1, 37)[0];
        for alpha in 0..3 {
            let r = conn.curvature_operator(&e, &f, &s.xi[alpha]).values(p);
            assert!(max_abs(&r) < 1e-9, "R~ xi_{alpha} = {:?}", r);
        }
        let r = conn.curvature_operator(&s.xi[0], &s.xi[1], &e).values(p);
        assert!(max_abs(&r) < 1e-9, "vertical-pair curvature {:?}", r);
    }

    #[test]
    fn mixed_curvature_vanishes_for_horizontal_fields() {
        let model = Model::sphere(1);
        let s = model.structure();
        let conn = CanonicalConnection::new(s.clone());
        let mut rng = SplitMix64::new(derive_seed(29, "rtilde-mixed"));
        let x = s.horizontal_projection(&random_vector_field(&mut rng, model.dim()));
        let y = s.horizontal_projection(&random_vector_field(&mut rng, model.dim()));
        let p = &model.sample_points(1, 41)[0];
        let r = conn.curvature_operator(&x, &s.xi[0], &y).values(p);
        assert!(max_abs(&r) < 1e-8, "mixed curvature {:?}", r);
    }

    #[test]
    fn horizontal_curvature_matches_the_comparison_formula() {
        let model = Model::sphere(1);
        let s = model.structure();
        let conn = CanonicalConnection::new(s.clone());
        let mut rng = SplitMix64::new(derive_seed(31, "rtilde-horizontal"));
        let x = s.horizontal_projection(&random_vector_field(&mut rng, model.dim()));
        let y = s.horizontal_projection(&random_vector_field(&mut rng, model.dim()));
        let z = s.horizontal_projection(&random_vector_field(&mut rng, model.dim()));
        let p = &model.sample_points(1, 43)[0];
        let direct = conn.curvature_operator(&x, &y, &z).values(p);
        let predicted = conn.horizontal_curvature_prediction(&x, &y, &z).values(p);
        for (a, b) in direct.iter().zip(&predicted) {
            assert!((a - b).abs() < 1e-7, "{a} vs {b}");
        }
    }

    #[test]
    fn projected_scalar_curvature_is_48_on_the_sphere() {
        let model = Model::sphere(1);
        let conn = CanonicalConnection::new(model.structure().clone());
        let p = &model.sample_points(1, 47)[0];
        let scal = conn.projected_scalar_curvature(p);
        assert!((scal - 48.0).abs() < 1e-4, "projected scal {scal}");
    }

    #[test]
    fn projected_scalar_curvature_vanishes_on_the_flat_model() {
        let model = Model::flat(1);
        let conn = CanonicalConnection::new(model.structure().clone());
        let p = &model.sample_points(1, 53)[0];
        let scal = conn.projected_scalar_curvature(p);
        assert!(scal.abs() < 1e-10, "projected scal {scal}");
    }

    #[test]
    fn phi_is_parallel_on_flat_and_follows_the_formula_on_the_sphere() {
        let flat = Model::flat(1);
        let conn = CanonicalConnection::new(flat.structure().clone());
        let mut rng = SplitMix64::new(derive_seed(37, "phi-parallel"));
        let e = random_vector_field(&mut rng, flat.dim());
        let f = random_vector_field(&mut rng, flat.dim());
        let p = &flat.sample_points(1, 59)[0];
        for alpha in 0..3 {
            let v = conn.covariant_derivative_phi(alpha, &e, &f).values(p);
            assert!(max_abs(&v) < 1e-11, "flat nabla~ phi_{alpha} = {:?}", v);
        }

        let sphere = Model::sphere(1);
        let conn = CanonicalConnection::new(sphere.structure().clone());
        let e = random_vector_field(&mut rng, sphere.dim());
        let f = random_vector_field(&mut rng, sphere.dim());
        let p = &sphere.sample_points(1, 61)[0];
        for alpha in 0..3 {
            let direct = conn.covariant_derivative_phi(alpha, &e, &f).values(p);
            let predicted = conn.phi_derivative_prediction(alpha, &e, &f).values(p);
            for (a, b) in direct.iter().zip(&predicted) {
                assert!((a - b).abs() < 1e-9, "alpha={alpha}: {a} vs {b}");
            }
        }
        // Classical special case: (nabla~_{xi_2} phi_1) X = -2 phi_3 X.
        let s = sphere.structure();
        let x = s.horizontal_projection(&random_vector_field(&mut rng, sphere.dim()));
        let lhs = conn.covariant_derivative_phi(0, &s.xi[1], &x).values(p);
        let rhs = s.phi[2].apply(&x).scale(-2.0).values(p);
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}
