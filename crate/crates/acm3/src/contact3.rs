//! Almost contact metric structures, their 3-structure refinement, and the
//! reconstruction of the metric from the fundamental 2-forms.
//!
//! An almost contact metric structure on an odd-dimensional chart is a tuple
//! `(phi, xi, eta, g)` with
//!
//! ```text
//! (i)    phi^2 = -Id + xi (x) eta        (iii)  eta . phi = 0
//! (ii)   eta(xi) = 1,  phi xi = 0        (iv)   g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)
//! ```
//!
//! A 3-structure is a triple of such structures sharing `g` whose tensors
//! satisfy the quaternion-like relations (for any cyclic `(a, b, c)`):
//!
//! ```text
//! phi_c = phi_a phi_b - eta_b (x) xi_a = -phi_b phi_a + eta_a (x) xi_b
//! xi_c  = phi_a xi_b = -phi_b xi_a
//! eta_c = eta_a . phi_b = -eta_b . phi_a
//! ```
//!
//! All structure data are chart fields; every method defined here reduces a
//! claimed identity to a max-residual number at a point, which the check
//! registry then compares against a tolerance.
//!
//! The fundamental 2-form convention is `Phi(X, Y) = g(X, phi Y)`, and the
//! Nijenhuis / normality tensor is `N = [phi, phi] + 2 d eta (x) xi`, which
//! under the half-convention for `d` is the classical coordinate expression
//! `N^k_ij = ... + (d_i eta_j - d_j eta_i) xi^k`.

use nalgebra::DMatrix;

use crate::fields::{
    lie_bracket, EndomorphismField, MetricField, OneForm, TwoForm, VectorField,
};
use crate::jets::ChartPoint;

/// The totally antisymmetric symbol on `{0, 1, 2}`.
pub fn epsilon(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// The three cyclic permutations of `(0, 1, 2)`.
pub const CYCLIC: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

// ---------------------------------------------------------------------------
// Single structures
// ---------------------------------------------------------------------------

/// One almost contact metric structure `(phi, xi, eta, g)`.
#[derive(Clone)]
pub struct AcmStructure {
    pub phi: EndomorphismField,
    pub xi: VectorField,
    pub eta: OneForm,
    pub metric: MetricField,
}

impl AcmStructure {
    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// The fundamental 2-form `Phi(X, Y) = g(X, phi Y)`, with components
    /// `Phi_ij = g_ik phi^k_j`.
    pub fn fundamental_form(&self) -> TwoForm {
        let (g, phi) = (self.metric.clone(), self.phi.clone());
        TwoForm::from_fn(self.dim(), move |p, order| {
            let m = p.dim();
            let gs = g.eval(p, order);
            let ps = phi.eval(p, order);
            let mut out = Vec::with_capacity(m * m);
            for i in 0..m {
                for j in 0..m {
                    let mut acc = crate::jets::Jet::constant(0.0, m, order);
                    for k in 0..m {
                        acc = acc + &gs[i * m + k] * &ps[k * m + j];
                    }
                    out.push(acc);
                }
            }
            out
        })
    }

    /// The normality tensor
    /// `N(X, Y) = [phi, phi](X, Y) + 2 d eta(X, Y) xi` with
    /// `[phi, phi](X, Y) = phi^2 [X, Y] + [phi X, phi Y] - phi [phi X, Y] -
    /// phi [X, phi Y]`.
    pub fn nijenhuis(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let bracket = lie_bracket(x, y);
        let phix = self.phi.apply(x);
        let phiy = self.phi.apply(y);
        let sq = self.phi.apply(&self.phi.apply(&bracket));
        let term2 = lie_bracket(&phix, &phiy);
        let term3 = self.phi.apply(&lie_bracket(&phix, y));
        let term4 = self.phi.apply(&lie_bracket(x, &phiy));
        let deta_xy = self.eta.d().apply(x, y).scale(2.0);
        sq.add(&term2)
            .sub(&term3)
            .sub(&term4)
            .add(&self.xi.scale_by(&deta_xy))
    }

    /// Max component of `N(e_i, e_j)` over all coordinate pairs at `p`,
    /// evaluated from the coordinate formula with one en-bloc pass.
    pub fn normality_residual(&self, p: &ChartPoint) -> f64 {
        let m = self.dim();
        let phi = self.phi.eval(p, 1);
        let eta = self.eta.eval(p, 1);
        let xi = self.xi.eval(p, 0);
        let pv = |i: usize, j: usize| phi[i * m + j].value();
        let dp = |a: usize, i: usize, j: usize| phi[i * m + j].d1(a);
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in (i + 1)..m {
                // d_i eta_j - d_j eta_i is already 2 d eta(e_i, e_j) under
                // the half-convention.
                let two_deta = eta[j].d1(i) - eta[i].d1(j);
                for k in 0..m {
                    let mut v = two_deta * xi[k].value();
                    for l in 0..m {
                        v += pv(l, i) * dp(l, k, j) - pv(l, j) * dp(l, k, i)
                            + pv(k, l) * (dp(j, l, i) - dp(i, l, j));
                    }
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }

    /// Residual of axiom (i): max entry of `phi^2 + Id - xi (x) eta`.
    pub fn residual_phi_square(&self, p: &ChartPoint) -> f64 {
        let m = self.dim();
        let phi = self.phi.matrix_values(p);
        let xi: Vec<f64> = self.xi.values(p);
        let eta: Vec<f64> = self.eta.eval(p, 0).iter().map(|j| j.value()).collect();
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                let mut sq = 0.0;
                for k in 0..m {
                    sq += phi[i * m + k] * phi[k * m + j];
                }
                let idm = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((sq + idm - xi[i] * eta[j]).abs());
            }
        }
        worst
    }

    /// Residual of axiom (ii), first half: `|eta(xi) - 1|`.
    pub fn residual_eta_xi(&self, p: &ChartPoint) -> f64 {
        (self.eta.apply(&self.xi).value(p) - 1.0).abs()
    }

    /// Residual of axiom (ii), second half: max component of `phi xi`.
    pub fn residual_phi_xi(&self, p: &ChartPoint) -> f64 {
        self.phi
            .apply(&self.xi)
            .values(p)
            .iter()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Residual of axiom (iii): max component of `eta . phi`.
    pub fn residual_eta_phi(&self, p: &ChartPoint) -> f64 {
        let m = self.dim();
        let phi = self.phi.matrix_values(p);
        let eta: Vec<f64> = self.eta.eval(p, 0).iter().map(|j| j.value()).collect();
        let mut worst = 0.0_f64;
        for j in 0..m {
            let mut v = 0.0;
            for i in 0..m {
                v += eta[i] * phi[i * m + j];
            }
            worst = worst.max(v.abs());
        }
        worst
    }

    /// Residual of axiom (iv): max entry of
    /// `phi^T g phi - g + eta (x) eta`.
    pub fn residual_compatibility(&self, p: &ChartPoint) -> f64 {
        let m = self.dim();
        let phi = self.phi.matrix_values(p);
        let g = self.metric.matrix_values(p);
        let eta: Vec<f64> = self.eta.eval(p, 0).iter().map(|j| j.value()).collect();
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                let mut v = 0.0;
                for k in 0..m {
                    for l in 0..m {
                        v += phi[k * m + i] * g[k * m + l] * phi[l * m + j];
                    }
                }
                worst = worst.max((v - g[i * m + j] + eta[i] * eta[j]).abs());
            }
        }
        worst
    }

    /// Max entry of `d eta - Phi` at `p` (zero iff the structure is contact
    /// metric at `p`).
    pub fn contact_metric_residual(&self, p: &ChartPoint) -> f64 {
        let m = self.dim();
        let deta = self.eta.d().eval(p, 0);
        let phi_form = self.fundamental_form().eval(p, 0);
        deta.iter()
            .zip(&phi_form)
            .take(m * m)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a.value() - b.value()).abs()))
    }

    /// Max entry of `d eta` at `p`.
    pub fn deta_residual(&self, p: &ChartPoint) -> f64 {
        self.eta
            .d()
            .eval(p, 0)
            .iter()
            .fold(0.0_f64, |acc, j| acc.max(j.value().abs()))
    }

    /// Max entry of `d Phi` at `p`.
    pub fn dphi_residual(&self, p: &ChartPoint) -> f64 {
        self.fundamental_form()
            .d()
            .eval(p, 0)
            .iter()
            .fold(0.0_f64, |acc, j| acc.max(j.value().abs()))
    }
}

// ---------------------------------------------------------------------------
// 3-structures
// ---------------------------------------------------------------------------

/// Coarse classification of an almost contact metric structure, decided from
/// residuals at sampled points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureClass {
    /// Normal and `d eta = Phi`.
    Sasakian,
    /// Normal and `d eta = 0`, `d Phi = 0`.
    Cosymplectic,
    /// None of the residual patterns matched.
    Unclassified,
}

/// An almost contact metric 3-structure: three structures sharing one metric
/// on a chart of dimension `4n + 3`.
#[derive(Clone)]
pub struct Acm3Structure {
    pub phi: [EndomorphismField; 3],
    pub xi: [VectorField; 3],
    pub eta: [OneForm; 3],
    pub metric: MetricField,
    dim: usize,
    n: usize,
}

impl Acm3Structure {
    pub fn new(
        phi: [EndomorphismField; 3],
        xi: [VectorField; 3],
        eta: [OneForm; 3],
        metric: MetricField,
    ) -> Self {
        let dim = metric.dim();
        assert!(
            dim >= 3 && (dim - 3).is_multiple_of(4),
            "3-structures need dimension 4n + 3, got {dim}"
        );
        let n = (dim - 3) / 4;
        for alpha in 0..3 {
            assert_eq!(phi[alpha].dim(), dim);
            assert_eq!(xi[alpha].dim(), dim);
            assert_eq!(eta[alpha].dim(), dim);
        }
        Self { phi, xi, eta, metric, dim, n }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The quaternionic parameter: `dim = 4n + 3`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The `alpha`-th structure as a standalone tuple.
    pub fn single(&self, alpha: usize) -> AcmStructure {
        AcmStructure {
            phi: self.phi[alpha].clone(),
            xi: self.xi[alpha].clone(),
            eta: self.eta[alpha].clone(),
            metric: self.metric.clone(),
        }
    }

    /// Fundamental 2-form of the `alpha`-th structure.
    pub fn fundamental_form(&self, alpha: usize) -> TwoForm {
        self.single(alpha).fundamental_form()
    }

    /// Residual of the composition relations
    /// `phi_c = phi_a phi_b - xi_a (x) eta_b = -phi_b phi_a + xi_b (x) eta_a`
    /// over all cyclic `(a, b, c)`.
    pub fn triple_phi_residual(&self, p: &ChartPoint) -> f64 {
        let m = self.dim;
        let phis: Vec<Vec<f64>> = (0..3).map(|a| self.phi[a].matrix_values(p)).collect();
        let xis: Vec<Vec<f64>> = (0..3).map(|a| self.xi[a].values(p)).collect();
        let etas: Vec<Vec<f64>> = (0..3)
            .map(|a| self.eta[a].eval(p, 0).iter().map(|j| j.value()).collect())
            .collect();
        let mut worst = 0.0_f64;
        for &(a, b, c) in &CYCLIC {
            for i in 0..m {
                for j in 0..m {
                    let mut ab = 0.0;
                    let mut ba = 0.0;
                    for k in 0..m {
                        ab += phis[a][i * m + k] * phis[b][k * m + j];
                        ba += phis[b][i * m + k] * phis[a][k * m + j];
                    }
                    let target = phis[c][i * m + j];
                    let r1 = ab - xis[a][i] * etas[b][j] - target;
                    let r2 = -ba + xis[b][i] * etas[a][j] - target;
                    worst = worst.max(r1.abs()).max(r2.abs());
                }
            }
        }
        worst
    }

    /// Residual of `xi_c = phi_a xi_b = -phi_b xi_a` over all cyclic
    /// `(a, b, c)`.
    pub fn triple_xi_residual(&self, p: &ChartPoint) -> f64 {
        let m = self.dim;
        let phis: Vec<Vec<f64>> = (0..3).map(|a| self.phi[a].matrix_values(p)).collect();
        let xis: Vec<Vec<f64>> = (0..3).map(|a| self.xi[a].values(p)).collect();
        let mut worst = 0.0_f64;
        for &(a, b, c) in &CYCLIC {
            for i in 0..m {
                let mut pa_xb = 0.0;
                let mut pb_xa = 0.0;
                for k in 0..m {
                    pa_xb += phis[a][i * m + k] * xis[b][k];
                    pb_xa += phis[b][i * m + k] * xis[a][k];
                }
                worst = worst.max((pa_xb - xis[c][i]).abs());
                worst = worst.max((pb_xa + xis[c][i]).abs());
            }
        }
        worst
    }

    /// Residual of `eta_c = eta_a . phi_b = -eta_b . phi_a` over all cyclic
    /// `(a, b, c)`.
    pub fn triple_eta_residual(&self, p: &ChartPoint) -> f64 {
        let m = self.dim;
        let phis: Vec<Vec<f64>> = (0..3).map(|a| self.phi[a].matrix_values(p)).collect();
        let etas: Vec<Vec<f64>> = (0..3)
            .map(|a| self.eta[a].eval(p, 0).iter().map(|j| j.value()).collect())
            .collect();
        let mut worst = 0.0_f64;
        for &(a, b, c) in &CYCLIC {
            for j in 0..m {
                let mut ea_pb = 0.0;
                let mut eb_pa = 0.0;
                for i in 0..m {
                    ea_pb += etas[a][i] * phis[b][i * m + j];
                    eb_pa += etas[b][i] * phis[a][i * m + j];
                }
                worst = worst.max((ea_pb - etas[c][j]).abs());
                worst = worst.max((eb_pa + etas[c][j]).abs());
            }
        }
        worst
    }

    /// Residual of `g(xi_a, xi_b) = delta_ab`.
    pub fn reeb_orthonormality_residual(&self, p: &ChartPoint) -> f64 {
        let m = self.dim;
        let g = self.metric.matrix_values(p);
        let xis: Vec<Vec<f64>> = (0..3).map(|a| self.xi[a].values(p)).collect();
        let mut worst = 0.0_f64;
        for a in 0..3 {
            for b in 0..3 {
                let mut ip = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        ip += g[i * m + j] * xis[a][i] * xis[b][j];
                    }
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((ip - expect).abs());
            }
        }
        worst
    }

    /// The horizontal projection `X - sum_a eta_a(X) xi_a` as a field.
    pub fn horizontal_projection(&self, x: &VectorField) -> VectorField {
        let mut out = x.clone();
        for alpha in 0..3 {
            out = out.sub(&self.xi[alpha].scale_by(&self.eta[alpha].apply(x)));
        }
        out
    }

    /// Horizontal projection of a value vector at a point.
    pub fn project_horizontal_values(&self, p: &ChartPoint, v: &[f64]) -> Vec<f64> {
        project_values(p, v, &self.xi, &self.eta)
    }

    /// A basis of the horizontal distribution at `p`, selected greedily from
    /// projected coordinate vectors.  Panics if fewer than `4n` independent
    /// directions are found (cannot happen for a genuine 3-structure).
    pub fn horizontal_basis(&self, p: &ChartPoint) -> Vec<Vec<f64>> {
        horizontal_basis_from(p, &self.xi, &self.eta)
    }

    /// Classifies the 3-structure from residuals at the given points: all
    /// three substructures must match the same pattern.
    pub fn classify(&self, points: &[ChartPoint], tol: f64) -> StructureClass {
        let mut normal = 0.0_f64;
        let mut contact = 0.0_f64;
        let mut closed = 0.0_f64;
        for alpha in 0..3 {
            let s = self.single(alpha);
            for p in points {
                normal = normal.max(s.normality_residual(p));
                contact = contact.max(s.contact_metric_residual(p));
                closed = closed.max(s.deta_residual(p)).max(s.dphi_residual(p));
            }
        }
        if normal <= tol && contact <= tol {
            StructureClass::Sasakian
        } else if normal <= tol && closed <= tol {
            StructureClass::Cosymplectic
        } else {
            StructureClass::Unclassified
        }
    }
}

fn project_values(p: &ChartPoint, v: &[f64], xi: &[VectorField; 3], eta: &[OneForm; 3]) -> Vec<f64> {
    let mut out = v.to_vec();
    for alpha in 0..3 {
        let eta_vals: Vec<f64> = eta[alpha].eval(p, 0).iter().map(|j| j.value()).collect();
        let xi_vals = xi[alpha].values(p);
        let pairing: f64 = eta_vals.iter().zip(v).map(|(e, x)| e * x).sum();
        for (o, x) in out.iter_mut().zip(&xi_vals) {
            *o -= pairing * x;
        }
    }
    out
}

fn horizontal_basis_from(p: &ChartPoint, xi: &[VectorField; 3], eta: &[OneForm; 3]) -> Vec<Vec<f64>> {
    let m = p.dim();
    let horizontal_rank = m - 3;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(horizontal_rank);
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(horizontal_rank);
    for axis in 0..m {
        if basis.len() == horizontal_rank {
            break;
        }
        let mut e = vec![0.0; m];
        e[axis] = 1.0;
        let projected = project_values(p, &e, xi, eta);
        // Rank test: Euclidean Gram-Schmidt residual against accepted vectors.
        let mut resid = projected.clone();
        for q in &ortho {
            let dot: f64 = resid.iter().zip(q).map(|(a, b)| a * b).sum();
            for (r, qv) in resid.iter_mut().zip(q) {
                *r -= dot * qv;
            }
        }
        let norm: f64 = resid.iter().map(|r| r * r).sum::<f64>().sqrt();
        if norm >= 0.1 {
            for r in &mut resid {
                *r /= norm;
            }
            ortho.push(resid);
            basis.push(projected);
        }
    }
    assert_eq!(
        basis.len(),
        horizontal_rank,
        "horizontal basis selection found too few independent directions"
    );
    basis
}

/// The matrix `[w(b_i, b_j)]` of a 2-form on a basis of value vectors.
pub fn form_matrix_on_basis(form: &TwoForm, p: &ChartPoint, basis: &[Vec<f64>]) -> DMatrix<f64> {
    let m = p.dim();
    let comps = form.eval(p, 0);
    let k = basis.len();
    DMatrix::from_fn(k, k, |r, c| {
        let mut acc = 0.0;
        for i in 0..m {
            for j in 0..m {
                acc += comps[i * m + j].value() * basis[r][i] * basis[c][j];
            }
        }
        acc
    })
}

/// Reconstructs the full metric at `p` from the three fundamental 2-forms
/// and the Reeb data alone (no metric input): the horizontal block is
/// `-B_3 B_2^{-1} B_1` on a horizontal basis with `B_a = [Phi_a(b_i, b_j)]`,
/// the Reeb fields are declared orthonormal and horizontal-orthogonal, and
/// the result is expressed in chart coordinates (row-major `m x m`).
pub fn recover_metric(
    forms: &[TwoForm; 3],
    xi: &[VectorField; 3],
    eta: &[OneForm; 3],
    p: &ChartPoint,
) -> Vec<f64> {
    let m = p.dim();
    let basis = horizontal_basis_from(p, xi, eta);
    let k = basis.len();
    let b1 = form_matrix_on_basis(&forms[0], p, &basis);
    let b2 = form_matrix_on_basis(&forms[1], p, &basis);
    let b3 = form_matrix_on_basis(&forms[2], p, &basis);
    let b2_inv = b2.try_inverse().expect("second fundamental-form matrix must be invertible");
    let g_h = -(b3 * b2_inv * b1);
    // Assemble the full Gram matrix in the basis [b | xi] and change to
    // coordinates: g_coord = T^{-T} G T^{-1} where T's columns are the basis.
    let mut t = DMatrix::zeros(m, m);
    for (c, b) in basis.iter().enumerate() {
        for r in 0..m {
            t[(r, c)] = b[r];
        }
    }
    for alpha in 0..3 {
        let xv = xi[alpha].values(p);
        for r in 0..m {
            t[(r, k + alpha)] = xv[r];
        }
    }
    let mut gram = DMatrix::zeros(m, m);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = g_h[(i, j)];
        }
    }
    for alpha in 0..3 {
        gram[(k + alpha, k + alpha)] = 1.0;
    }
    let t_inv = t.try_inverse().expect("basis change must be invertible");
    let g = t_inv.transpose() * gram * t_inv;
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            out[i * m + j] = g[(i, j)];
        }
    }
    out
}

/// Reconstructs the horizontal action of `phi_alpha` on the given basis from
/// the fundamental forms alone:
/// `phi_alpha|_H = -1/2 sum_bc eps_abc B_b^{-1} B_c` (matrix in the basis,
/// column convention).
pub fn recover_phi_horizontal(
    forms: &[TwoForm; 3],
    alpha: usize,
    p: &ChartPoint,
    basis: &[Vec<f64>],
) -> DMatrix<f64> {
    let k = basis.len();
    let mats: Vec<DMatrix<f64>> = (0..3)
        .map(|a| form_matrix_on_basis(&forms[a], p, basis))
        .collect();
    let mut acc = DMatrix::zeros(k, k);
    for b in 0..3 {
        for c in 0..3 {
            let eps = epsilon(alpha, b, c);
            if eps != 0.0 {
                let inv = mats[b]
                    .clone()
                    .try_inverse()
                    .expect("fundamental-form matrix must be invertible");
                acc += (inv * &mats[c]).scale(eps);
            }
        }
    }
    acc.scale(-0.5)
}
