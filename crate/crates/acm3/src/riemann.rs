//! Affine connections and Riemannian curvature on a chart.
//!
//! The [`Connection`] trait exposes a covariant derivative on vector fields
//! plus derived torsion and operator-form curvature.  [`LeviCivita`] is the
//! metric connection: its Christoffel table is assembled from exact metric
//! jets (one inverse-metric computation per evaluation point) and curvature
//! is evaluated through the coordinate tensor formula
//!
//! ```text
//! R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik
//! ```
//!
//! with `R(e_i, e_j) e_k = R^l_ijk e_l`, so the round unit sphere satisfies
//! `R(X, Y)Z = g(Y, Z) X - g(X, Z) Y` and has sectional curvature `+1`.  The
//! operator form `R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
//! nabla_[X, Y] Z` is kept as a default trait method and doubles as an
//! independent cross-check of the tensor route.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;

use crate::fields::{jet_matrix_inverse, lie_bracket, point_key, MetricField, PointKey, VectorField};
use crate::jets::{ChartPoint, Jet};

/// An affine connection on the chart domain.
pub trait Connection: Send + Sync {
    fn dim(&self) -> usize;

    /// The covariant derivative `nabla_X Y`.
    fn covariant_derivative(&self, x: &VectorField, y: &VectorField) -> VectorField;

    /// Torsion `T(X, Y) = nabla_X Y - nabla_Y X - [X, Y]`.
    fn torsion(&self, x: &VectorField, y: &VectorField) -> VectorField {
        self.covariant_derivative(x, y)
            .sub(&self.covariant_derivative(y, x))
            .sub(&lie_bracket(x, y))
    }

    /// Operator-form curvature
    /// `R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X, Y] Z`.
    fn curvature_operator(&self, x: &VectorField, y: &VectorField, z: &VectorField) -> VectorField {
        self.covariant_derivative(x, &self.covariant_derivative(y, z))
            .sub(&self.covariant_derivative(y, &self.covariant_derivative(x, z)))
            .sub(&self.covariant_derivative(&lie_bracket(x, y), z))
    }
}

/// The Levi-Civita connection of a metric.
#[derive(Clone)]
pub struct LeviCivita {
    metric: MetricField,
    // Christoffel tables are expensive (metric jets plus a jet-level matrix
    // inverse) and nested covariant derivatives request them repeatedly at
    // the same point; clones share the memo.
    christoffel_cache: Arc<Mutex<HashMap<PointKey, Arc<Vec<Jet>>>>>,
}

impl LeviCivita {
    pub fn new(metric: MetricField) -> Self {
        Self { metric, christoffel_cache: Arc::new(Mutex::new(HashMap::new())) }
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    /// Christoffel symbols as jets of the requested order, packed as
    /// `gamma[(k * m + i) * m + j] = G^k_ij`.  Consumes one jet order of the
    /// metric.
    pub fn christoffel(&self, p: &ChartPoint, order: usize) -> Vec<Jet> {
        let key = point_key(p, order);
        if let Some(hit) = self.christoffel_cache.lock().unwrap().get(&key) {
            return hit.as_ref().clone();
        }
        let gamma = self.christoffel_uncached(p, order);
        self.christoffel_cache
            .lock()
            .unwrap()
            .insert(key, Arc::new(gamma.clone()));
        gamma
    }

    fn christoffel_uncached(&self, p: &ChartPoint, order: usize) -> Vec<Jet> {
        let m = p.dim();
        let g_hi = self.metric.eval(p, order + 1);
        let g_lo: Vec<Jet> = g_hi.iter().map(|j| j.truncated(order)).collect();
        let ginv = jet_matrix_inverse(&g_lo, m);
        // dg[a] holds the order-`order` jets of d_a g_ij.
        let dg: Vec<Vec<Jet>> = (0..m)
            .map(|a| g_hi.iter().map(|j| j.extract_partial(a)).collect())
            .collect();
        let mut gamma = vec![Jet::constant(0.0, m, order); m * m * m];
        for k in 0..m {
            for i in 0..m {
                for j in i..m {
                    let mut acc = Jet::constant(0.0, m, order);
                    for l in 0..m {
                        let sum = &(&dg[i][j * m + l] + &dg[j][i * m + l]) - &dg[l][i * m + j];
                        acc = acc + &ginv[k * m + l] * &sum;
                    }
                    let acc = acc.scale(0.5);
                    gamma[(k * m + i) * m + j] = acc.clone();
                    gamma[(k * m + j) * m + i] = acc;
                }
            }
        }
        gamma
    }

    /// Curvature tensor values `R^l_ijk` at `p`, packed as
    /// `r[((l * m + i) * m + j) * m + k]`.
    pub fn riemann_values(&self, p: &ChartPoint) -> Vec<f64> {
        let m = p.dim();
        let gamma = self.christoffel(p, 1);
        let gv = |k: usize, i: usize, j: usize| gamma[(k * m + i) * m + j].value();
        let dgv = |a: usize, k: usize, i: usize, j: usize| gamma[(k * m + i) * m + j].d1(a);
        let mut r = vec![0.0; m * m * m * m];
        for l in 0..m {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let mut v = dgv(i, l, j, k) - dgv(j, l, i, k);
                        for mm in 0..m {
                            v += gv(l, i, mm) * gv(mm, j, k) - gv(l, j, mm) * gv(mm, i, k);
                        }
                        r[((l * m + i) * m + j) * m + k] = v;
                    }
                }
            }
        }
        r
    }

    /// Ricci tensor values `Ric_jk = R^i_ijk` at `p`, row-major `m x m`.
    pub fn ricci_values(&self, p: &ChartPoint) -> Vec<f64> {
        let m = p.dim();
        let r = self.riemann_values(p);
        let mut ric = vec![0.0; m * m];
        for j in 0..m {
            for k in 0..m {
                let mut v = 0.0;
                for i in 0..m {
                    v += r[((i * m + i) * m + j) * m + k];
                }
                ric[j * m + k] = v;
            }
        }
        ric
    }

    /// Scalar curvature `g^jk Ric_jk` at `p`.
    pub fn scalar_curvature(&self, p: &ChartPoint) -> f64 {
        let m = p.dim();
        let ric = self.ricci_values(p);
        let g = DMatrix::from_row_slice(m, m, &self.metric.matrix_values(p));
        let ginv = g.try_inverse().expect("metric must be invertible");
        let mut scal = 0.0;
        for j in 0..m {
            for k in 0..m {
                scal += ginv[(j, k)] * ric[j * m + k];
            }
        }
        scal
    }

    /// A deterministic `g`-orthonormal frame at `p`: the columns of the
    /// returned row-major matrix satisfy `g(E_a, E_b) = delta_ab`.  Built
    /// from the Cholesky factor of `g(p)`, so it degrades gracefully as the
    /// metric varies and panics only if `g(p)` is not positive definite.
    pub fn orthonormal_frame(&self, p: &ChartPoint) -> Vec<f64> {
        let m = p.dim();
        let g = DMatrix::from_row_slice(m, m, &self.metric.matrix_values(p));
        let chol = nalgebra::Cholesky::new(g)
            .expect("metric must be positive definite for an orthonormal frame");
        let e = chol
            .l()
            .transpose()
            .try_inverse()
            .expect("Cholesky factor is invertible");
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = e[(i, j)];
            }
        }
        out
    }

    /// Sectional curvature of the plane spanned by the value vectors `x`,
    /// `y` at `p`.
    pub fn sectional_curvature(&self, p: &ChartPoint, x: &[f64], y: &[f64]) -> f64 {
        let m = p.dim();
        let r = self.riemann_values(p);
        let g = self.metric.matrix_values(p);
        let ip = |a: &[f64], b: &[f64]| -> f64 {
            let mut acc = 0.0;
            for i in 0..m {
                for j in 0..m {
                    acc += g[i * m + j] * a[i] * b[j];
                }
            }
            acc
        };
        // R(x, y)y contracted against x through the metric.
        let mut rxyy = vec![0.0; m];
        for l in 0..m {
            let mut acc = 0.0;
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        acc += r[((l * m + i) * m + j) * m + k] * x[i] * y[j] * y[k];
                    }
                }
            }
            rxyy[l] = acc;
        }
        let num = ip(&rxyy, x);
        let den = ip(x, x) * ip(y, y) - ip(x, y) * ip(x, y);
        num / den
    }
}

impl Connection for LeviCivita {
    fn dim(&self) -> usize {
        self.metric.dim()
    }

    fn covariant_derivative(&self, x: &VectorField, y: &VectorField) -> VectorField {
        assert_eq!(self.dim(), x.dim());
        assert_eq!(self.dim(), y.dim());
        let me = self.clone();
        let (x, y) = (x.clone(), y.clone());
        VectorField::from_fn(self.dim(), move |p, order| {
            let m = p.dim();
            let gamma = me.christoffel(p, order);
            let xs = x.eval(p, order);
            let ys = y.eval(p, order + 1);
            (0..m)
                .map(|k| {
                    let mut acc = Jet::constant(0.0, m, order);
                    for i in 0..m {
                        acc = acc + &xs[i] * &ys[k].extract_partial(i);
                        for j in 0..m {
                            acc = acc
                                + &(&xs[i] * &gamma[(k * m + i) * m + j]) * &ys[j].truncated(order);
                        }
                    }
                    acc
                })
                .collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::ScalarField;
    use crate::sampling::{random_orthogonal_matrix, random_vector_field, SplitMix64};

    /// Round 2-sphere of radius 1 in stereographic coordinates:
    /// `g = 4 / (1 + |u|^2)^2 * delta`.
    fn stereographic_sphere_metric(dim: usize) -> MetricField {
        let lam = ScalarField::from_expr(dim, |c| {
            let m = c[0].dim();
            let order = c[0].order();
            let mut s = Jet::constant(1.0, m, order);
            for ci in c {
                s = &s + &(ci * ci);
            }
            (&s * &s).recip().scale(4.0)
        });
        MetricField::conformally_flat(&lam)
    }

    fn sample_points() -> Vec<ChartPoint> {
        vec![
            ChartPoint::new(vec![0.0, 0.0]),
            ChartPoint::new(vec![0.7, -0.2]),
            ChartPoint::new(vec![-1.1, 0.4]),
        ]
    }

    #[test]
    fn christoffel_matches_finite_difference_oracle() {
        let g = stereographic_sphere_metric(2);
        let lc = LeviCivita::new(g.clone());
        let p = ChartPoint::new(vec![0.5, -0.3]);
        let m = 2;
        let h = 1e-5;
        // FD derivatives of the metric values.
        let dg = |a: usize| -> Vec<f64> {
            let plus = g.matrix_values(&p.shifted(a, h));
            let minus = g.matrix_values(&p.shifted(a, -h));
            plus.iter().zip(&minus).map(|(x, y)| (x - y) / (2.0 * h)).collect()
        };
        let dgs: Vec<Vec<f64>> = (0..m).map(dg).collect();
        let ginv = DMatrix::from_row_slice(m, m, &g.matrix_values(&p))
            .try_inverse()
            .unwrap();
        let gamma = lc.christoffel(&p, 0);
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let mut expect = 0.0;
                    for l in 0..m {
                        expect += 0.5
                            * ginv[(k, l)]
                            * (dgs[i][j * m + l] + dgs[j][i * m + l] - dgs[l][i * m + j]);
                    }
                    let got = gamma[(k * m + i) * m + j].value();
                    assert!(
                        (got - expect).abs() < 1e-7,
                        "Gamma^{k}_{i}{j}: jet {got} vs fd {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn round_two_sphere_has_unit_curvature() {
        let lc = LeviCivita::new(stereographic_sphere_metric(2));
        for p in sample_points() {
            let scal = lc.scalar_curvature(&p);
            assert!((scal - 2.0).abs() < 1e-8, "scal {scal} at {:?}", p);
            // Ric = g on a surface of Gauss curvature 1.
            let ric = lc.ricci_values(&p);
            let g = lc.metric().matrix_values(&p);
            for (r, gv) in ric.iter().zip(&g) {
                assert!((r - gv).abs() < 1e-8);
            }
            let k = lc.sectional_curvature(&p, &[1.0, 0.0], &[0.3, 1.0]);
            assert!((k - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn levi_civita_is_torsion_free_and_metric() {
        let g = stereographic_sphere_metric(2);
        let lc = LeviCivita::new(g.clone());
        let mut rng = SplitMix64::new(17);
        let x = random_vector_field(&mut rng, 2);
        let y = random_vector_field(&mut rng, 2);
        let z = random_vector_field(&mut rng, 2);
        let p = ChartPoint::new(vec![0.4, 0.6]);
        for v in lc.torsion(&x, &y).values(&p) {
            assert!(v.abs() < 1e-10, "torsion residual {v}");
        }
        // X g(Y, Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z).
        let lhs = g.apply(&y, &z).directional_derivative(&x);
        let rhs = g
            .apply(&lc.covariant_derivative(&x, &y), &z)
            .add(&g.apply(&y, &lc.covariant_derivative(&x, &z)));
        assert!((lhs.value(&p) - rhs.value(&p)).abs() < 1e-10);
    }

    #[test]
    fn tensor_and_operator_curvature_agree() {
        let lc = LeviCivita::new(stereographic_sphere_metric(2));
        let p = ChartPoint::new(vec![0.3, -0.8]);
        let m = 2;
        let r = lc.riemann_values(&p);
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let op = lc
                        .curvature_operator(
                            &VectorField::coordinate_vector(m, i),
                            &VectorField::coordinate_vector(m, j),
                            &VectorField::coordinate_vector(m, k),
                        )
                        .values(&p);
                    for l in 0..m {
                        let tensor = r[((l * m + i) * m + j) * m + k];
                        assert!(
                            (op[l] - tensor).abs() < 1e-9,
                            "R^{l}_{i}{j}{k}: op {} vs tensor {tensor}",
                            op[l]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn curvature_is_tensorial_in_its_arguments() {
        // Multiplying arguments by scalar functions must not change the
        // pointwise operator value (first-derivative terms cancel).
        let lc = LeviCivita::new(stereographic_sphere_metric(2));
        let mut rng = SplitMix64::new(23);
        let x = random_vector_field(&mut rng, 2);
        let y = random_vector_field(&mut rng, 2);
        let z = random_vector_field(&mut rng, 2);
        let f = ScalarField::from_expr(2, |c| {
            let one = Jet::constant(1.0, 2, c[0].order());
            &one + &(&c[0] * &c[1])
        });
        let p = ChartPoint::new(vec![0.2, 0.5]);
        let fv = f.value(&p);
        let plain = lc.curvature_operator(&x, &y, &z).values(&p);
        let scaled = lc
            .curvature_operator(&x.scale_by(&f), &y, &z)
            .values(&p);
        for (s, pl) in scaled.iter().zip(&plain) {
            assert!((s - fv * pl).abs() < 1e-8, "{s} vs {}", fv * pl);
        }
    }

    #[test]
    fn ricci_trace_is_frame_independent() {
        // The coordinate trace equals the orthonormal-frame trace, and the
        // frame trace is invariant under a random rotation of the frame.
        let lc = LeviCivita::new(stereographic_sphere_metric(2));
        let p = ChartPoint::new(vec![0.6, 0.1]);
        let m = 2;
        let r = lc.riemann_values(&p);
        let g = lc.metric().matrix_values(&p);
        let frame = lc.orthonormal_frame(&p);
        let mut rng = SplitMix64::new(31);
        let rot = random_orthogonal_matrix(&mut rng, m);
        // Rotated frame columns: E'_a = sum_b E_b rot[b*m+a].
        let col = |mat: &[f64], a: usize| -> Vec<f64> {
            (0..m).map(|i| mat[i * m + a]).collect()
        };
        let rotated: Vec<Vec<f64>> = (0..m)
            .map(|a| {
                let mut v = vec![0.0; m];
                for b in 0..m {
                    let eb = col(&frame, b);
                    for i in 0..m {
                        v[i] += eb[i] * rot[b * m + a];
                    }
                }
                v
            })
            .collect();
        let ric_frame = |frames: &[Vec<f64>], yj: usize, zk: usize| -> f64 {
            let mut acc = 0.0;
            for ea in frames {
                // g(R(E_a, e_yj) e_zk, E_a)
                for l in 0..m {
                    let mut rl = 0.0;
                    for i in 0..m {
                        rl += r[((l * m + i) * m + yj) * m + zk] * ea[i];
                    }
                    for q in 0..m {
                        acc += g[q * m + l] * rl * ea[q];
                    }
                }
            }
            acc
        };
        let ric = lc.ricci_values(&p);
        let frames: Vec<Vec<f64>> = (0..m).map(|a| col(&frame, a)).collect();
        for j in 0..m {
            for k in 0..m {
                let via_frame = ric_frame(&frames, j, k);
                let via_rotated = ric_frame(&rotated, j, k);
                assert!((via_frame - ric[j * m + k]).abs() < 1e-9);
                assert!((via_rotated - ric[j * m + k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn first_bianchi_identity_holds() {
        let lc = LeviCivita::new(stereographic_sphere_metric(2));
        let p = ChartPoint::new(vec![0.9, -0.5]);
        let m = 2;
        let r = lc.riemann_values(&p);
        for l in 0..m {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let cyc = r[((l * m + i) * m + j) * m + k]
                            + r[((l * m + j) * m + k) * m + i]
                            + r[((l * m + k) * m + i) * m + j];
                        assert!(cyc.abs() < 1e-9, "Bianchi residual {cyc}");
                    }
                }
            }
        }
    }

    #[test]
    fn flat_metric_has_zero_curvature() {
        let lc = LeviCivita::new(MetricField::euclidean(3));
        let p = ChartPoint::new(vec![0.3, 1.0, -0.4]);
        for v in lc.riemann_values(&p) {
            assert_eq!(v, 0.0);
        }
        assert_eq!(lc.scalar_curvature(&p), 0.0);
    }
}
