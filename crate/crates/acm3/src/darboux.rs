//! Adapted orthonormal frames on flat charts.
//!
//! On a flat model the structure tensors admit a global frame
//!
//! ```text
//! X_1 .. X_n,  Y_i = phi_1 X_i,  U_i = phi_2 X_i,  V_i = phi_3 X_i,
//! xi_1, xi_2, xi_3
//! ```
//!
//! that is orthonormal, commuting, and gives every structure tensor constant
//! components; in particular the fundamental 2-forms reduce to fixed
//! integer-coefficient matrices.  [`build_darboux_frame`] assembles such a
//! frame from an arbitrary chart presentation: it seeds the horizontal legs
//! at a base point by metric Gram-Schmidt of the projected coordinate
//! directions, closes each leg into a quadruple with the three structure
//! endomorphisms, and extends the frame to other points by parallel
//! transport along straight chart segments.  Curved models are rejected up
//! front ([`DarbouxError::NotFlat`]), since no commuting orthonormal frame
//! of this kind exists there.

use thiserror::Error;

use crate::contact3::Acm3Structure;
use crate::jets::ChartPoint;
use crate::models::Model;
use crate::riemann::LeviCivita;

/// Why a frame could not be built.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DarbouxError {
    /// The chart has curvature, so no parallel orthonormal frame exists.
    #[error("chart is not flat (max curvature component {residual:.3e}); adapted frames require a flat model")]
    NotFlat { residual: f64 },
}

/// An adapted orthonormal frame on a flat chart, evaluable at any point.
///
/// Frame vectors are ordered `X_1..X_n, Y_1..Y_n, U_1..U_n, V_1..V_n,
/// xi_1, xi_2, xi_3`.
#[derive(Clone)]
pub struct DarbouxFrame {
    structure: Acm3Structure,
    connection: LeviCivita,
    base: ChartPoint,
    horizontal_seed: Vec<Vec<f64>>,
    steps_per_unit: usize,
}

impl DarbouxFrame {
    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    pub fn base(&self) -> &ChartPoint {
        &self.base
    }

    /// The horizontal frame vectors at the base point, before transport.
    pub fn horizontal_seed(&self) -> &[Vec<f64>] {
        &self.horizontal_seed
    }

    /// Human-readable name of the `idx`-th frame vector (`X1`, `Y2`, `xi3`, ...).
    pub fn label(&self, idx: usize) -> String {
        let n = self.n();
        if idx < 4 * n {
            let block = ["X", "Y", "U", "V"][idx / n];
            format!("{}{}", block, idx % n + 1)
        } else {
            format!("xi{}", idx - 4 * n + 1)
        }
    }

    /// All `4n + 3` frame vectors at `q`, as rows of chart components.
    ///
    /// The horizontal legs are parallel-transported from the base point along
    /// the straight chart segment; the Reeb legs are read off the structure
    /// directly (they are parallel on flat models).
    pub fn frame_at(&self, q: &ChartPoint) -> Vec<Vec<f64>> {
        let mut frame = parallel_transport(
            &self.connection,
            &self.base,
            q,
            &self.horizontal_seed,
            self.steps_per_unit,
        );
        for alpha in 0..3 {
            frame.push(self.structure.xi[alpha].eval(q, 0).iter().map(|j| j.value()).collect());
        }
        frame
    }
}

/// Builds an adapted orthonormal frame for a flat model.
///
/// `steps_per_unit` controls the fixed-step fourth-order integrator used for
/// parallel transport: a segment of chart length `L` is covered in
/// `ceil(steps_per_unit * L)` steps (at least one).  Returns
/// [`DarbouxError::NotFlat`] when the curvature tensor at `base` is not
/// numerically zero.
pub fn build_darboux_frame(
    model: &Model,
    base: &ChartPoint,
    steps_per_unit: usize,
) -> Result<DarbouxFrame, DarbouxError> {
    let structure = model.structure().clone();
    let connection = LeviCivita::new(structure.metric.clone());
    let residual =
        connection.riemann_values(base).iter().fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    if residual > 1e-9 {
        return Err(DarbouxError::NotFlat { residual });
    }

    let m = structure.dim();
    let n = structure.n();
    let g: Vec<f64> = structure.metric.eval(base, 0).iter().map(|j| j.value()).collect();
    let xi: Vec<Vec<f64>> = (0..3)
        .map(|a| structure.xi[a].eval(base, 0).iter().map(|j| j.value()).collect())
        .collect();
    let eta: Vec<Vec<f64>> = (0..3)
        .map(|a| structure.eta[a].eval(base, 0).iter().map(|j| j.value()).collect())
        .collect();
    let phi: Vec<Vec<f64>> = (0..3)
        .map(|a| structure.phi[a].eval(base, 0).iter().map(|j| j.value()).collect())
        .collect();
    let apply = |mat: &[f64], v: &[f64]| -> Vec<f64> {
        (0..m).map(|i| (0..m).map(|j| mat[i * m + j] * v[j]).sum()).collect()
    };
    let inner = |a: &[f64], b: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                s += g[i * m + j] * a[i] * b[j];
            }
        }
        s
    };

    // Gram-Schmidt seed: walk the coordinate directions in order, project out
    // the Reeb components, orthogonalize against the quadruples already
    // accepted, and keep candidates with enough residual length.  Each kept
    // direction closes into a quadruple under the three endomorphisms, which
    // is automatically orthonormal by the structure algebra.
    let mut blocks: [Vec<Vec<f64>>; 4] = [vec![], vec![], vec![], vec![]];
    let mut next_candidate = 0;
    while blocks[0].len() < n {
        assert!(
            next_candidate < m,
            "failed to assemble a horizontal frame: chart directions are too degenerate"
        );
        let axis = next_candidate;
        next_candidate += 1;
        let mut v: Vec<f64> = (0..m).map(|i| f64::from(i == axis)).collect();
        for a in 0..3 {
            let c = eta[a][axis];
            for i in 0..m {
                v[i] -= c * xi[a][i];
            }
        }
        for block in &blocks {
            for w in block {
                let c = inner(&v, w);
                for i in 0..m {
                    v[i] -= c * w[i];
                }
            }
        }
        let norm = inner(&v, &v).sqrt();
        if norm < 0.1 {
            continue;
        }
        for c in &mut v {
            *c /= norm;
        }
        for (a, block) in blocks.iter_mut().enumerate().skip(1) {
            block.push(apply(&phi[a - 1], &v));
        }
        blocks[0].push(v);
    }
    let horizontal_seed: Vec<Vec<f64>> = blocks.into_iter().flatten().collect();

    Ok(DarbouxFrame {
        structure,
        connection,
        base: base.clone(),
        horizontal_seed,
        steps_per_unit: steps_per_unit.max(1),
    })
}

/// The constant matrix of the `alpha`-th fundamental 2-form in an adapted
/// frame (rows/columns ordered `X_1..X_n, Y_1..Y_n, U_1..U_n, V_1..V_n,
/// xi_1, xi_2, xi_3`).  These values are forced by the structure algebra:
/// e.g. `Phi_1(X_i, Y_i) = g(X_i, phi_1 phi_1 X_i) = -1`.
pub fn adapted_form_constants(alpha: usize, n: usize) -> Vec<Vec<f64>> {
    let m = 4 * n + 3;
    let mut f = vec![vec![0.0; m]; m];
    let mut set = |a: usize, b: usize, v: f64| {
        f[a][b] = v;
        f[b][a] = -v;
    };
    let (x, y, u, v, xi) = (0, n, 2 * n, 3 * n, 4 * n);
    for i in 0..n {
        match alpha {
            0 => {
                set(x + i, y + i, -1.0);
                set(u + i, v + i, -1.0);
            }
            1 => {
                set(x + i, u + i, -1.0);
                set(y + i, v + i, 1.0);
            }
            _ => {
                set(x + i, v + i, -1.0);
                set(y + i, u + i, -1.0);
            }
        }
    }
    match alpha {
        0 => set(xi + 1, xi + 2, -1.0),
        1 => set(xi, xi + 2, 1.0),
        _ => set(xi, xi + 1, -1.0),
    }
    f
}

/// Parallel transport of chart vectors along the straight segment between
/// two chart points, by classical fixed-step fourth-order Runge-Kutta on
/// `dv^k/dt = -Gamma^k_ij(c(t)) dc^i/dt v^j`.
///
/// All vectors (rows of `vectors`) are transported together so the
/// Christoffel table is assembled once per integrator stage.
pub fn parallel_transport(
    connection: &LeviCivita,
    from: &ChartPoint,
    to: &ChartPoint,
    vectors: &[Vec<f64>],
    steps_per_unit: usize,
) -> Vec<Vec<f64>> {
    let m = from.dim();
    assert_eq!(to.dim(), m, "transport endpoints live in different charts");
    let delta: Vec<f64> = (0..m).map(|i| to[i] - from[i]).collect();
    let length = delta.iter().map(|d| d * d).sum::<f64>().sqrt();
    let steps = ((steps_per_unit.max(1) as f64) * length).ceil().max(1.0) as usize;
    let h = 1.0 / steps as f64;

    let rhs = |t: f64, state: &[Vec<f64>]| -> Vec<Vec<f64>> {
        let pt = ChartPoint::new((0..m).map(|i| from[i] + t * delta[i]).collect());
        let gamma = connection.christoffel(&pt, 0);
        state
            .iter()
            .map(|v| {
                (0..m)
                    .map(|k| {
                        let mut s = 0.0;
                        for i in 0..m {
                            if delta[i] == 0.0 {
                                continue;
                            }
                            for j in 0..m {
                                s -= gamma[(k * m + i) * m + j].value() * delta[i] * v[j];
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    };
    let shifted = |state: &[Vec<f64>], dir: &[Vec<f64>], scale: f64| -> Vec<Vec<f64>> {
        state
            .iter()
            .zip(dir)
            .map(|(v, d)| v.iter().zip(d).map(|(a, b)| a + scale * b).collect())
            .collect()
    };

    let mut state = vectors.to_vec();
    for step in 0..steps {
        let t = step as f64 * h;
        let k1 = rhs(t, &state);
        let k2 = rhs(t + h / 2.0, &shifted(&state, &k1, h / 2.0));
        let k3 = rhs(t + h / 2.0, &shifted(&state, &k2, h / 2.0));
        let k4 = rhs(t + h, &shifted(&state, &k3, h));
        for (r, v) in state.iter_mut().enumerate() {
            for (i, c) in v.iter_mut().enumerate() {
                *c += h / 6.0 * (k1[r][i] + 2.0 * k2[r][i] + 2.0 * k3[r][i] + k4[r][i]);
            }
        }
    }
    state
}
