//! Deterministic sampling: seeded points, polynomial test fields, and random
//! rotations.
//!
//! Everything here is driven by a [`SplitMix64`] stream so that verification
//! runs are exactly reproducible from a single `u64` seed.  Independent
//! streams for different purposes are derived with [`derive_seed`], keyed by
//! a string tag, so adding or reordering consumers does not shift anyone
//! else's stream.

use crate::fields::{ScalarField, VectorField};
use crate::jets::{ChartPoint, Jet};

/// SplitMix64: a small, fast, well-mixed 64-bit PRNG.  Not cryptographic;
/// used only to scatter sample points and coefficients.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Derives an independent seed from a base seed and a purpose tag (FNV-1a of
/// the tag, mixed with the base through one SplitMix64 step).
pub fn derive_seed(base: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    SplitMix64::new(base ^ h).next_u64()
}

/// Samples a chart point with every coordinate in
/// `[-radius / sqrt(m), radius / sqrt(m)]`, so the Euclidean norm never
/// exceeds `radius`.
pub fn sample_point(rng: &mut SplitMix64, dim: usize, radius: f64) -> ChartPoint {
    let a = radius / (dim as f64).sqrt();
    ChartPoint::new((0..dim).map(|_| rng.uniform(-a, a)).collect())
}

/// Coefficients of a random polynomial of total degree <= 2 in `dim`
/// variables, all uniform in `[-1, 1]`.
#[derive(Clone)]
struct PolyCoeffs {
    constant: f64,
    linear: Vec<f64>,
    quadratic: Vec<f64>, // entries for i <= j, row-packed
}

impl PolyCoeffs {
    fn sample(rng: &mut SplitMix64, dim: usize) -> Self {
        Self {
            constant: rng.uniform(-1.0, 1.0),
            linear: (0..dim).map(|_| rng.uniform(-1.0, 1.0)).collect(),
            quadratic: (0..dim * (dim + 1) / 2).map(|_| rng.uniform(-1.0, 1.0)).collect(),
        }
    }

    fn eval(&self, coords: &[Jet]) -> Jet {
        let m = coords.len();
        let order = coords[0].order();
        let mut acc = Jet::constant(self.constant, m, order);
        for (i, c) in self.linear.iter().enumerate() {
            acc = acc + coords[i].scale(*c);
        }
        let mut q = 0;
        for i in 0..m {
            for j in i..m {
                acc = acc + (&coords[i] * &coords[j]).scale(self.quadratic[q]);
                q += 1;
            }
        }
        acc
    }
}

/// A random scalar field: polynomial of total degree <= 2 with coefficients
/// in `[-1, 1]`.  Degree 2 keeps third derivatives of products within the jet
/// budget while still exercising every curvature term.
pub fn random_polynomial_scalar(rng: &mut SplitMix64, dim: usize) -> ScalarField {
    let coeffs = PolyCoeffs::sample(rng, dim);
    ScalarField::from_expr(dim, move |coords| coeffs.eval(coords))
}

/// A random vector field whose components are independent degree-<=2
/// polynomials, evaluated en bloc.
pub fn random_vector_field(rng: &mut SplitMix64, dim: usize) -> VectorField {
    let comps: Vec<PolyCoeffs> = (0..dim).map(|_| PolyCoeffs::sample(rng, dim)).collect();
    VectorField::from_fn(dim, move |p, order| {
        let coords: Vec<Jet> = (0..p.dim()).map(|i| Jet::coordinate(p, i, order)).collect();
        comps.iter().map(|c| c.eval(&coords)).collect()
    })
}

/// A uniformly scattered orthogonal matrix (row-major), built by
/// Gram-Schmidt on a random matrix.  Determinant may be of either sign.
pub fn random_orthogonal_matrix(rng: &mut SplitMix64, dim: usize) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..dim * dim).map(|_| rng.uniform(-1.0, 1.0)).collect();
        if let Some(q) = gram_schmidt_rows(&raw, dim) {
            return q;
        }
    }
}

/// Orthonormalizes the rows of `a`; `None` if the rows are too close to
/// dependent for a stable result.
fn gram_schmidt_rows(a: &[f64], dim: usize) -> Option<Vec<f64>> {
    let mut q = a.to_vec();
    for i in 0..dim {
        for prev in 0..i {
            let mut dot = 0.0;
            for k in 0..dim {
                dot += q[i * dim + k] * q[prev * dim + k];
            }
            for k in 0..dim {
                q[i * dim + k] -= dot * q[prev * dim + k];
            }
        }
        let norm: f64 = (0..dim).map(|k| q[i * dim + k] * q[i * dim + k]).sum::<f64>().sqrt();
        if norm < 1e-6 {
            return None;
        }
        for k in 0..dim {
            q[i * dim + k] /= norm;
        }
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_reproducible() {
        let mut a = SplitMix64::new(42);
        let mut b = SplitMix64::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn derived_seeds_differ_by_tag() {
        let s1 = derive_seed(7, "fields");
        let s2 = derive_seed(7, "points");
        assert_ne!(s1, s2);
        assert_eq!(s1, derive_seed(7, "fields"));
    }

    #[test]
    fn sampled_points_respect_the_radius() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let p = sample_point(&mut rng, 7, 2.0);
            let norm: f64 = p.coords().iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!(norm <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn random_orthogonal_matrix_is_orthogonal() {
        let mut rng = SplitMix64::new(11);
        for dim in [2_usize, 3, 7] {
            let q = random_orthogonal_matrix(&mut rng, dim);
            for i in 0..dim {
                for j in 0..dim {
                    let mut dot = 0.0;
                    for k in 0..dim {
                        dot += q[i * dim + k] * q[j * dim + k];
                    }
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-12, "({i},{j}) -> {dot}");
                }
            }
        }
    }

    #[test]
    fn polynomial_fields_have_vanishing_third_derivatives() {
        let mut rng = SplitMix64::new(5);
        let f = random_polynomial_scalar(&mut rng, 3);
        let p = ChartPoint::new(vec![0.2, -0.5, 0.8]);
        let jet = f.eval(&p, 3);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(jet.d3(i, j, k), 0.0);
                }
            }
        }
    }
}
