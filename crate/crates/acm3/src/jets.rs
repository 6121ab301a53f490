//! Truncated multivariate jets: the differentiation substrate of the engine.
//!
//! A [`Jet`] stores the value of a scalar quantity at a chart point together
//! with all of its partial derivatives up to a fixed order `K <= 3`, in dense
//! symmetric multi-index storage (only one copy of each symmetric derivative
//! is kept).  Arithmetic on jets propagates derivatives exactly via the
//! Leibniz and chain rules, so every derivative produced downstream (metric
//! coefficients, Christoffel symbols, curvature) is exact up to floating
//! point roundoff -- no truncation error.
//!
//! Finite differences appear in this crate only as a cross-checking oracle in
//! tests and in the dedicated derivative-oracle verification check.
//!
//! # Storage layout
//!
//! For dimension `m` the coefficient buffer is laid out as
//!
//! ```text
//! [ value | d_0 .. d_{m-1} | d_{ij} (i<=j) | d_{ijk} (i<=j<=k) ]
//! ```
//!
//! with the blocks after the orders actually carried simply absent.  Entries
//! are the *derivative values* themselves (not Taylor coefficients), so no
//! factorial bookkeeping is needed by callers.

use std::ops::{Add, Index, Mul, Neg, Sub};

use thiserror::Error;

/// Hard ceiling on the jet order carried by the engine.
///
/// Curvature of either connection needs second derivatives of the metric and
/// structure fields; one spare order is kept for cross-checking oracles.
pub const MAX_ORDER: usize = 3;

/// Errors raised by value-domain jet operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    /// Division by a jet whose value part is zero.
    #[error("division by a jet with zero value part")]
    DivisionByZero,
    /// Square root of a jet whose value part is not strictly positive.
    #[error("square root of a jet with non-positive value part ({0})")]
    SqrtNonPositive(f64),
}

/// A point of a coordinate chart: a finite real tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartPoint {
    coords: Vec<f64>,
}

impl ChartPoint {
    /// Creates a chart point.  Panics if any coordinate is not finite.
    pub fn new(coords: Vec<f64>) -> Self {
        assert!(
            coords.iter().all(|c| c.is_finite()),
            "chart point coordinates must be finite"
        );
        Self { coords }
    }

    /// The origin of an `m`-dimensional chart.
    pub fn origin(dim: usize) -> Self {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, axis: usize) -> f64 {
        self.coords[axis]
    }

    /// Returns the point shifted by `delta` along `axis` (used by the
    /// finite-difference oracle).
    pub fn shifted(&self, axis: usize, delta: f64) -> Self {
        let mut coords = self.coords.clone();
        coords[axis] += delta;
        Self::new(coords)
    }
}

impl From<Vec<f64>> for ChartPoint {
    fn from(coords: Vec<f64>) -> Self {
        Self::new(coords)
    }
}

impl Index<usize> for ChartPoint {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// Number of unordered pairs `i <= j` drawn from `m` indices.
pub(crate) fn sym2_len(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Number of unordered triples `i <= j <= k` drawn from `m` indices.
pub(crate) fn sym3_len(m: usize) -> usize {
    m * (m + 1) * (m + 2) / 6
}

/// Position of the pair `(i, j)` with `i <= j` in the symmetric block.
#[inline]
pub(crate) fn sym2_index(m: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < m);
    i * (2 * m - i + 1) / 2 + (j - i)
}

/// Position of the triple `(i, j, k)` with `i <= j <= k` in the symmetric block.
#[inline]
pub(crate) fn sym3_index(m: usize, i: usize, j: usize, k: usize) -> usize {
    debug_assert!(i <= j && j <= k && k < m);
    // Triples starting below `i` occupy one full symmetric pair block each.
    let mut offset = 0;
    for a in 0..i {
        offset += sym2_len(m - a);
    }
    offset + sym2_index(m - i, j - i, k - i)
}

fn coeff_len(m: usize, order: usize) -> usize {
    match order {
        0 => 1,
        1 => 1 + m,
        2 => 1 + m + sym2_len(m),
        3 => 1 + m + sym2_len(m) + sym3_len(m),
        _ => panic!("jet order {order} exceeds the maximum of {MAX_ORDER}"),
    }
}

#[inline]
fn sorted2(i: usize, j: usize) -> (usize, usize) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

#[inline]
fn sorted3(i: usize, j: usize, k: usize) -> (usize, usize, usize) {
    let (a, b) = sorted2(i, j);
    if k >= b {
        (a, b, k)
    } else if k >= a {
        (a, k, b)
    } else {
        (k, a, b)
    }
}

/// Truncated jet of a scalar quantity: value plus exact partial derivatives
/// up to `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    dim: usize,
    order: usize,
    coeffs: Vec<f64>,
}

impl Jet {
    fn zeroed(dim: usize, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order budget exceeded: {order} > {MAX_ORDER}");
        assert!(dim > 0, "jet dimension must be positive");
        Self {
            dim,
            order,
            coeffs: vec![0.0; coeff_len(dim, order)],
        }
    }

    /// The jet of a constant: value `c`, all derivatives zero.
    pub fn constant(c: f64, dim: usize, order: usize) -> Self {
        let mut jet = Self::zeroed(dim, order);
        jet.coeffs[0] = c;
        jet
    }

    /// The jet of the coordinate function `u^axis` at `p`: value `p[axis]`,
    /// gradient `e_axis`, higher derivatives zero.
    pub fn coordinate(p: &ChartPoint, axis: usize, order: usize) -> Self {
        assert!(axis < p.dim(), "coordinate axis {axis} out of range for dim {}", p.dim());
        let mut jet = Self::zeroed(p.dim(), order);
        jet.coeffs[0] = p.coord(axis);
        if order >= 1 {
            jet.coeffs[1 + axis] = 1.0;
        }
        jet
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// First partial derivative along `i`.  Requires `order >= 1`.
    pub fn d1(&self, i: usize) -> f64 {
        assert!(self.order >= 1, "first derivative requested from an order-0 jet");
        self.coeffs[1 + i]
    }

    /// Second partial derivative along `(i, j)` in either index order.
    pub fn d2(&self, i: usize, j: usize) -> f64 {
        assert!(self.order >= 2, "second derivative requested from an order-{} jet", self.order);
        let (a, b) = sorted2(i, j);
        self.coeffs[1 + self.dim + sym2_index(self.dim, a, b)]
    }

    /// Third partial derivative along `(i, j, k)` in any index order.
    pub fn d3(&self, i: usize, j: usize, k: usize) -> f64 {
        assert!(self.order >= 3, "third derivative requested from an order-{} jet", self.order);
        let (a, b, c) = sorted3(i, j, k);
        self.coeffs[1 + self.dim + sym2_len(self.dim) + sym3_index(self.dim, a, b, c)]
    }

    fn set_d1(&mut self, i: usize, v: f64) {
        self.coeffs[1 + i] = v;
    }

    fn set_d2(&mut self, i: usize, j: usize, v: f64) {
        let (a, b) = sorted2(i, j);
        let base = 1 + self.dim;
        self.coeffs[base + sym2_index(self.dim, a, b)] = v;
    }

    fn set_d3(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let (a, b, c) = sorted3(i, j, k);
        let base = 1 + self.dim + sym2_len(self.dim);
        self.coeffs[base + sym3_index(self.dim, a, b, c)] = v;
    }

    /// Largest absolute coefficient (value or any derivative).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |acc, c| acc.max(c.abs()))
    }

    /// The same jet truncated to a lower (or equal) order.
    pub fn truncated(&self, order: usize) -> Jet {
        assert!(
            order <= self.order,
            "cannot truncate an order-{} jet up to order {order}",
            self.order
        );
        let mut out = Self::zeroed(self.dim, order);
        let len = out.coeffs.len();
        out.coeffs.copy_from_slice(&self.coeffs[..len]);
        out
    }

    /// Extracts the jet of the partial derivative along `axis`, one order
    /// lower than `self`.  An order-`K` jet of `f` yields an order-`K-1` jet
    /// of the scalar `df/du^axis`.
    pub fn extract_partial(&self, axis: usize) -> Jet {
        assert!(
            self.order >= 1,
            "cannot extract a partial derivative from an order-0 jet"
        );
        let mut out = Self::zeroed(self.dim, self.order - 1);
        out.coeffs[0] = self.d1(axis);
        if out.order >= 1 {
            for i in 0..self.dim {
                out.set_d1(i, self.d2(axis, i));
            }
        }
        if out.order >= 2 {
            for i in 0..self.dim {
                for j in i..self.dim {
                    out.set_d2(i, j, self.d3(axis, i, j));
                }
            }
        }
        out
    }

    fn assert_compatible(&self, rhs: &Jet) {
        assert_eq!(self.dim, rhs.dim, "jet dimension mismatch: {} vs {}", self.dim, rhs.dim);
        assert_eq!(
            self.order, rhs.order,
            "jet order mismatch: {} vs {}",
            self.order, rhs.order
        );
    }

    /// Multiplies by a scalar constant.
    pub fn scale(&self, c: f64) -> Jet {
        let mut out = self.clone();
        for v in &mut out.coeffs {
            *v *= c;
        }
        out
    }

    /// Composes with a univariate function `phi` given its derivatives
    /// `[phi, phi', phi'', phi''']` at `self.value()` (Faa di Bruno to
    /// order 3).  Orders above `self.order` of `derivs` are ignored.
    pub fn compose_univariate(&self, derivs: [f64; 4]) -> Jet {
        let m = self.dim;
        let mut out = Self::zeroed(m, self.order);
        out.coeffs[0] = derivs[0];
        if self.order >= 1 {
            for i in 0..m {
                out.set_d1(i, derivs[1] * self.d1(i));
            }
        }
        if self.order >= 2 {
            for i in 0..m {
                for j in i..m {
                    out.set_d2(i, j, derivs[2] * self.d1(i) * self.d1(j) + derivs[1] * self.d2(i, j));
                }
            }
        }
        if self.order >= 3 {
            for i in 0..m {
                for j in i..m {
                    for k in j..m {
                        let v = derivs[3] * self.d1(i) * self.d1(j) * self.d1(k)
                            + derivs[2]
                                * (self.d2(i, j) * self.d1(k)
                                    + self.d2(i, k) * self.d1(j)
                                    + self.d2(j, k) * self.d1(i))
                            + derivs[1] * self.d3(i, j, k);
                        out.set_d3(i, j, k, v);
                    }
                }
            }
        }
        out
    }

    /// Reciprocal `1/self`.  Fails if the value part is zero.
    pub fn checked_recip(&self) -> Result<Jet, JetError> {
        let v = self.value();
        if v == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let u = 1.0 / v;
        Ok(self.compose_univariate([u, -u * u, 2.0 * u * u * u, -6.0 * u * u * u * u]))
    }

    /// Reciprocal; panics on a zero value part.
    pub fn recip(&self) -> Jet {
        self.checked_recip().expect("jet reciprocal")
    }

    /// Quotient `self / rhs`.  Fails if `rhs` has a zero value part.
    pub fn checked_div(&self, rhs: &Jet) -> Result<Jet, JetError> {
        Ok(self * &rhs.checked_recip()?)
    }

    /// Square root.  Fails unless the value part is strictly positive.
    pub fn checked_sqrt(&self) -> Result<Jet, JetError> {
        let v = self.value();
        if v <= 0.0 {
            return Err(JetError::SqrtNonPositive(v));
        }
        let s = v.sqrt();
        Ok(self.compose_univariate([
            s,
            0.5 / s,
            -0.25 / (s * s * s),
            0.375 / (s * s * s * s * s),
        ]))
    }

    /// Square root; panics on a non-positive value part.
    pub fn sqrt(&self) -> Jet {
        self.checked_sqrt().expect("jet square root")
    }

    /// Pullback of the jet under a linear change of variables.
    ///
    /// If `self` is the jet of `f` at `u` and the old coordinates depend on
    /// the new ones linearly, `u = B q + d`, then the result is the jet of
    /// `q -> f(B q + d)` at the corresponding `q`.  `b` is the `m_u x m_q`
    /// matrix `du/dq` in row-major order.
    pub fn pullback_linear(&self, b: &[f64], new_dim: usize) -> Jet {
        let m_u = self.dim;
        let m_q = new_dim;
        assert_eq!(b.len(), m_u * m_q, "pullback matrix has the wrong shape");
        let entry = |r: usize, c: usize| b[r * m_q + c];
        let mut out = Self::zeroed(m_q, self.order);
        out.coeffs[0] = self.value();
        if self.order >= 1 {
            for i in 0..m_q {
                let mut acc = 0.0;
                for p in 0..m_u {
                    acc += self.d1(p) * entry(p, i);
                }
                out.set_d1(i, acc);
            }
        }
        if self.order >= 2 {
            for i in 0..m_q {
                for j in i..m_q {
                    let mut acc = 0.0;
                    for p in 0..m_u {
                        for q in 0..m_u {
                            acc += self.d2(p, q) * entry(p, i) * entry(q, j);
                        }
                    }
                    out.set_d2(i, j, acc);
                }
            }
        }
        if self.order >= 3 {
            for i in 0..m_q {
                for j in i..m_q {
                    for k in j..m_q {
                        let mut acc = 0.0;
                        for p in 0..m_u {
                            for q in 0..m_u {
                                for r in 0..m_u {
                                    acc += self.d3(p, q, r) * entry(p, i) * entry(q, j) * entry(r, k);
                                }
                            }
                        }
                        out.set_d3(i, j, k, acc);
                    }
                }
            }
        }
        out
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (o, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o += r;
        }
        out
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.assert_compatible(rhs);
        let mut out = self.clone();
        for (o, r) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *o -= r;
        }
        out
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.assert_compatible(rhs);
        let m = self.dim;
        let mut out = Jet::zeroed(m, self.order);
        out.coeffs[0] = self.value() * rhs.value();
        if self.order >= 1 {
            for i in 0..m {
                out.set_d1(i, self.d1(i) * rhs.value() + self.value() * rhs.d1(i));
            }
        }
        if self.order >= 2 {
            for i in 0..m {
                for j in i..m {
                    let v = self.d2(i, j) * rhs.value()
                        + self.d1(i) * rhs.d1(j)
                        + self.d1(j) * rhs.d1(i)
                        + self.value() * rhs.d2(i, j);
                    out.set_d2(i, j, v);
                }
            }
        }
        if self.order >= 3 {
            // Leibniz over the eight position subsets of {i, j, k}; repeated
            // indices are handled automatically because positions, not index
            // values, are partitioned.
            for i in 0..m {
                for j in i..m {
                    for k in j..m {
                        let v = self.d3(i, j, k) * rhs.value()
                            + self.d2(i, j) * rhs.d1(k)
                            + self.d2(i, k) * rhs.d1(j)
                            + self.d2(j, k) * rhs.d1(i)
                            + self.d1(i) * rhs.d2(j, k)
                            + self.d1(j) * rhs.d2(i, k)
                            + self.d1(k) * rhs.d2(i, j)
                            + self.value() * rhs.d3(i, j, k);
                        out.set_d3(i, j, k, v);
                    }
                }
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Jet> for Jet {
            type Output = Jet;
            fn $method(self, rhs: &Jet) -> Jet {
                (&self).$method(rhs)
            }
        }
        impl $trait<Jet> for &Jet {
            type Output = Jet;
            fn $method(self, rhs: Jet) -> Jet {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        (&self).neg()
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}
