//! Chart-domain tensor fields evaluated en bloc.
//!
//! Every field type wraps a closure `(&ChartPoint, order) -> components`,
//! where the components are [`Jet`]s of the requested order and *all*
//! components are produced by a single call.  En-bloc evaluation matters:
//! expensive intermediates (most importantly the inverse-metric jets behind a
//! Christoffel table) are built once per point instead of once per component.
//!
//! Derivative-consuming combinators ([`ScalarField::partial`],
//! [`lie_bracket`], [`OneForm::d`], the Lie derivatives) evaluate their
//! inputs one jet order above the requested output order and extract the
//! extra derivatives.  Requesting more total orders than the jet budget
//! ([`crate::jets::MAX_ORDER`]) allows is a programming error and panics.
//!
//! Component conventions: vectors carry upper indices `X^i`, 1-forms lower
//! indices `w_i`; 2-forms and 3-forms store all index combinations of
//! `w(e_i, e_j)` / `w(e_i, e_j, e_k)` (antisymmetry is the constructor's
//! responsibility and holds for every combinator in this crate); an
//! endomorphism stores `A^i_j` row-major with `j` the argument index, acting
//! on column vectors; a metric stores `g_ij` row-major.  The wedge product of
//! 1-forms uses `(a ^ b)(X, Y) = (a(X) b(Y) - a(Y) b(X)) / 2` and the
//! exterior derivative of a 1-form is
//! `dw(e_i, e_j) = (d_i w_j - d_j w_i) / 2`, consistent with it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::jets::{ChartPoint, Jet};

type EvalMany = Arc<dyn Fn(&ChartPoint, usize) -> Vec<Jet> + Send + Sync>;

/// Exact-bits key for per-point memoization.
pub(crate) type PointKey = (Vec<u64>, usize);

pub(crate) fn point_key(p: &ChartPoint, order: usize) -> PointKey {
    (p.coords().iter().map(|c| c.to_bits()).collect(), order)
}

/// Wraps a component evaluator with a point/order memo.  Lazy field graphs
/// re-evaluate their leaves many times at the same point (nested covariant
/// derivatives especially); caching the expensive leaves makes that cheap.
pub(crate) fn memoized(
    eval: impl Fn(&ChartPoint, usize) -> Vec<Jet> + Send + Sync + 'static,
) -> impl Fn(&ChartPoint, usize) -> Vec<Jet> + Send + Sync + 'static {
    let cache: Mutex<HashMap<PointKey, Arc<Vec<Jet>>>> = Mutex::new(HashMap::new());
    move |p, order| {
        let key = point_key(p, order);
        if let Some(hit) = cache.lock().unwrap().get(&key) {
            return hit.as_ref().clone();
        }
        let computed = eval(p, order);
        cache
            .lock()
            .unwrap()
            .insert(key, Arc::new(computed.clone()));
        computed
    }
}

/// Shared evaluator type of all scalar-valued lazy fields.
type ScalarEval = Arc<dyn Fn(&ChartPoint, usize) -> Jet + Send + Sync>;

// ---------------------------------------------------------------------------
// Scalar fields
// ---------------------------------------------------------------------------

/// A scalar function of the chart coordinates, evaluated as a jet.
#[derive(Clone)]
pub struct ScalarField {
    dim: usize,
    eval: ScalarEval,
}

impl ScalarField {
    pub fn from_fn(
        dim: usize,
        eval: impl Fn(&ChartPoint, usize) -> Jet + Send + Sync + 'static,
    ) -> Self {
        Self { dim, eval: Arc::new(eval) }
    }

    /// Builds the field from an expression in coordinate jets: `f` receives
    /// one coordinate jet per axis and combines them with jet arithmetic.
    pub fn from_expr(dim: usize, f: impl Fn(&[Jet]) -> Jet + Send + Sync + 'static) -> Self {
        Self::from_fn(dim, move |p, order| {
            let coords: Vec<Jet> = (0..p.dim()).map(|i| Jet::coordinate(p, i, order)).collect();
            f(&coords)
        })
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_fn(dim, move |p, order| Jet::constant(c, p.dim(), order))
    }

    /// The coordinate function `u^axis`.
    pub fn coordinate(dim: usize, axis: usize) -> Self {
        assert!(axis < dim);
        Self::from_fn(dim, move |p, order| Jet::coordinate(p, axis, order))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &ChartPoint, order: usize) -> Jet {
        debug_assert_eq!(p.dim(), self.dim, "point dimension does not match field dimension");
        (self.eval)(p, order)
    }

    pub fn value(&self, p: &ChartPoint) -> f64 {
        self.eval(p, 0).value()
    }

    pub fn add(&self, rhs: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| a.eval(p, order) + b.eval(p, order))
    }

    pub fn sub(&self, rhs: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| a.eval(p, order) - b.eval(p, order))
    }

    pub fn mul(&self, rhs: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| a.eval(p, order) * b.eval(p, order))
    }

    pub fn div(&self, rhs: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order).checked_div(&b.eval(p, order)).expect("scalar field division")
        })
    }

    pub fn sqrt(&self) -> ScalarField {
        let a = self.clone();
        Self::from_fn(self.dim, move |p, order| a.eval(p, order).sqrt())
    }

    pub fn neg(&self) -> ScalarField {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> ScalarField {
        let a = self.clone();
        Self::from_fn(self.dim, move |p, order| a.eval(p, order).scale(c))
    }

    /// The partial derivative along `axis`; consumes one jet order.
    pub fn partial(&self, axis: usize) -> ScalarField {
        let a = self.clone();
        Self::from_fn(self.dim, move |p, order| a.eval(p, order + 1).extract_partial(axis))
    }

    /// The derivative `X f = X^i d_i f`; consumes one jet order.
    pub fn directional_derivative(&self, x: &VectorField) -> ScalarField {
        let (f, x) = (self.clone(), x.clone());
        Self::from_fn(self.dim, move |p, order| {
            let fj = f.eval(p, order + 1);
            let xs = x.eval(p, order);
            let mut acc = Jet::constant(0.0, p.dim(), order);
            for (i, xi) in xs.iter().enumerate() {
                acc = acc + xi * fj.extract_partial(i);
            }
            acc
        })
    }

    /// The exterior derivative: the 1-form with components `d_i f`.
    pub fn d(&self) -> OneForm {
        let f = self.clone();
        OneForm::from_fn(self.dim, move |p, order| {
            let fj = f.eval(p, order + 1);
            (0..p.dim()).map(|i| fj.extract_partial(i)).collect()
        })
    }
}

// ---------------------------------------------------------------------------
// Vector fields
// ---------------------------------------------------------------------------

/// A vector field with components `X^i`, all evaluated by one closure call.
#[derive(Clone)]
pub struct VectorField {
    dim: usize,
    eval: EvalMany,
}

impl VectorField {
    pub fn from_fn(
        dim: usize,
        eval: impl Fn(&ChartPoint, usize) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self { dim, eval: Arc::new(eval) }
    }

    /// Returns an equivalent field that memoizes evaluations per point and
    /// order.  Worth applying to expensive leaves that derived fields
    /// evaluate repeatedly.
    pub fn cached(&self) -> Self {
        let inner = self.clone();
        Self::from_fn(self.dim, memoized(move |p, order| inner.eval(p, order)))
    }

    /// Builds the field from an expression in coordinate jets.
    pub fn from_expr(dim: usize, f: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        Self::from_fn(dim, move |p, order| {
            let coords: Vec<Jet> = (0..p.dim()).map(|i| Jet::coordinate(p, i, order)).collect();
            let out = f(&coords);
            assert_eq!(out.len(), p.dim(), "vector field expression returned wrong arity");
            out
        })
    }

    /// The coordinate vector field `e_axis` (constant components).
    pub fn coordinate_vector(dim: usize, axis: usize) -> Self {
        assert!(axis < dim);
        Self::from_fn(dim, move |p, order| {
            (0..p.dim())
                .map(|i| Jet::constant(if i == axis { 1.0 } else { 0.0 }, p.dim(), order))
                .collect()
        })
    }

    /// A field with the given constant components.
    pub fn constant(values: Vec<f64>) -> Self {
        let dim = values.len();
        Self::from_fn(dim, move |p, order| {
            values.iter().map(|&v| Jet::constant(v, p.dim(), order)).collect()
        })
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_fn(dim, move |p, order| vec![Jet::constant(0.0, p.dim(), order); p.dim()])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &ChartPoint, order: usize) -> Vec<Jet> {
        debug_assert_eq!(p.dim(), self.dim, "point dimension does not match field dimension");
        let out = (self.eval)(p, order);
        debug_assert_eq!(out.len(), self.dim);
        out
    }

    /// Component values at a point (order-0 evaluation).
    pub fn values(&self, p: &ChartPoint) -> Vec<f64> {
        self.eval(p, 0).iter().map(Jet::value).collect()
    }

    /// One component as a scalar field.  Convenience for tests and examples;
    /// evaluates the whole vector under the hood.
    pub fn component(&self, i: usize) -> ScalarField {
        let x = self.clone();
        ScalarField::from_fn(self.dim, move |p, order| x.eval(p, order).swap_remove(i))
    }

    pub fn add(&self, rhs: &VectorField) -> VectorField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x + y)
                .collect()
        })
    }

    pub fn sub(&self, rhs: &VectorField) -> VectorField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x - y)
                .collect()
        })
    }

    pub fn neg(&self) -> VectorField {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> VectorField {
        let a = self.clone();
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order).into_iter().map(|x| x.scale(c)).collect()
        })
    }

    /// Pointwise scaling by a scalar field.
    pub fn scale_by(&self, f: &ScalarField) -> VectorField {
        let (a, f) = (self.clone(), f.clone());
        Self::from_fn(self.dim, move |p, order| {
            let fj = f.eval(p, order);
            a.eval(p, order).into_iter().map(|x| x * &fj).collect()
        })
    }
}

/// The Lie bracket `[X, Y]^i = X^j d_j Y^i - Y^j d_j X^i`; consumes one jet
/// order of each argument.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    assert_eq!(x.dim(), y.dim());
    let (x, y) = (x.clone(), y.clone());
    VectorField::from_fn(x.dim(), move |p, order| {
        let m = p.dim();
        let xs = x.eval(p, order + 1);
        let ys = y.eval(p, order + 1);
        (0..m)
            .map(|i| {
                let mut acc = Jet::constant(0.0, m, order);
                for j in 0..m {
                    acc = acc + xs[j].truncated(order) * ys[i].extract_partial(j)
                        - ys[j].truncated(order) * xs[i].extract_partial(j);
                }
                acc
            })
            .collect()
    })
}

// ---------------------------------------------------------------------------
// Differential forms
// ---------------------------------------------------------------------------

/// A 1-form with components `w_i`.
#[derive(Clone)]
pub struct OneForm {
    dim: usize,
    eval: EvalMany,
}

impl OneForm {
    pub fn from_fn(
        dim: usize,
        eval: impl Fn(&ChartPoint, usize) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self { dim, eval: Arc::new(eval) }
    }

    /// Returns an equivalent form that memoizes evaluations per point and order.
    pub fn cached(&self) -> Self {
        let inner = self.clone();
        Self::from_fn(self.dim, memoized(move |p, order| inner.eval(p, order)))
    }

    pub fn from_expr(dim: usize, f: impl Fn(&[Jet]) -> Vec<Jet> + Send + Sync + 'static) -> Self {
        Self::from_fn(dim, move |p, order| {
            let coords: Vec<Jet> = (0..p.dim()).map(|i| Jet::coordinate(p, i, order)).collect();
            let out = f(&coords);
            assert_eq!(out.len(), p.dim(), "one-form expression returned wrong arity");
            out
        })
    }

    /// The constant coordinate 1-form `du^axis`.
    pub fn coordinate_form(dim: usize, axis: usize) -> Self {
        assert!(axis < dim);
        Self::from_fn(dim, move |p, order| {
            (0..p.dim())
                .map(|i| Jet::constant(if i == axis { 1.0 } else { 0.0 }, p.dim(), order))
                .collect()
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &ChartPoint, order: usize) -> Vec<Jet> {
        debug_assert_eq!(p.dim(), self.dim, "point dimension does not match field dimension");
        let out = (self.eval)(p, order);
        debug_assert_eq!(out.len(), self.dim);
        out
    }

    pub fn add(&self, rhs: &OneForm) -> OneForm {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x + y)
                .collect()
        })
    }

    pub fn sub(&self, rhs: &OneForm) -> OneForm {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x - y)
                .collect()
        })
    }

    pub fn neg(&self) -> OneForm {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> OneForm {
        let a = self.clone();
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order).into_iter().map(|x| x.scale(c)).collect()
        })
    }

    /// Pairing with a vector field: `w(X) = w_i X^i`.
    pub fn apply(&self, x: &VectorField) -> ScalarField {
        assert_eq!(self.dim, x.dim());
        let (w, x) = (self.clone(), x.clone());
        ScalarField::from_fn(self.dim, move |p, order| {
            let ws = w.eval(p, order);
            let xs = x.eval(p, order);
            let mut acc = Jet::constant(0.0, p.dim(), order);
            for (wi, xi) in ws.iter().zip(&xs) {
                acc = acc + wi * xi;
            }
            acc
        })
    }

    /// Exterior derivative, `dw(e_i, e_j) = (d_i w_j - d_j w_i) / 2`;
    /// consumes one jet order.
    pub fn d(&self) -> TwoForm {
        let w = self.clone();
        TwoForm::from_fn(self.dim, move |p, order| {
            let m = p.dim();
            let ws = w.eval(p, order + 1);
            let mut out = vec![Jet::constant(0.0, m, order); m * m];
            for i in 0..m {
                for j in (i + 1)..m {
                    let v = (ws[j].extract_partial(i) - ws[i].extract_partial(j)).scale(0.5);
                    out[j * m + i] = -&v;
                    out[i * m + j] = v;
                }
            }
            out
        })
    }
}

/// Wedge product of 1-forms: `(a ^ b)(X, Y) = (a(X) b(Y) - a(Y) b(X)) / 2`.
pub fn wedge(a: &OneForm, b: &OneForm) -> TwoForm {
    assert_eq!(a.dim(), b.dim());
    let (a, b) = (a.clone(), b.clone());
    TwoForm::from_fn(a.dim(), move |p, order| {
        let m = p.dim();
        let av = a.eval(p, order);
        let bv = b.eval(p, order);
        let mut out = vec![Jet::constant(0.0, m, order); m * m];
        for i in 0..m {
            for j in 0..m {
                out[i * m + j] = (&av[i] * &bv[j] - &av[j] * &bv[i]).scale(0.5);
            }
        }
        out
    })
}

/// A 2-form stored as the full antisymmetric component matrix
/// `w[i * m + j] = w(e_i, e_j)`.
#[derive(Clone)]
pub struct TwoForm {
    dim: usize,
    eval: EvalMany,
}

impl TwoForm {
    pub fn from_fn(
        dim: usize,
        eval: impl Fn(&ChartPoint, usize) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self { dim, eval: Arc::new(eval) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All components, row-major `[i * m + j]`.
    pub fn eval(&self, p: &ChartPoint, order: usize) -> Vec<Jet> {
        debug_assert_eq!(p.dim(), self.dim, "point dimension does not match field dimension");
        let out = (self.eval)(p, order);
        debug_assert_eq!(out.len(), self.dim * self.dim);
        out
    }

    pub fn add(&self, rhs: &TwoForm) -> TwoForm {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x + y)
                .collect()
        })
    }

    pub fn sub(&self, rhs: &TwoForm) -> TwoForm {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x - y)
                .collect()
        })
    }

    pub fn neg(&self) -> TwoForm {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> TwoForm {
        let a = self.clone();
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order).into_iter().map(|x| x.scale(c)).collect()
        })
    }

    /// Evaluation on vector fields: `w(X, Y) = w_ij X^i Y^j`.
    pub fn apply(&self, x: &VectorField, y: &VectorField) -> ScalarField {
        assert_eq!(self.dim, x.dim());
        assert_eq!(self.dim, y.dim());
        let (w, x, y) = (self.clone(), x.clone(), y.clone());
        ScalarField::from_fn(self.dim, move |p, order| {
            let m = p.dim();
            let ws = w.eval(p, order);
            let xs = x.eval(p, order);
            let ys = y.eval(p, order);
            let mut acc = Jet::constant(0.0, m, order);
            for i in 0..m {
                for j in 0..m {
                    acc = acc + &ws[i * m + j] * &(&xs[i] * &ys[j]);
                }
            }
            acc
        })
    }

    /// Exterior derivative,
    /// `dw(e_i, e_j, e_k) = (d_i w_jk + d_j w_ki + d_k w_ij) / 3`;
    /// consumes one jet order.
    pub fn d(&self) -> ThreeForm {
        let w = self.clone();
        ThreeForm::from_fn(self.dim, move |p, order| {
            let m = p.dim();
            let ws = w.eval(p, order + 1);
            let mut out = vec![Jet::constant(0.0, m, order); m * m * m];
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let v = (ws[j * m + k].extract_partial(i)
                            + ws[k * m + i].extract_partial(j)
                            + ws[i * m + j].extract_partial(k))
                        .scale(1.0 / 3.0);
                        out[(i * m + j) * m + k] = v;
                    }
                }
            }
            out
        })
    }
}

/// A 3-form stored as the full component cube `w[(i * m + j) * m + k]`.
///
/// Top-degree for the exterior calculus needed here: there is deliberately no
/// `d` on this type.
#[derive(Clone)]
pub struct ThreeForm {
    dim: usize,
    eval: EvalMany,
}

impl ThreeForm {
    pub fn from_fn(
        dim: usize,
        eval: impl Fn(&ChartPoint, usize) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self { dim, eval: Arc::new(eval) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &ChartPoint, order: usize) -> Vec<Jet> {
        debug_assert_eq!(p.dim(), self.dim, "point dimension does not match field dimension");
        let out = (self.eval)(p, order);
        debug_assert_eq!(out.len(), self.dim * self.dim * self.dim);
        out
    }

    pub fn apply(&self, x: &VectorField, y: &VectorField, z: &VectorField) -> ScalarField {
        let (w, x, y, z) = (self.clone(), x.clone(), y.clone(), z.clone());
        ScalarField::from_fn(self.dim, move |p, order| {
            let m = p.dim();
            let ws = w.eval(p, order);
            let xs = x.eval(p, order);
            let ys = y.eval(p, order);
            let zs = z.eval(p, order);
            let mut acc = Jet::constant(0.0, m, order);
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        acc = acc
                            + &ws[(i * m + j) * m + k] * &(&(&xs[i] * &ys[j]) * &zs[k]);
                    }
                }
            }
            acc
        })
    }
}

// ---------------------------------------------------------------------------
// Endomorphism and metric fields
// ---------------------------------------------------------------------------

/// A (1,1)-tensor field, stored row-major as `A[i * m + j] = A^i_j` and
/// acting on column vectors: `(A X)^i = A^i_j X^j`.
#[derive(Clone)]
pub struct EndomorphismField {
    dim: usize,
    eval: EvalMany,
}

impl EndomorphismField {
    pub fn from_fn(
        dim: usize,
        eval: impl Fn(&ChartPoint, usize) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self { dim, eval: Arc::new(eval) }
    }

    /// Returns an equivalent field that memoizes evaluations per point and order.
    pub fn cached(&self) -> Self {
        let inner = self.clone();
        Self::from_fn(self.dim, memoized(move |p, order| inner.eval(p, order)))
    }

    /// A constant endomorphism from a row-major matrix.
    pub fn from_constant_matrix(dim: usize, entries: Vec<f64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "endomorphism matrix has the wrong shape");
        Self::from_fn(dim, move |p, order| {
            entries.iter().map(|&e| Jet::constant(e, p.dim(), order)).collect()
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self::from_constant_matrix(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &ChartPoint, order: usize) -> Vec<Jet> {
        debug_assert_eq!(p.dim(), self.dim, "point dimension does not match field dimension");
        let out = (self.eval)(p, order);
        debug_assert_eq!(out.len(), self.dim * self.dim);
        out
    }

    /// Matrix of values at a point, row-major.
    pub fn matrix_values(&self, p: &ChartPoint) -> Vec<f64> {
        self.eval(p, 0).iter().map(Jet::value).collect()
    }

    pub fn apply(&self, x: &VectorField) -> VectorField {
        assert_eq!(self.dim, x.dim());
        let (a, x) = (self.clone(), x.clone());
        VectorField::from_fn(self.dim, move |p, order| {
            let m = p.dim();
            let av = a.eval(p, order);
            let xv = x.eval(p, order);
            (0..m)
                .map(|i| {
                    let mut acc = Jet::constant(0.0, m, order);
                    for j in 0..m {
                        acc = acc + &av[i * m + j] * &xv[j];
                    }
                    acc
                })
                .collect()
        })
    }

    /// Composition `(self . rhs)^i_j = self^i_k rhs^k_j`.
    pub fn compose(&self, rhs: &EndomorphismField) -> EndomorphismField {
        assert_eq!(self.dim, rhs.dim());
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            let m = p.dim();
            let av = a.eval(p, order);
            let bv = b.eval(p, order);
            let mut out = vec![Jet::constant(0.0, m, order); m * m];
            for i in 0..m {
                for j in 0..m {
                    let mut acc = Jet::constant(0.0, m, order);
                    for k in 0..m {
                        acc = acc + &av[i * m + k] * &bv[k * m + j];
                    }
                    out[i * m + j] = acc;
                }
            }
            out
        })
    }

    pub fn add(&self, rhs: &EndomorphismField) -> EndomorphismField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x + y)
                .collect()
        })
    }

    pub fn sub(&self, rhs: &EndomorphismField) -> EndomorphismField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x - y)
                .collect()
        })
    }

    pub fn neg(&self) -> EndomorphismField {
        self.scale(-1.0)
    }

    pub fn scale(&self, c: f64) -> EndomorphismField {
        let a = self.clone();
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order).into_iter().map(|x| x.scale(c)).collect()
        })
    }
}

/// A symmetric (0,2)-tensor field, stored row-major as `g[i * m + j] = g_ij`.
///
/// Positive definiteness is only required by the operations that invert or
/// factor the matrix ([`MetricField::sharp`] and consumers in the connection
/// layer); the type is also used for general symmetric 2-tensors such as Lie
/// derivatives of a metric.
#[derive(Clone)]
pub struct MetricField {
    dim: usize,
    eval: EvalMany,
}

impl MetricField {
    pub fn from_fn(
        dim: usize,
        eval: impl Fn(&ChartPoint, usize) -> Vec<Jet> + Send + Sync + 'static,
    ) -> Self {
        Self { dim, eval: Arc::new(eval) }
    }

    /// Returns an equivalent field that memoizes evaluations per point and order.
    pub fn cached(&self) -> Self {
        let inner = self.clone();
        Self::from_fn(self.dim, memoized(move |p, order| inner.eval(p, order)))
    }

    /// The flat metric `delta_ij`.
    pub fn euclidean(dim: usize) -> Self {
        Self::from_fn(dim, move |p, order| {
            let m = p.dim();
            let mut out = vec![Jet::constant(0.0, m, order); m * m];
            for i in 0..m {
                out[i * m + i] = Jet::constant(1.0, m, order);
            }
            out
        })
    }

    /// A conformally flat metric `f * delta_ij`.
    pub fn conformally_flat(factor: &ScalarField) -> Self {
        let f = factor.clone();
        Self::from_fn(f.dim(), move |p, order| {
            let m = p.dim();
            let fj = f.eval(p, order);
            let mut out = vec![Jet::constant(0.0, m, order); m * m];
            for i in 0..m {
                out[i * m + i] = fj.clone();
            }
            out
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, p: &ChartPoint, order: usize) -> Vec<Jet> {
        debug_assert_eq!(p.dim(), self.dim, "point dimension does not match field dimension");
        let out = (self.eval)(p, order);
        debug_assert_eq!(out.len(), self.dim * self.dim);
        out
    }

    /// Matrix of values at a point, row-major.
    pub fn matrix_values(&self, p: &ChartPoint) -> Vec<f64> {
        self.eval(p, 0).iter().map(Jet::value).collect()
    }

    pub fn apply(&self, x: &VectorField, y: &VectorField) -> ScalarField {
        assert_eq!(self.dim, x.dim());
        assert_eq!(self.dim, y.dim());
        let (g, x, y) = (self.clone(), x.clone(), y.clone());
        ScalarField::from_fn(self.dim, move |p, order| {
            let m = p.dim();
            let gs = g.eval(p, order);
            let xs = x.eval(p, order);
            let ys = y.eval(p, order);
            let mut acc = Jet::constant(0.0, m, order);
            for i in 0..m {
                for j in 0..m {
                    acc = acc + &gs[i * m + j] * &(&xs[i] * &ys[j]);
                }
            }
            acc
        })
    }

    pub fn add(&self, rhs: &MetricField) -> MetricField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x + y)
                .collect()
        })
    }

    pub fn sub(&self, rhs: &MetricField) -> MetricField {
        let (a, b) = (self.clone(), rhs.clone());
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order)
                .into_iter()
                .zip(b.eval(p, order))
                .map(|(x, y)| x - y)
                .collect()
        })
    }

    pub fn scale(&self, c: f64) -> MetricField {
        let a = self.clone();
        Self::from_fn(self.dim, move |p, order| {
            a.eval(p, order).into_iter().map(|x| x.scale(c)).collect()
        })
    }

    /// Index lowering: `(X^flat)_i = g_ij X^j`.
    pub fn flat(&self, x: &VectorField) -> OneForm {
        assert_eq!(self.dim, x.dim());
        let (g, x) = (self.clone(), x.clone());
        OneForm::from_fn(self.dim, move |p, order| {
            let m = p.dim();
            let gs = g.eval(p, order);
            let xs = x.eval(p, order);
            (0..m)
                .map(|i| {
                    let mut acc = Jet::constant(0.0, m, order);
                    for j in 0..m {
                        acc = acc + &gs[i * m + j] * &xs[j];
                    }
                    acc
                })
                .collect()
        })
    }

    /// Index raising: `(w^sharp)^i = g^ij w_j`.  Inverts the metric jets at
    /// each evaluation point; panics if the matrix is numerically singular.
    pub fn sharp(&self, w: &OneForm) -> VectorField {
        assert_eq!(self.dim, w.dim());
        let (g, w) = (self.clone(), w.clone());
        VectorField::from_fn(self.dim, move |p, order| {
            let m = p.dim();
            let ginv = jet_matrix_inverse(&g.eval(p, order), m);
            let ws = w.eval(p, order);
            (0..m)
                .map(|i| {
                    let mut acc = Jet::constant(0.0, m, order);
                    for j in 0..m {
                        acc = acc + &ginv[i * m + j] * &ws[j];
                    }
                    acc
                })
                .collect()
        })
    }
}

/// Lie derivative of an endomorphism field along a vector field:
/// `(L_X A)^l_j = X^k d_k A^l_j - A^k_j d_k X^l + A^l_k d_j X^k`.
/// Consumes one jet order.
pub fn lie_derivative_endomorphism(x: &VectorField, a: &EndomorphismField) -> EndomorphismField {
    assert_eq!(x.dim(), a.dim());
    let (x, a) = (x.clone(), a.clone());
    EndomorphismField::from_fn(x.dim(), move |p, order| {
        let m = p.dim();
        let xs = x.eval(p, order + 1);
        let av = a.eval(p, order + 1);
        let mut out = vec![Jet::constant(0.0, m, order); m * m];
        for l in 0..m {
            for j in 0..m {
                let mut acc = Jet::constant(0.0, m, order);
                for k in 0..m {
                    acc = acc + xs[k].truncated(order) * av[l * m + j].extract_partial(k)
                        - av[k * m + j].truncated(order) * xs[l].extract_partial(k)
                        + av[l * m + k].truncated(order) * xs[k].extract_partial(j);
                }
                out[l * m + j] = acc;
            }
        }
        out
    })
}

/// Lie derivative of a symmetric 2-tensor along a vector field:
/// `(L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k`.
/// Consumes one jet order.
pub fn lie_derivative_metric(x: &VectorField, g: &MetricField) -> MetricField {
    assert_eq!(x.dim(), g.dim());
    let (x, g) = (x.clone(), g.clone());
    MetricField::from_fn(x.dim(), move |p, order| {
        let m = p.dim();
        let xs = x.eval(p, order + 1);
        let gs = g.eval(p, order + 1);
        let mut out = vec![Jet::constant(0.0, m, order); m * m];
        for i in 0..m {
            for j in 0..m {
                let mut acc = Jet::constant(0.0, m, order);
                for k in 0..m {
                    acc = acc + xs[k].truncated(order) * gs[i * m + j].extract_partial(k)
                        + gs[k * m + j].truncated(order) * xs[k].extract_partial(i)
                        + gs[i * m + k].truncated(order) * xs[k].extract_partial(j);
                }
                out[i * m + j] = acc;
            }
        }
        out
    })
}

/// Inverts an `m x m` matrix of jets by Gauss-Jordan elimination with partial
/// pivoting on the value parts.  Panics if a pivot value is numerically zero.
pub(crate) fn jet_matrix_inverse(a: &[Jet], m: usize) -> Vec<Jet> {
    assert_eq!(a.len(), m * m, "jet matrix has the wrong shape");
    let dim = a[0].dim();
    let order = a[0].order();
    let mut work: Vec<Jet> = a.to_vec();
    let mut inv: Vec<Jet> = (0..m * m)
        .map(|idx| Jet::constant(if idx / m == idx % m { 1.0 } else { 0.0 }, dim, order))
        .collect();
    for col in 0..m {
        // Pivot: the remaining row with the largest value part in this column.
        let pivot_row = (col..m)
            .max_by(|&r, &s| {
                work[r * m + col]
                    .value()
                    .abs()
                    .total_cmp(&work[s * m + col].value().abs())
            })
            .unwrap();
        if work[pivot_row * m + col].value().abs() < 1e-12 {
            panic!("jet matrix is numerically singular (pivot column {col})");
        }
        if pivot_row != col {
            for j in 0..m {
                work.swap(col * m + j, pivot_row * m + j);
                inv.swap(col * m + j, pivot_row * m + j);
            }
        }
        let pivot_inv = work[col * m + col].recip();
        for j in 0..m {
            work[col * m + j] = &work[col * m + j] * &pivot_inv;
            inv[col * m + j] = &inv[col * m + j] * &pivot_inv;
        }
        for r in 0..m {
            if r == col {
                continue;
            }
            let factor = work[r * m + col].clone();
            if factor.max_abs_coeff() == 0.0 {
                continue;
            }
            for j in 0..m {
                work[r * m + j] = &work[r * m + j] - &(&factor * &work[col * m + j]);
                inv[r * m + j] = &inv[r * m + j] - &(&factor * &inv[col * m + j]);
            }
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2(x: f64, y: f64) -> ChartPoint {
        ChartPoint::new(vec![x, y])
    }

    #[test]
    fn bracket_of_rotationlike_fields_frozen_values() {
        // X = x e_y, Y = y e_x: [X, Y] = x e_x - y e_y.
        let x_field = VectorField::from_expr(2, |c| vec![Jet::constant(0.0, 2, c[0].order()), c[0].clone()]);
        let y_field = VectorField::from_expr(2, |c| vec![c[1].clone(), Jet::constant(0.0, 2, c[0].order())]);
        let bracket = lie_bracket(&x_field, &y_field);
        let p = p2(1.7, -0.6);
        let vals = bracket.values(&p);
        assert!((vals[0] - 1.7).abs() < 1e-14);
        assert!((vals[1] - 0.6).abs() < 1e-14);
    }

    #[test]
    fn bracket_satisfies_jacobi_identity() {
        let x = VectorField::from_expr(3, |c| {
            vec![&c[1] * &c[2], c[0].clone(), &c[0] * &c[1]]
        });
        let y = VectorField::from_expr(3, |c| {
            vec![c[2].clone(), &c[0] * &c[0], c[1].clone()]
        });
        let z = VectorField::from_expr(3, |c| {
            vec![c[1].clone(), &c[2] * &c[0], c[0].clone()]
        });
        let cyc = lie_bracket(&x, &lie_bracket(&y, &z))
            .add(&lie_bracket(&y, &lie_bracket(&z, &x)))
            .add(&lie_bracket(&z, &lie_bracket(&x, &y)));
        let p = ChartPoint::new(vec![0.4, -0.8, 1.1]);
        for v in cyc.values(&p) {
            assert!(v.abs() < 1e-9, "Jacobi residual {v}");
        }
    }

    #[test]
    fn exterior_derivative_of_x_dy_frozen_value() {
        // w = x dy: dw(e_x, e_y) = 1/2 under the half-convention.
        let w = OneForm::from_expr(2, |c| vec![Jet::constant(0.0, 2, c[0].order()), c[0].clone()]);
        let dw = w.d();
        let ex = VectorField::coordinate_vector(2, 0);
        let ey = VectorField::coordinate_vector(2, 1);
        let v = dw.apply(&ex, &ey).value(&p2(0.3, 0.9));
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn exterior_derivative_matches_invariant_formula() {
        // dw(X, Y) = (X w(Y) - Y w(X) - w([X, Y])) / 2 for non-constant X, Y.
        let w = OneForm::from_expr(3, |c| {
            vec![&c[1] * &c[2], &c[0] * &c[0], c[1].clone()]
        });
        let x = VectorField::from_expr(3, |c| vec![c[1].clone(), c[2].clone(), c[0].clone()]);
        let y = VectorField::from_expr(3, |c| {
            vec![&c[0] * &c[1], c[2].clone(), Jet::constant(1.0, 3, c[0].order())]
        });
        let lhs = w.d().apply(&x, &y);
        let rhs = w
            .apply(&y)
            .directional_derivative(&x)
            .sub(&w.apply(&x).directional_derivative(&y))
            .sub(&w.apply(&lie_bracket(&x, &y)))
            .scale(0.5);
        let p = ChartPoint::new(vec![0.7, -0.3, 0.5]);
        assert!((lhs.value(&p) - rhs.value(&p)).abs() < 1e-12);
    }

    #[test]
    fn second_exterior_derivative_vanishes_exactly() {
        let w = OneForm::from_expr(3, |c| {
            vec![&(&c[0] * &c[1]) * &c[2], &c[1] * &c[1], &c[0] * &c[2]]
        });
        let ddw = w.d().d();
        let p = ChartPoint::new(vec![0.9, 0.4, -1.3]);
        for jet in ddw.eval(&p, 0) {
            assert_eq!(jet.value(), 0.0, "d^2 must vanish identically");
        }
    }

    #[test]
    fn wedge_pairs_with_vectors_consistently() {
        // (dx ^ dy)(e_x, e_y) = 1/2 under the half-convention.
        let dx = OneForm::coordinate_form(2, 0);
        let dy = OneForm::coordinate_form(2, 1);
        let w = wedge(&dx, &dy);
        let ex = VectorField::coordinate_vector(2, 0);
        let ey = VectorField::coordinate_vector(2, 1);
        let p = p2(0.0, 0.0);
        assert!((w.apply(&ex, &ey).value(&p) - 0.5).abs() < 1e-15);
        assert!((w.apply(&ey, &ex).value(&p) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn lie_derivative_of_metric_frozen_value() {
        // L_{x e_x} delta has (e_x, e_x) component 2.
        let x = VectorField::from_expr(2, |c| vec![c[0].clone(), Jet::constant(0.0, 2, c[0].order())]);
        let g = MetricField::euclidean(2);
        let lg = lie_derivative_metric(&x, &g);
        let ex = VectorField::coordinate_vector(2, 0);
        let ey = VectorField::coordinate_vector(2, 1);
        let p = p2(0.8, -0.1);
        assert!((lg.apply(&ex, &ex).value(&p) - 2.0).abs() < 1e-14);
        assert!(lg.apply(&ex, &ey).value(&p).abs() < 1e-14);
        assert!(lg.apply(&ey, &ey).value(&p).abs() < 1e-14);
    }

    #[test]
    fn lie_derivative_of_metric_matches_bracket_route() {
        // (L_Z g)(X, Y) = Z g(X, Y) - g([Z, X], Y) - g(X, [Z, Y]).
        let z = VectorField::from_expr(3, |c| vec![&c[1] * &c[1], c[2].clone(), &c[0] * &c[1]]);
        let lam = ScalarField::from_expr(3, |c| {
            let one = Jet::constant(1.0, 3, c[0].order());
            &one + &(&c[0] * &c[0])
        });
        let g = MetricField::conformally_flat(&lam);
        let x = VectorField::from_expr(3, |c| vec![c[2].clone(), c[0].clone(), c[1].clone()]);
        let y = VectorField::from_expr(3, |c| {
            vec![c[1].clone(), Jet::constant(2.0, 3, c[0].order()), c[0].clone()]
        });
        let lhs = lie_derivative_metric(&z, &g).apply(&x, &y);
        let rhs = g
            .apply(&x, &y)
            .directional_derivative(&z)
            .sub(&g.apply(&lie_bracket(&z, &x), &y))
            .sub(&g.apply(&x, &lie_bracket(&z, &y)));
        let p = ChartPoint::new(vec![0.5, -0.4, 0.7]);
        assert!((lhs.value(&p) - rhs.value(&p)).abs() < 1e-12);
    }

    #[test]
    fn lie_derivative_of_endomorphism_matches_bracket_route() {
        // (L_Z A)(X) = [Z, A X] - A [Z, X].
        let z = VectorField::from_expr(2, |c| vec![&c[0] * &c[1], c[0].clone()]);
        let a = EndomorphismField::from_fn(2, |p, order| {
            let x = Jet::coordinate(p, 0, order);
            let y = Jet::coordinate(p, 1, order);
            vec![
                &x * &y,
                Jet::constant(1.0, 2, order),
                y.clone(),
                &x + &y,
            ]
        });
        let x = VectorField::from_expr(2, |c| vec![c[1].clone(), &c[0] * &c[0]]);
        let lhs = lie_derivative_endomorphism(&z, &a).apply(&x);
        let rhs = lie_bracket(&z, &a.apply(&x)).sub(&a.apply(&lie_bracket(&z, &x)));
        let p = p2(0.6, -0.9);
        let (lv, rv) = (lhs.values(&p), rhs.values(&p));
        for (l, r) in lv.iter().zip(&rv) {
            assert!((l - r).abs() < 1e-12, "{l} vs {r}");
        }
    }

    #[test]
    fn musical_maps_are_mutually_inverse() {
        let lam = ScalarField::from_expr(3, |c| {
            let one = Jet::constant(1.0, 3, c[0].order());
            &(&one + &(&c[1] * &c[1])) + &(&c[2] * &c[2])
        });
        let g = MetricField::conformally_flat(&lam);
        let x = VectorField::from_expr(3, |c| vec![c[1].clone(), &c[0] * &c[2], c[0].clone()]);
        let roundtrip = g.sharp(&g.flat(&x));
        let p = ChartPoint::new(vec![0.4, 0.8, -0.2]);
        // Compare full jets, not just values: the inverse-metric jets must be
        // correct to derivative order as well.
        let a = roundtrip.eval(&p, 2);
        let b = x.eval(&p, 2);
        for (ja, jb) in a.iter().zip(&b) {
            assert!((ja - jb).max_abs_coeff() < 1e-12);
        }
    }

    #[test]
    fn jet_matrix_inverse_handles_zero_diagonal() {
        // Requires pivoting: the (0,0) entry vanishes.
        let p = p2(0.0, 0.0);
        let mk = |v: f64| Jet::constant(v, 2, 1);
        let _ = &p;
        let a = vec![mk(0.0), mk(2.0), mk(1.0), mk(1.0)];
        let inv = jet_matrix_inverse(&a, 2);
        // Inverse of [[0, 2], [1, 1]] is [[-1/2, 1], [1/2, 0]].
        assert!((inv[0].value() + 0.5).abs() < 1e-14);
        assert!((inv[1].value() - 1.0).abs() < 1e-14);
        assert!((inv[2].value() - 0.5).abs() < 1e-14);
        assert!(inv[3].value().abs() < 1e-14);
    }

    #[test]
    #[should_panic(expected = "numerically singular")]
    fn singular_jet_matrix_is_rejected() {
        let mk = |v: f64| Jet::constant(v, 2, 0);
        let a = vec![mk(1.0), mk(2.0), mk(2.0), mk(4.0)];
        let _ = jet_matrix_inverse(&a, 2);
    }

    #[test]
    fn directional_derivative_satisfies_product_rule() {
        let f = ScalarField::from_expr(2, |c| &c[0] * &c[1]);
        let g = ScalarField::from_expr(2, |c| &c[0] + &(&c[1] * &c[1]));
        let x = VectorField::from_expr(2, |c| vec![c[1].clone(), &c[0] * &c[0]]);
        let lhs = f.mul(&g).directional_derivative(&x);
        let rhs = f
            .directional_derivative(&x)
            .mul(&g)
            .add(&f.mul(&g.directional_derivative(&x)));
        let p = p2(1.3, -0.7);
        assert!((lhs.value(&p) - rhs.value(&p)).abs() < 1e-12);
    }

    #[test]
    fn scalar_d_pairs_like_directional_derivative() {
        let f = ScalarField::from_expr(2, |c| &(&c[0] * &c[0]) * &c[1]);
        let x = VectorField::from_expr(2, |c| vec![&c[0] * &c[1], c[0].clone()]);
        let p = p2(0.9, 1.4);
        let via_form = f.d().apply(&x).value(&p);
        let via_derivative = f.directional_derivative(&x).value(&p);
        assert!((via_form - via_derivative).abs() < 1e-13);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn exterior_derivative_is_antisymmetric(
                px in -1.5_f64..1.5, py in -1.5_f64..1.5, pz in -1.5_f64..1.5
            ) {
                let w = OneForm::from_expr(3, |c| {
                    vec![&c[0] * &c[1], &c[2] * &c[2], &c[0] * &c[2]]
                });
                let dw = w.d();
                let p = ChartPoint::new(vec![px, py, pz]);
                let comps = dw.eval(&p, 0);
                for i in 0..3 {
                    for j in 0..3 {
                        let sum = comps[i * 3 + j].value() + comps[j * 3 + i].value();
                        prop_assert!(sum.abs() < 1e-13);
                    }
                }
            }

            #[test]
            fn wedge_is_antisymmetric_in_its_factors(
                px in -1.5_f64..1.5, py in -1.5_f64..1.5
            ) {
                let a = OneForm::from_expr(2, |c| vec![c[1].clone(), &c[0] * &c[0]]);
                let b = OneForm::from_expr(2, |c| vec![&c[0] * &c[1], c[0].clone()]);
                let p = ChartPoint::new(vec![px, py]);
                let ab = wedge(&a, &b).eval(&p, 0);
                let ba = wedge(&b, &a).eval(&p, 0);
                for (x, y) in ab.iter().zip(&ba) {
                    prop_assert!((x.value() + y.value()).abs() < 1e-13);
                }
            }
        }
    }
}
