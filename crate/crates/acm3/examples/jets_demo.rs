//! Shows the exact-differentiation engine on its own: truncated jets carry
//! a value plus all partial derivatives up to order 3, propagate through
//! arithmetic exactly, and agree with finite differences.
//!
//! Run with: `cargo run --example jets_demo`

use acm3::fields::ScalarField;
use acm3::jets::ChartPoint;

fn main() {
    // f(x, y) = x^2 y + sqrt(1 + x^2 + y^2), built from coordinate fields.
    let dim = 2;
    let f = ScalarField::from_expr(dim, |v| {
        let (x, y) = (&v[0], &v[1]);
        let one = acm3::Jet::constant(1.0, x.dim(), x.order());
        let radic = &(&one + &(x * x)) + &(y * y);
        &(&(x * x) * y) + &radic.checked_sqrt().expect("1 + x^2 + y^2 > 0")
    });

    let p = ChartPoint::new(vec![0.7, -0.4]);
    let jet = f.eval(&p, 3);

    println!("f(x,y) = x^2 y + sqrt(1 + x^2 + y^2) at (0.7, -0.4)\n");
    println!("value      = {:+.12}", jet.value());
    println!("df/dx      = {:+.12}", jet.d1(0));
    println!("df/dy      = {:+.12}", jet.d1(1));
    println!("d2f/dx2    = {:+.12}", jet.d2(0, 0));
    println!("d2f/dxdy   = {:+.12}", jet.d2(0, 1));
    println!("d3f/dx2dy  = {:+.12}", jet.d3(0, 0, 1));

    // Compare first and second derivatives with central differences.
    println!("\nagainst central finite differences:");
    let h = 1e-5;
    let fd_x = (f.value(&p.shifted(0, h)) - f.value(&p.shifted(0, -h))) / (2.0 * h);
    println!("  df/dx    fd = {fd_x:+.12}   |jet - fd| = {:.3e}", (jet.d1(0) - fd_x).abs());
    let h2 = 1e-4;
    let fd_xy = (f.value(&p.shifted(0, h2).shifted(1, h2))
        - f.value(&p.shifted(0, h2).shifted(1, -h2))
        - f.value(&p.shifted(0, -h2).shifted(1, h2))
        + f.value(&p.shifted(0, -h2).shifted(1, -h2)))
        / (4.0 * h2 * h2);
    println!("  d2f/dxdy fd = {fd_xy:+.12}   |jet - fd| = {:.3e}", (jet.d2(0, 1) - fd_xy).abs());

    // Exactness on polynomials: the third derivative of x^2 y is constant 2
    // in the x,x,y slot and zero in x,x,x.
    let g = ScalarField::from_expr(dim, |v| &(&v[0] * &v[0]) * &v[1]);
    let gj = g.eval(&p, 3);
    println!("\npolynomial exactness for g = x^2 y:");
    println!("  d3g/dx2dy = {:+.1} (exact 2)", gj.d3(0, 0, 1));
    println!("  d3g/dx3   = {:+.1} (exact 0)", gj.d3(0, 0, 0));

    // Derivatives of fields assembled by two different routes agree: the
    // gradient of a product vs the Leibniz expansion.
    let fg = f.mul(&g);
    let leibniz = f.partial(0).mul(&g).add(&f.mul(&g.partial(0)));
    let direct = fg.partial(0);
    let gap = (direct.value(&p) - leibniz.value(&p)).abs();
    println!("\nLeibniz cross-check: |d(fg)/dx - (df/dx g + f dg/dx)| = {gap:.3e}");
}
