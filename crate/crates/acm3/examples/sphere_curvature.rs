//! Computes curvature invariants of the round sphere S^{4n+3} in a
//! stereographic chart: scalar curvature, the Einstein constant, and
//! sectional curvatures of coordinate-independent planes.
//!
//! Run with: `cargo run --example sphere_curvature`

use acm3::models::Model;
use acm3::riemann::LeviCivita;
use acm3::sampling::SplitMix64;

fn main() {
    let model = Model::sphere(1);
    let dim = model.dim();
    let lc = LeviCivita::new(model.structure().metric.clone());
    let points = model.sample_points(3, 2024);

    println!("round S^7, stereographic chart (n = 1, dimension {dim})");
    println!("expected: scal = 2(2n+1)(4n+3) = 42, Ric = 6 g, K = 1 everywhere\n");

    for (k, p) in points.iter().enumerate() {
        let scal = lc.scalar_curvature(p);

        // Einstein deviation: worst entry of Ric - 6 g.
        let ric = lc.ricci_values(p);
        let g = model.structure().metric.matrix_values(p);
        let einstein_dev = ric
            .iter()
            .zip(&g)
            .map(|(r, gv)| (r - 6.0 * gv).abs())
            .fold(0.0_f64, f64::max);

        // Sectional curvature of the three vertical planes and one random one.
        let xi: Vec<Vec<f64>> = (0..3).map(|a| model.structure().xi[a].values(p)).collect();
        let k12 = lc.sectional_curvature(p, &xi[0], &xi[1]);
        let mut rng = SplitMix64::new(7 + k as u64);
        let u: Vec<f64> = (0..dim).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let v: Vec<f64> = (0..dim).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let k_rand = lc.sectional_curvature(p, &u, &v);

        println!("point {k}:");
        println!("  scal            = {scal:.12}   (|scal - 42| = {:.3e})", (scal - 42.0).abs());
        println!("  max |Ric - 6 g| = {einstein_dev:.3e}");
        println!("  K(xi_1, xi_2)   = {k12:.12}");
        println!("  K(random plane) = {k_rand:.12}");
    }

    println!("\nn = 2 (dimension 11): expected scal = 110");
    let model2 = Model::sphere(2);
    let lc2 = LeviCivita::new(model2.structure().metric.clone());
    let p2 = &model2.sample_points(1, 5)[0];
    let scal2 = lc2.scalar_curvature(p2);
    println!("  scal            = {scal2:.9}   (|scal - 110| = {:.3e})", (scal2 - 110.0).abs());
}
