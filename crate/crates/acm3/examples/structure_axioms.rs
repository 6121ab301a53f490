//! Evaluates the defining axioms of an almost contact metric 3-structure on
//! both bundled models and prints the worst residual per axiom.
//!
//! Run with: `cargo run --example structure_axioms`

use acm3::models::Model;

fn main() {
    for model in [Model::flat(1), Model::sphere(1)] {
        let s = model.structure();
        let points = model.sample_points(8, 42);
        println!(
            "== {} (dimension {}, {} sample points) ==",
            model.kind().label(),
            model.dim(),
            points.len()
        );

        // Axioms of each single structure (phi_a, xi_a, eta_a, g).
        let singles: Vec<_> = (0..3).map(|a| s.single(a)).collect();
        let mut rows: Vec<(&str, f64)> = vec![
            ("phi^2 = -I + xi (x) eta", 0.0),
            ("eta(xi) = 1", 0.0),
            ("phi xi = 0", 0.0),
            ("eta . phi = 0", 0.0),
            ("g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)", 0.0),
            ("normality (vanishing torsion of the cone structure)", 0.0),
        ];
        for p in &points {
            for single in &singles {
                rows[0].1 = rows[0].1.max(single.residual_phi_square(p));
                rows[1].1 = rows[1].1.max(single.residual_eta_xi(p));
                rows[2].1 = rows[2].1.max(single.residual_phi_xi(p));
                rows[3].1 = rows[3].1.max(single.residual_eta_phi(p));
                rows[4].1 = rows[4].1.max(single.residual_compatibility(p));
                rows[5].1 = rows[5].1.max(single.normality_residual(p));
            }
        }
        for (label, worst) in &rows {
            println!("  {worst:10.3e}  {label}");
        }

        // Quaternionic compatibility of the triple.
        let mut triple = [
            ("phi_c = phi_a phi_b - xi_a (x) eta_b (cyclic)", 0.0_f64),
            ("xi_c = phi_a xi_b (cyclic)", 0.0),
            ("eta_c = eta_a . phi_b (cyclic)", 0.0),
            ("g(xi_a, xi_b) = delta_ab", 0.0),
        ];
        for p in &points {
            triple[0].1 = triple[0].1.max(s.triple_phi_residual(p));
            triple[1].1 = triple[1].1.max(s.triple_xi_residual(p));
            triple[2].1 = triple[2].1.max(s.triple_eta_residual(p));
            triple[3].1 = triple[3].1.max(s.reeb_orthonormality_residual(p));
        }
        for (label, worst) in &triple {
            println!("  {worst:10.3e}  {label}");
        }

        let class = s.classify(&points, 1e-7);
        println!("  classified as: {class:?}\n");
    }
}
