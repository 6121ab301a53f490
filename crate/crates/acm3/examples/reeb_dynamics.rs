//! Dynamics of the three Reeb fields: their brackets close into an su(2)
//! algebra on the sphere (and vanish on flat space), their flows preserve
//! the metric, and they rotate the three endomorphisms into each other.
//!
//! Run with: `cargo run --example reeb_dynamics`

use acm3::fields::{lie_bracket, lie_derivative_endomorphism, lie_derivative_metric};
use acm3::models::Model;

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

fn main() {
    for model in [Model::flat(1), Model::sphere(1)] {
        let s = model.structure();
        let points = model.sample_points(4, 3);
        println!("== {} ==", model.kind().label());

        // Bracket algebra: [xi_1, xi_2] = 2 xi_3 and cyclic on the sphere,
        // all brackets zero on flat space.
        let factor = if model.kind().is_curved() { 2.0 } else { 0.0 };
        let mut dev = 0.0_f64;
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let residual = lie_bracket(&s.xi[a], &s.xi[b]).sub(&s.xi[c].scale(factor));
            for p in &points {
                dev = dev.max(max_abs(&residual.values(p)));
            }
        }
        println!("  [xi_a, xi_b] = {factor} xi_c (cyclic): max residual {dev:.3e}");

        // Killing property.
        let mut killing = 0.0_f64;
        for alpha in 0..3 {
            let lg = lie_derivative_metric(&s.xi[alpha], &s.metric);
            for p in &points {
                killing = killing.max(max_abs(&lg.matrix_values(p)));
            }
        }
        println!("  L_xi g = 0 (Killing): max residual {killing:.3e}");

        // Rotation of the endomorphisms: L_{xi_a} phi_b = 2 eps_abc phi_c on
        // the sphere, zero on flat space.
        let mut rotation = 0.0_f64;
        for a in 0..3 {
            for b in 0..3 {
                let mut residual = lie_derivative_endomorphism(&s.xi[a], &s.phi[b]);
                if model.kind().is_curved() {
                    for c in 0..3 {
                        let eps = acm3::contact3::epsilon(a, b, c);
                        if eps != 0.0 {
                            residual = residual.sub(&s.phi[c].scale(2.0 * eps));
                        }
                    }
                }
                for p in &points {
                    rotation = rotation.max(max_abs(&residual.matrix_values(p)));
                }
            }
        }
        let formula = if model.kind().is_curved() {
            "L_xi_a phi_b = 2 sum_c eps_abc phi_c"
        } else {
            "L_xi_a phi_b = 0"
        };
        println!("  {formula}: max residual {rotation:.3e}\n");
    }
}
