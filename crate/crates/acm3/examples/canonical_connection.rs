//! Demonstrates the canonical connection of an almost contact metric
//! 3-structure: it parallelizes the Reeb data and the metric, its torsion
//! splits into a horizontal 2-form part and a vertical bracket part, and on
//! the flat model it reduces to the Levi-Civita connection.
//!
//! Run with: `cargo run --example canonical_connection`

use acm3::canonical::CanonicalConnection;
use acm3::models::Model;
use acm3::riemann::Connection;
use acm3::sampling::{derive_seed, random_vector_field, SplitMix64};

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

fn main() {
    for model in [Model::flat(1), Model::sphere(1)] {
        let s = model.structure().clone();
        let canonical = CanonicalConnection::new(s.clone());
        let points = model.sample_points(2, 9);
        let mut rng = SplitMix64::new(derive_seed(9, "canonical-demo"));
        let e = random_vector_field(&mut rng, model.dim());
        let f = random_vector_field(&mut rng, model.dim());

        println!("== {} ==", model.kind().label());

        // Parallel tensors.
        let mut xi_par = 0.0_f64;
        let mut metric_par = 0.0_f64;
        let metric_residual = s
            .metric
            .apply(&e, &f)
            .directional_derivative(&e)
            .sub(&s.metric.apply(&canonical.covariant_derivative(&e, &e), &f))
            .sub(&s.metric.apply(&e, &canonical.covariant_derivative(&e, &f)));
        for p in &points {
            for alpha in 0..3 {
                xi_par = xi_par.max(max_abs(
                    &canonical.covariant_derivative(&e, &s.xi[alpha]).values(p),
                ));
            }
            metric_par = metric_par.max(metric_residual.value(p).abs());
        }
        println!("  max |nabla~_E xi_a|                     = {xi_par:.3e}");
        println!("  max |E.g(E,F) - g(nabla~_E E, F) - ...| = {metric_par:.3e}");

        // Torsion against its structural decomposition.
        let torsion_gap = canonical.torsion(&e, &f).sub(&canonical.torsion_prediction(&e, &f));
        let mut torsion_dev = 0.0_f64;
        let mut torsion_size = 0.0_f64;
        for p in &points {
            torsion_dev = torsion_dev.max(max_abs(&torsion_gap.values(p)));
            torsion_size = torsion_size.max(max_abs(&canonical.torsion(&e, &f).values(p)));
        }
        println!("  max |T~(E,F)|                           = {torsion_size:.3e}");
        println!("  max |T~(E,F) - predicted decomposition| = {torsion_dev:.3e}");

        // Comparison with the Levi-Civita connection.
        let lc = canonical.levi_civita();
        let gap = canonical.covariant_derivative(&e, &f).sub(&lc.covariant_derivative(&e, &f));
        let mut dev = 0.0_f64;
        for p in &points {
            dev = dev.max(max_abs(&gap.values(p)));
        }
        println!("  max |nabla~_E F - nabla_E F|            = {dev:.3e}");
        println!(
            "  (the two connections {} on this model)\n",
            if dev < 1e-9 { "coincide" } else { "differ" }
        );
    }
}
