//! Builds an adapted orthonormal frame on a flat chart by parallel
//! transport, so that every structure tensor has constant integer
//! components, and shows that curved charts are rejected.
//!
//! The chart here is the flat model pushed through a seeded affine
//! scramble, so nothing looks adapted in raw coordinates.
//!
//! Run with: `cargo run --example darboux_frame`

use acm3::darboux::{adapted_form_constants, build_darboux_frame};
use acm3::models::Model;

fn main() {
    let model = Model::scrambled_flat(1, 42);
    let base = &model.sample_points(1, 1)[0];
    let frame = build_darboux_frame(&model, base, 64).expect("scrambled chart is still flat");

    println!("adapted frame on the scrambled flat chart (dimension {})", model.dim());
    println!("base point: {:?}\n", base.coords());

    // Evaluate the frame at a different point: transport preserves adaptation.
    let q = &model.sample_points(3, 8)[2];
    let vectors = frame.frame_at(q);
    let s = model.structure();
    let m = model.dim();

    // Gram matrix: must be the identity.
    let g = s.metric.matrix_values(q);
    let mut gram_dev = 0.0_f64;
    for r in 0..m {
        for c in 0..m {
            let mut acc = 0.0;
            for i in 0..m {
                for j in 0..m {
                    acc += g[i * m + j] * vectors[r][i] * vectors[c][j];
                }
            }
            gram_dev = gram_dev.max((acc - f64::from(r == c)).abs());
        }
    }
    println!("at a point {:.2} away:", chart_distance(base.coords(), q.coords()));
    println!("  max |g(E_r, E_s) - delta_rs| = {gram_dev:.3e}");

    // The fundamental forms against their frozen integer tables.
    for alpha in 0..3 {
        let comps = s.fundamental_form(alpha).eval(q, 0);
        let table = adapted_form_constants(alpha, model.n());
        let mut dev = 0.0_f64;
        for r in 0..m {
            for c in 0..m {
                let mut acc = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        acc += comps[i * m + j].value() * vectors[r][i] * vectors[c][j];
                    }
                }
                dev = dev.max((acc - table[r][c]).abs());
            }
        }
        println!("  max |Phi_{}(E_r, E_s) - integer table| = {dev:.3e}", alpha + 1);
    }

    println!("\nframe legs: {:?}", (0..m).map(|i| frame.label(i)).collect::<Vec<_>>());
    println!("\nPhi_1 constants (rows/cols = frame legs, n = 1):");
    let table = adapted_form_constants(0, model.n());
    for row in &table {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:+.0}")).collect();
        println!("  [{}]", cells.join(" "));
    }

    // Curved charts cannot carry such a frame; the constructor says so.
    let sphere = Model::sphere(1);
    let p = &sphere.sample_points(1, 3)[0];
    match build_darboux_frame(&sphere, p, 64) {
        Err(err) => println!("\nsphere chart rejected as expected: {err}"),
        Ok(_) => println!("\nunexpected: sphere chart accepted"),
    }
}

fn chart_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
