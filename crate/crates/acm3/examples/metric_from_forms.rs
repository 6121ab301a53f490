//! Recovers the metric and the structure endomorphisms from the three
//! fundamental 2-forms alone, on the horizontal distribution:
//!
//! * `g|_H = -Phi_3 Phi_2^{-1} Phi_1` as matrices on any horizontal basis,
//! * `phi_a|_H = -1/2 sum_bc eps_abc Phi_b^{-1} Phi_c`.
//!
//! This is the sense in which the three 2-forms alone determine the whole
//! structure on the horizontal bundle.
//!
//! Run with: `cargo run --example metric_from_forms`

use acm3::contact3::{form_matrix_on_basis, recover_metric, recover_phi_horizontal};
use acm3::models::Model;

fn main() {
    for model in [Model::flat(1), Model::sphere(1)] {
        let s = model.structure();
        let m = model.dim();
        let p = &model.sample_points(1, 33)[0];
        let basis = s.horizontal_basis(p);
        let k = basis.len();
        let forms = [s.fundamental_form(0), s.fundamental_form(1), s.fundamental_form(2)];

        println!("== {} (horizontal rank {k}) ==", model.kind().label());

        // Horizontal metric from the forms.
        let b1 = form_matrix_on_basis(&forms[0], p, &basis);
        let b2 = form_matrix_on_basis(&forms[1], p, &basis);
        let b3 = form_matrix_on_basis(&forms[2], p, &basis);
        let recovered = -(b3 * b2.try_inverse().expect("Phi_2 is nondegenerate on H") * b1);
        let g = s.metric.matrix_values(p);
        let mut dev = 0.0_f64;
        for r in 0..k {
            for c in 0..k {
                let mut acc = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        acc += g[i * m + j] * basis[r][i] * basis[c][j];
                    }
                }
                dev = dev.max((recovered[(r, c)] - acc).abs());
            }
        }
        println!("  max |(-Phi_3 Phi_2^-1 Phi_1)_rs - g(b_r, b_s)| = {dev:.3e}");

        // Horizontal endomorphisms from the forms.
        for alpha in 0..3 {
            let recovered = recover_phi_horizontal(&forms, alpha, p, &basis);
            // Compare by action: phi_a b_j expanded against the true images.
            let phi = s.phi[alpha].matrix_values(p);
            let mut dev = 0.0_f64;
            for j in 0..k {
                let mut image = vec![0.0; m];
                for r in 0..m {
                    for c in 0..m {
                        image[r] += phi[r * m + c] * basis[j][c];
                    }
                }
                let mut rebuilt = vec![0.0; m];
                for r in 0..k {
                    for i in 0..m {
                        rebuilt[i] += recovered[(r, j)] * basis[r][i];
                    }
                }
                for i in 0..m {
                    dev = dev.max((rebuilt[i] - image[i]).abs());
                }
            }
            println!("  max |recovered phi_{} b_j - phi_{} b_j|          = {dev:.3e}", alpha + 1, alpha + 1);
        }

        // Full coordinate metric from forms + Reeb data.
        let full = recover_metric(&forms, &s.xi, &s.eta, p);
        let dev = full
            .iter()
            .zip(&g)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()));
        println!("  max |recovered g_ij - g_ij| (full, with Reeb data) = {dev:.3e}\n");
    }
}
