//! Detect the linear recurrence of each level, compare it with the
//! closed-form predictions, and extend residues past the exact range.
//!
//!     cargo run --release --example recurrence_detection

use std::sync::Arc;

use pisotlab::bigpoly::{alpha_poly, IntPolynomial};
use pisotlab::numfield::NumberField;
use pisotlab::seqlab::{compare_recurrence, level_recurrence, predicted_recurrence, Variant};
use pisotlab::transform::build_table;

fn main() {
    let polys = [
        ("second-smallest", IntPolynomial::from_i64(&[-1, 0, 0, -1, 1])),
        ("alpha_3", alpha_poly(3)),
        ("alpha_4", alpha_poly(4)),
    ];
    for (name, p) in polys {
        let f = Arc::new(NumberField::new(p.clone()).unwrap());
        let d = f.degree();
        let t = build_table(f, d - 1, 1, 120).unwrap();
        println!("{name}: {p}");
        for k in 0..d {
            match level_recurrence(&t, k) {
                Ok(lr) => println!(
                    "  level {k}: order {} coeffs [{}] from n = {}",
                    lr.recurrence.order,
                    lr.recurrence.coeff_strings().join(", "),
                    lr.onset_exponent()
                ),
                Err(e) => println!("  level {k}: {e}"),
            }
        }
        for v in Variant::ALL {
            let Ok(pred) = predicted_recurrence(&p, v) else { continue };
            let Ok(lr) = level_recurrence(&t, pred.level) else { continue };
            println!("  {v:?} at level {}: {:?}", pred.level, compare_recurrence(&lr.recurrence, &pred));
        }
        // residue of u^0_p far beyond the table
        let lr = level_recurrence(&t, 0).unwrap();
        let p = 1_000_003;
        println!("  u^0 at p = {p}: {} (mod p)", lr.residue_at(p, p).unwrap());
    }
}
