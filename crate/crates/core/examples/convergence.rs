//! Certified magnitudes of the fractional parts and the onset of strict
//! decrease. Complex conjugates of maximal modulus keep level 0 oscillating.
//!
//!     cargo run --release --example convergence

use std::sync::Arc;

use pisotlab::bigpoly::IntPolynomial;
use pisotlab::numfield::NumberField;
use pisotlab::seqlab::convergence_check;
use pisotlab::transform::build_table;

fn main() {
    for (name, c) in [("golden", &[-1, -1, 1][..]), ("plastic", &[-1, -1, 0, 1][..]), ("delta2", &[1, 0, -2, -1, 1][..])] {
        let f = Arc::new(NumberField::new(IntPolynomial::from_i64(c)).unwrap());
        let d = f.degree();
        let t = build_table(f, d - 1, 1, 80).unwrap();
        println!("{name}");
        for lambda in 0..d {
            let r = convergence_check(&t, lambda).unwrap();
            let late = r.violations.iter().filter(|v| v.sigma >= 40).count();
            println!(
                "  level {lambda}: onset {:?}, {} violations ({late} at n >= 40)",
                r.onset_estimate,
                r.violations.len()
            );
        }
    }
}
