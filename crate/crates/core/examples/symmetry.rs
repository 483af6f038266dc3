//! Coefficient symmetry of characteristic polynomials, and the pairing of
//! levels `m` and `d + 2 − m`.
//!
//!     cargo run --release --example symmetry

use pisotlab::bigpoly::{beta_poly, classify_pair, classify_symmetry, IntPolynomial};
use pisotlab::seqlab::{run_suite, SuiteOptions};
use pisotlab::numfield::NumberField;
use std::sync::Arc;

fn main() {
    for c in [&[1, -3, 1][..], &[-1, 0, 1, -1][..], &[-1, -1, 1][..], &[2, -1, 1][..]] {
        let p = IntPolynomial::from_i64(c);
        println!("{p:<20} {:?}", classify_symmetry(&p));
    }
    let p = IntPolynomial::from_i64(&[-1, -1, 1]);
    println!("{p} vs {}: {:?}", p.reverse(), classify_pair(&p, &p.reverse()).unwrap());

    let opts = SuiteOptions { convergence: false, ..SuiteOptions::default() };
    for n in 2..=4 {
        let r = run_suite(Arc::new(NumberField::new(beta_poly(n)).unwrap()), &[], &opts).unwrap();
        println!("beta_{n}:");
        for l in &r.levels {
            if let Ok(s) = &l.recurrence {
                println!("  level {}: characteristic {:?} symmetry {:?}", l.k, s.characteristic, s.symmetry);
            }
        }
        for pair in &r.pairs {
            println!("  levels {:?}: {:?}", pair.levels, pair.relation);
        }
    }
}
