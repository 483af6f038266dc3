//! Certify a few polynomials as Pisot (or not) and print the root geometry.
//!
//!     cargo run --example certify

use pisotlab::bigpoly::{alpha_poly, IntPolynomial};
use pisotlab::numfield::{certify_pisot, Verdict};

fn main() {
    let cases = [
        ("golden", IntPolynomial::from_i64(&[-1, -1, 1])),
        ("plastic", IntPolynomial::from_i64(&[-1, -1, 0, 1])),
        ("delta2", IntPolynomial::from_i64(&[1, 0, -2, -1, 1])),
        ("alpha_4", alpha_poly(4)),
        ("x^2 - x - 3", IntPolynomial::from_i64(&[-3, -1, 1])),
    ];
    for (name, p) in cases {
        let c = certify_pisot(&p).expect("monic with nonzero constant term");
        let repr = c.to_repr(20);
        print!("{name:<12} {p:<28} {:?}", c.verdict);
        if let Some(r) = repr.dominant_root {
            print!("  root in [{}, {}]", r.lo, r.hi);
        }
        if let Some(q) = c.irreducibility_witness {
            print!("  irreducible mod {q}");
        }
        println!();
        if c.verdict == Verdict::NotPisot {
            println!("{:12} reason: {}", "", c.reason.unwrap_or_default());
        } else {
            for m in &repr.conjugate_moduli {
                println!("{:12} |conjugate| <= {}", "", &m.hi[..12.min(m.hi.len())]);
            }
        }
    }
}
