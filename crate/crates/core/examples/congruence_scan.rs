//! Residues of `u^k_p` modulo primes, with the tail classified into a branch.
//! Level 0 of the plastic number is the Perrin sequence, hence residue 0.
//!
//!     cargo run --release --example congruence_scan

use pisotlab::bigpoly::IntPolynomial;
use pisotlab::numfield::NumberField;
use pisotlab::seqlab::congruence_scan;

fn main() {
    let cases: [(&str, &[i64], usize); 4] = [
        ("golden", &[-1, -1, 1], 0),
        ("plastic", &[-1, -1, 0, 1], 0),
        ("delta2", &[1, 0, -2, -1, 1], 2),
        ("alpha_3", &[1, 0, -1, -2, 1], 1),
    ];
    for (name, c, k) in cases {
        let f = NumberField::new(IntPolynomial::from_i64(c)).unwrap();
        let r = congruence_scan(&f, k, 2, 97, 300, None).unwrap();
        let signed: Vec<String> = r.residues.iter().map(|x| format!("{}:{}", x.p, x.signed)).collect();
        println!("{name} level {k}: branch {:?} from p = {:?}", r.branch, r.onset_prime);
        println!("  {}", signed.join(" "));
    }
}
