//! Tabulate the iterates `u^k_n` for a quadratic and for the sextic whose
//! level 5 settles into a ±1 alternation.
//!
//!     cargo run --release --example iterate_table

use std::sync::Arc;

use pisotlab::bigpoly::IntPolynomial;
use pisotlab::numfield::NumberField;
use pisotlab::transform::build_table;

fn show(name: &str, coeffs: &[i64], k_max: usize, n_lo: u64, n_hi: u64) {
    let f = Arc::new(NumberField::new(IntPolynomial::from_i64(coeffs)).unwrap());
    let t = build_table(f, k_max, n_lo, n_hi).unwrap();
    println!("{name}: {}", t.field().min_poly());
    for k in 0..=k_max {
        let row: Vec<String> = t.level(k).iter().map(|(_, u)| u.to_string()).collect();
        let shown = if row.len() > 12 { &row[row.len() - 12..] } else { &row[..] };
        println!("  k={k}: ... {}", shown.join(" "));
    }
    if !t.errors().is_empty() {
        println!("  rounding failures: {:?}", t.errors());
    }
}

fn main() {
    show("golden", &[-1, -1, 1], 1, 2, 20);
    show("atypical", &[-1, 1, -1, 0, 1, -2, 1], 5, 43, 60);
}
