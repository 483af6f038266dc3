//! Integer sequences with `u_p ≡ target (mod p)` for every prime `p`, from
//! power sums of heart-family roots.
//!
//!     cargo run --release --example generate

use pisotlab::limits::residue_generator;

fn main() {
    for target in [3, 5, 7] {
        let g = residue_generator(target, 2, target - 1, 40).unwrap();
        println!("target {target}: {}", g.solution.poly);
        let primes: Vec<String> = g
            .terms
            .iter()
            .filter_map(|t| t.residue_if_prime.map(|r| format!("{}:{}", t.n, r)))
            .collect();
        println!("  s_p mod p: {}", primes.join(" "));
        let first: Vec<String> = g.terms.iter().take(8).map(|t| t.power_sum.to_string()).collect();
        println!("  s_1..s_8: {}", first.join(", "));
        println!("  violations: {:?}", g.violations());
    }
}
