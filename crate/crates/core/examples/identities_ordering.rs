//! Closed-form log identities at the alpha and beta roots, and the certified
//! ordering of the limit points below 2.
//!
//!     cargo run --release --example identities_ordering

use pisotlab::limits::{ordering_check, verify_identity, IdentityKind};

fn main() {
    let mut jobs: Vec<(IdentityKind, usize)> = (1..=6).flat_map(|n| [(IdentityKind::I, n), (IdentityKind::II, n)]).collect();
    jobs.extend([(IdentityKind::Alpha2Pair, 2), (IdentityKind::Alpha3Extra, 3), (IdentityKind::DeltaPrime, 4)]);
    for (kind, n) in jobs {
        for c in verify_identity(kind, n, 256).unwrap() {
            println!("{:<22} = {:<4} residual <= {}", c.label, c.claimed.to_string(), c.residual.to_repr(3).hi);
        }
    }
    let o = ordering_check(4, 256).unwrap();
    let chain: Vec<String> = o.chain_repr(12).into_iter().map(|e| format!("{} ({})", e.label, e.root.lo)).collect();
    println!("{}", chain.join(" < "));
    println!("holds: {}", o.holds());
}
