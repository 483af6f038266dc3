//! Run the full checker suite on every catalog entry and print the
//! expectation outcomes.
//!
//!     cargo run --release --example suite

use std::sync::Arc;

use pisotlab::catalog::Catalog;
use pisotlab::numfield::NumberField;
use pisotlab::seqlab::{run_suite, SuiteOptions};

fn main() {
    let opts = SuiteOptions { p_hi: 199, ..SuiteOptions::default() };
    for e in Catalog::builtin().entries() {
        let f = Arc::new(NumberField::new(e.poly()).unwrap());
        let r = run_suite(f, &e.expectations, &opts).unwrap();
        println!("{} ({})", e.name, if r.all_passed() { "pass" } else { "FAIL" });
        for l in &r.levels {
            if let Ok(c) = &l.congruence {
                println!("  level {}: branch {:?} from {:?}, tail {:?}", l.k, c.branch, c.onset_prime, l.constant);
            }
        }
        for o in &r.expectations {
            println!("  [{}] {:?}: {}", if o.passed { "ok" } else { "no" }, o.expectation, o.detail);
        }
    }
}
