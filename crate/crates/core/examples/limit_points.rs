//! Solve the logarithmic equations for limit points, certify the roots and
//! bound the residual of the original equation.
//!
//!     cargo run --release --example limit_points

use pisotlab::limits::{solve_log_equation, LogEquationSpec, DEFAULT_BITS, DEFAULT_TOL};

fn main() {
    let specs = [
        LogEquationSpec::heart(2, 2, 1),
        LogEquationSpec::heart(5, 2, 1),
        LogEquationSpec::club(3, 2),
        LogEquationSpec::spade(2, 1),
        LogEquationSpec::club(2, 1),
    ];
    for spec in specs {
        match solve_log_equation(&spec, DEFAULT_TOL, DEFAULT_BITS) {
            Ok(s) => {
                let r = s.root.to_repr(25);
                println!("{spec:<24} {:<26} root ~ {}  residual <= {}", s.poly.to_string(), r.lo, s.residual.to_repr(3).hi);
            }
            Err(e) => println!("{spec:<24} {e}"),
        }
    }
    let all = LogEquationSpec::enumerate(5, 6);
    let ok = all.iter().filter(|s| solve_log_equation(s, DEFAULT_TOL, DEFAULT_BITS).is_ok()).count();
    println!("{ok} of {} specs with m <= 5, n <= 6 certified", all.len());
}
