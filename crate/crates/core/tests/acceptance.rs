//! Acceptance criteria 1 to 12, one line each.
//!
//! Criteria that cannot hold as stated keep failing; for those the run
//! checks that the failure set is exactly the known list of
//! counterexamples, so a change in either direction is caught.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pisotlab::bigpoly::{alpha_poly, beta_poly, family_poly, Family, IntPolynomial};
use pisotlab::catalog::Catalog;
use pisotlab::limits::{ordering_check, solve_log_equation, verify_identity, IdentityKind, LimitError, LogEquationSpec};
use pisotlab::numfield::{NumFieldError, NumberField, Verdict};
use pisotlab::seqlab::{
    compare_recurrence, congruence_scan, convergence_check, detect_recurrence, level_recurrence, predicted_recurrence,
    run_suite, Method, RecurrenceMatch, SuiteOptions, Variant,
};
use pisotlab::transform::build_table;

use common::*;

struct Outcome {
    detail: String,
    failures: Vec<String>,
}

impl Outcome {
    fn new(detail: impl Into<String>, failures: Vec<String>) -> Self {
        Outcome { detail: detail.into(), failures }
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Duration,
    /// Failures that are known to be unattainable.
    known: &'static [&'static str],
    run: fn() -> Outcome,
}

fn field(c: &[i64]) -> Arc<NumberField> {
    Arc::new(NumberField::new(IntPolynomial::from_i64(c)).unwrap())
}

fn field_of(p: IntPolynomial) -> Arc<NumberField> {
    Arc::new(NumberField::new(p).unwrap())
}

fn c1_quadratic_law() -> Outcome {
    let mut failures = Vec::new();
    for (name, c) in &CATALOG[..3] {
        let t = build_table(field(c), 1, 2, 50).unwrap();
        let a0 = BigInt::from(c[0]);
        for n in 2..=50u64 {
            let want = -num_traits::pow(a0.clone(), n as usize);
            if t.u(1, n) != Some(&want) {
                failures.push(format!("{name} n={n}"));
            }
        }
    }
    Outcome::new("u1_n = -a0^n for golden, silver, x2-3x+1, 2 <= n <= 50", failures)
}

fn c2_delta2() -> Outcome {
    let f = field(&[1, 0, -2, -1, 1]);
    let mut failures = Vec::new();
    let scan = congruence_scan(&f, 2, 13, 199, 300, None).unwrap();
    for r in &scan.residues {
        if r.method != Method::Exact || r.residue != 0 {
            failures.push(format!("u2 at p={} residue {}", r.p, r.residue));
        }
    }
    let t = build_table(f, 3, 11, 100).unwrap();
    for m in 11..=100u64 {
        if t.u(3, m) != Some(&BigInt::from(-1)) {
            failures.push(format!("u3 at m={m}"));
        }
    }
    Outcome::new(format!("u2_p = 0 mod p at {} primes in [13, 199]; u3_m = -1 for 11 <= m <= 100", scan.residues.len()), failures)
}

fn c3_atypical() -> Outcome {
    let t = build_table(field(CATALOG[6].1), 5, 43, 120).unwrap();
    let failures = (43..=120u64)
        .filter(|&l| t.u(5, l) != Some(&BigInt::from(if l % 2 == 0 { -1 } else { 1 })))
        .map(|l| format!("l={l}"))
        .collect();
    Outcome::new("level 5 is +1 at odd l in [43, 119], -1 at even l in [44, 120]", failures)
}

/// Residue failures `(label, level, prime)` at primes `13 ≤ p ≤ 97`, plus
/// the level-0 trace cross-check against the companion-matrix oracle.
fn family_pattern(label: &str, p: IntPolynomial, want: impl Fn(usize) -> i64, levels: usize) -> Vec<String> {
    let coeffs: Vec<i64> = p.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect();
    let f = field_of(p);
    let mut failures = Vec::new();
    for k in 0..levels {
        let scan = congruence_scan(&f, k, 13, 97, 300, None).unwrap();
        for r in &scan.residues {
            if r.signed != want(k) {
                failures.push(format!("{label} k={k} p={} residue {}", r.p, r.signed));
            }
        }
    }
    // power sums are ≡ trace mod p; where conjugates are negligible they equal u0
    let sums = power_sums_by_matrix(&coeffs, 98);
    let bound = f.conjugate_bound().clone();
    let d = f.degree() as i64;
    let scan = congruence_scan(&f, 0, 2, 97, 300, None).unwrap();
    let quarter = BigRational::new(1.into(), 4.into());
    for r in &scan.residues {
        let tail = num_traits::pow(bound.clone(), r.p as usize) * BigRational::from_integer((d - 1).into());
        if tail < quarter && mod_u64(&sums[r.p as usize], r.p) != r.residue {
            failures.push(format!("{label} trace oracle disagrees at p={}", r.p));
        }
    }
    failures
}

fn c4_alpha() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=5 {
        let want = move |k: usize| if k == 0 { 2 } else if k == n - 1 { -1 } else { 0 };
        failures.extend(family_pattern(&format!("alpha{n}"), alpha_poly(n), want, n));
    }
    Outcome::new("alpha_n, n = 2..5: u0 = 2, u^(n-1) = -1, middle levels 0 (mod p) for 13 <= p <= 97", failures)
}

fn c5_beta() -> Outcome {
    let mut failures = Vec::new();
    for n in 2..=5 {
        failures.extend(family_pattern(&format!("beta{n}"), beta_poly(n), |_| 1, n));
    }
    Outcome::new("beta_n, n = 2..5: u^k = 1 (mod p) for k < n, 13 <= p <= 97", failures)
}

fn c6_lucas_perrin() -> Outcome {
    let primes: Vec<u64> = (2..=293).filter(|&p| is_prime(p)).collect();
    let lucas = lucas(294);
    let perrin = perrin(294);
    let mut failures = Vec::new();
    let golden = field(&[-1, -1, 1]);
    let plastic = field(&[-1, -1, 0, 1]);
    let g = congruence_scan(&golden, 0, 2, 293, 300, None).unwrap();
    let pl = congruence_scan(&plastic, 0, 2, 293, 300, None).unwrap();
    let tg = build_table(golden, 0, 2, 293).unwrap();
    let tp = build_table(plastic, 0, 2, 293).unwrap();
    let mut transform_differs = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        let (l, pp) = (&lucas[p as usize], &perrin[p as usize]);
        if tg.u(0, p) != Some(l) {
            failures.push(format!("transform u0_{p} != L_{p}"));
        }
        if g.residues[i].residue != mod_u64(l, p) || mod_u64(l, p) != 1 % p {
            failures.push(format!("L_{p} residue"));
        }
        if mod_u64(pp, p) != 0 {
            failures.push(format!("P_{p} residue"));
        }
        if tp.u(0, p) == Some(pp) {
            if pl.residues[i].residue != 0 {
                failures.push(format!("plastic u0_{p} residue {}", pl.residues[i].residue));
            }
        } else {
            transform_differs.push(p);
        }
    }
    // the conjugates contribute more than 1/2 only for the first few primes
    if transform_differs.iter().any(|&p| p > 7) {
        failures.push(format!("plastic u0_p != P_p at {transform_differs:?}"));
    }
    Outcome::new(
        format!(
            "{} primes <= 293: L_p = 1, P_p = 0 (mod p); transform equals the oracle except plastic at p in {transform_differs:?} where conjugates add >= 1/2",
            primes.len()
        ),
        failures,
    )
}

fn c7_identities() -> Outcome {
    let tol = BigRational::from_f64(1e-40).unwrap();
    let mut jobs: Vec<(IdentityKind, usize)> = (1..=10).flat_map(|n| [(IdentityKind::I, n), (IdentityKind::II, n)]).collect();
    jobs.extend([(IdentityKind::Alpha2Pair, 2), (IdentityKind::Alpha3Extra, 3), (IdentityKind::DeltaPrime, 4)]);
    let mut failures = Vec::new();
    let mut worst = BigRational::zero();
    let mut count = 0;
    for (kind, n) in jobs {
        for c in verify_identity(kind, n, 256).unwrap() {
            count += 1;
            if c.residual.hi() >= tol {
                failures.push(format!("{} residual {}", c.label, c.residual.to_repr(4).hi));
            }
            if c.residual.hi() > worst {
                worst = c.residual.hi();
            }
        }
    }
    let worst = pisotlab::interval::format_rational(&worst, 3, pisotlab::interval::Rounding::Up);
    Outcome::new(format!("{count} identities at 256 bits, worst residual bound {worst}"), failures)
}

fn c8_ordering() -> Outcome {
    let o = ordering_check(3, 256).unwrap();
    let labels: Vec<&str> = o.chain.iter().map(|e| e.label.as_str()).collect();
    let mut failures = Vec::new();
    if labels != ["alpha_1", "alpha_2", "beta_2", "alpha_3", "delta'_2", "beta_3"] {
        failures.push(format!("chain labels {labels:?}"));
    }
    if !o.holds() {
        failures.push(format!("inversions {:?}, below two {}", o.inversions, o.all_below_two));
    }
    for w in o.chain.windows(2) {
        if w[0].root.hi() >= w[1].root.lo() {
            failures.push(format!("{} and {} overlap", w[0].label, w[1].label));
        }
    }
    Outcome::new(format!("alpha_1 = beta_1 < {} < 2, disjoint enclosures", labels[1..].join(" < ")), failures)
}

fn hankel_det(u: &[BigInt], l: usize) -> BigRational {
    let mut m: Vec<Vec<BigRational>> =
        (0..l).map(|i| (0..l).map(|j| BigRational::from_integer(u[i + j].clone())).collect()).collect();
    let mut det = BigRational::from_integer(1.into());
    for c in 0..l {
        let Some(piv) = (c..l).find(|&r| !m[r][c].is_zero()) else { return BigRational::zero() };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for r in c + 1..l {
            let factor = &m[r][c] / &m[c][c];
            let (top, bottom) = m.split_at_mut(r);
            for (x, y) in bottom[0][c..l].iter_mut().zip(&top[c][c..l]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

fn c9_recurrence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut failures = Vec::new();
    let mut trials = 0;
    while trials < 200 {
        let order = rng.gen_range(1..=6usize);
        let mut b: Vec<i64> = (0..order).map(|_| rng.gen_range(-5..=5)).collect();
        if b[order - 1] == 0 {
            b[order - 1] = if rng.gen_bool(0.5) { 1 } else { -1 };
        }
        let init: Vec<i64> = (0..order).map(|_| rng.gen_range(-9..=9)).collect();
        let body_len = 2 * order + 4 + rng.gen_range(0..=12);
        let body = linear_sequence(&b, &init, body_len);
        if hankel_det(&body, order).is_zero() {
            continue;
        }
        let garbage = rng.gen_range(0..=10usize);
        let mut seq: Vec<BigInt> = (0..garbage).map(|_| BigInt::from(rng.gen_range(-50..=50))).collect();
        seq.extend(body);
        if garbage > 0 {
            // the last garbage term must break the recurrence
            let g = garbage - 1;
            let fits = |s: &[BigInt]| {
                let l = g + order;
                l < s.len() && s[l] == b.iter().enumerate().map(|(i, &bi)| BigInt::from(bi) * &s[l - 1 - i]).sum::<BigInt>()
            };
            if fits(&seq) {
                seq[g] += 1;
            }
        }
        if seq.len() < 8 {
            continue;
        }
        trials += 1;
        match detect_recurrence(&seq) {
            Ok(r) => {
                let want: Vec<BigInt> = b.iter().map(|&v| BigInt::from(v)).collect();
                if r.integer_coeffs().as_ref() != Some(&want) || r.onset != garbage {
                    failures.push(format!("trial {trials}: got order {} onset {} for {b:?} garbage {garbage}", r.order, r.onset));
                }
            }
            Err(e) => failures.push(format!("trial {trials}: {e}")),
        }
    }
    for (name, c) in CATALOG {
        let f = field(c);
        let t = build_table(f.clone(), 0, 1, 120).unwrap();
        let lr = level_recurrence(&t, 0).unwrap();
        let pred = predicted_recurrence(f.min_poly(), Variant::ZeroIterate).unwrap();
        let m = compare_recurrence(&lr.recurrence, &pred);
        if !matches!(m, RecurrenceMatch::Equal | RecurrenceMatch::EqualUpToOnset) {
            failures.push(format!("{name}: {m:?}"));
        }
    }
    Outcome::new("200 synthetic recurrences recovered with exact onset; u0 of all 7 catalog entries matches the minimal polynomial", failures)
}

fn c10_rounding() -> Outcome {
    const BITS: u64 = 4096;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let mut failures = Vec::new();
    for (name, c) in CATALOG {
        let f = field(c);
        let theta = theta_fixed(c, BITS);
        let mut bad = 0;
        for _ in 0..1000 {
            let coords: Vec<BigInt> = (0..f.degree()).map(|_| BigInt::from(rng.gen_range(-1_000_000..=1_000_000))).collect();
            let e = f.element(coords.clone()).unwrap();
            if f.nearest_integer(&e).ok() != Some(round_fixed(&coords, &theta, BITS)) {
                bad += 1;
            }
        }
        if bad > 0 {
            failures.push(format!("{name}: {bad} mismatches"));
        }
        for k in [-3i64, 0, 7] {
            let half = f.from_int(2 * k + 1);
            if f.nearest_integer_scaled(&half, &BigInt::from(2)) != Err(NumFieldError::ExactHalfInteger) {
                failures.push(format!("{name}: ({} )/2 not rejected", 2 * k + 1));
            }
        }
    }
    Outcome::new("7000 random elements agree with 4096-bit fixed-point evaluation; half-integers rejected", failures)
}

fn c11_log_equations() -> Outcome {
    let tol = BigRational::from_f64(1e-30).unwrap();
    let mut failures = Vec::new();
    let mut solved = 0;
    let mut degenerate = Vec::new();
    for spec in LogEquationSpec::enumerate(5, 6) {
        match solve_log_equation(&spec, 1e-30, 192) {
            Ok(s) => {
                solved += 1;
                let (lo, hi) = spec.root_interval();
                let inside = s.root.lo() > BigRational::from_integer(lo.into()) && s.root.hi() < BigRational::from_integer(hi.into());
                if s.certificate.verdict != Verdict::Pisot || s.residual.hi() >= tol || !inside {
                    failures.push(format!("{spec}: verdict {:?}", s.certificate.verdict));
                }
            }
            // the equation for club(2, 1) reduces to (x − 1)², no admissible root
            Err(LimitError::NoRootInInterval { .. }) if spec == LogEquationSpec::club(2, 1) => degenerate.push(spec.to_string()),
            Err(e) => failures.push(format!("{spec}: {e}")),
        }
    }
    for n in 1..=10 {
        if family_poly(Family::Heart, 2, n, Some(1)).unwrap() != alpha_poly(n) {
            failures.push(format!("heart(2, {n}, 1) != alpha_{n}"));
        }
        match solve_log_equation(&LogEquationSpec::heart(2, n, 1), 1e-30, 192) {
            Ok(s) if s.poly == alpha_poly(n) => {}
            _ => failures.push(format!("solve heart(2, {n}, 1) does not give alpha_{n}")),
        }
    }
    Outcome::new(
        format!("{solved} specs certified Pisot with residual < 1e-30; no root besides x = 1: {degenerate:?}; heart(2, n, 1) = alpha_n"),
        failures,
    )
}

fn c12_convergence() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, c) in CATALOG {
        let f = field(c);
        let d = f.degree();
        let t = build_table(f, d - 1, 1, 160).unwrap();
        for lambda in 0..d {
            checked += 1;
            match convergence_check(&t, lambda) {
                Ok(r) => match r.onset_estimate {
                    Some(on) if on <= 80 => {}
                    on => failures.push(format!("{name} k={lambda} onset {on:?}")),
                },
                Err(e) => failures.push(format!("{name} k={lambda}: {e}")),
            }
        }
    }
    Outcome::new(format!("{checked} (entry, level) pairs over 1 <= n <= 160"), failures)
}

/// Audited statements: the findings must be identical across runs.
fn findings_reproducible() -> Outcome {
    let mut failures = Vec::new();
    let opts = SuiteOptions { n_max: 80, p_hi: 97, ..SuiteOptions::default() };
    for p in [IntPolynomial::from_i64(&[-1, -1, 1]), alpha_poly(3), beta_poly(3), IntPolynomial::from_i64(&[1, 0, -2, -1, 1])] {
        let label = p.to_string();
        let a = serde_json::to_string(&run_suite(field_of(p.clone()), &[], &opts).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(field_of(p), &[], &opts).unwrap()).unwrap();
        if a != b {
            failures.push(label);
        }
    }
    let catalog = Catalog::builtin();
    Outcome::new(format!("suite findings byte-identical across two runs; catalog of {} entries", catalog.entries().len()), failures)
}

fn main() {
    let criteria = [
        Criterion { id: 1, title: "quadratic law", limit: Duration::from_secs(5), known: &[], run: c1_quadratic_law },
        Criterion { id: 2, title: "delta2 levels 2 and 3", limit: Duration::from_secs(120), known: &[], run: c2_delta2 },
        Criterion { id: 3, title: "atypical sextic level 5", limit: Duration::from_secs(120), known: &[], run: c3_atypical },
        Criterion {
            id: 4,
            title: "alpha pattern",
            limit: Duration::from_secs(300),
            known: &["alpha5 k=0 p=19 residue 3", "alpha5 k=1 p=19 residue -2"],
            run: c4_alpha,
        },
        Criterion {
            id: 5,
            title: "beta pattern",
            limit: Duration::from_secs(300),
            known: &[
                "beta5 k=0 p=13 residue 2",
                "beta5 k=1 p=13 residue 0",
                "beta5 k=2 p=13 residue 0",
                "beta5 k=3 p=13 residue 0",
                "beta5 k=4 p=13 residue 0",
            ],
            run: c5_beta,
        },
        Criterion { id: 6, title: "Lucas and Perrin congruences", limit: Duration::from_secs(60), known: &[], run: c6_lucas_perrin },
        Criterion { id: 7, title: "identities", limit: Duration::from_secs(30), known: &[], run: c7_identities },
        Criterion { id: 8, title: "ordering chain", limit: Duration::from_secs(10), known: &[], run: c8_ordering },
        Criterion { id: 9, title: "recurrence detection", limit: Duration::from_secs(60), known: &[], run: c9_recurrence },
        Criterion { id: 10, title: "rounding certification", limit: Duration::from_secs(60), known: &[], run: c10_rounding },
        Criterion { id: 11, title: "log-equation residual gate", limit: Duration::from_secs(120), known: &[], run: c11_log_equations },
        Criterion {
            id: 12,
            title: "convergence onset",
            limit: Duration::from_secs(300),
            known: &[
                "plastic k=0 onset None",
                "second-smallest k=0 onset None",
                "delta2 k=0 onset None",
                "atypical k=0 onset None",
                "atypical k=1 onset Some(94)",
                "atypical k=3 onset Some(157)",
            ],
            run: c12_convergence,
        },
        Criterion { id: 13, title: "audited findings reproducible", limit: Duration::from_secs(120), known: &[], run: findings_reproducible },
    ];
    let mut unexpected = 0;
    for c in &criteria {
        let start = Instant::now();
        let out = (c.run)();
        let elapsed = start.elapsed();
        let got: BTreeSet<&str> = out.failures.iter().map(String::as_str).collect();
        let known: BTreeSet<&str> = c.known.iter().copied().collect();
        let in_time = elapsed <= c.limit;
        let status = if got.is_empty() && in_time { "PASS" } else { "FAIL" };
        let note = if !got.is_empty() && got == known { " [known counterexamples reproduced]" } else { "" };
        println!(
            "criterion {:>2} {status} {:<32} {:>7.2}s (limit {}s){note}: {}",
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.limit.as_secs(),
            out.detail
        );
        if !got.is_empty() {
            println!("             failures: {}", out.failures.join("; "));
        }
        if got != known || !in_time {
            unexpected += 1;
            println!("             UNEXPECTED: differs from the known outcome {:?}", c.known);
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria deviate from the known outcome");
        std::process::exit(1);
    }
}
