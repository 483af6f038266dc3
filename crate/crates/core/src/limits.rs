//! Pisot limit points as roots of logarithmic equations: solving with a
//! residual gate on the original equation, the closed-form identities, and
//! the ordering chain below 2.
//!
//! All logarithms are natural logs. Every expression is a ratio of logs, so
//! the base cancels.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigpoly::{alpha_poly, beta_poly, family_poly, Family, IntPolynomial, PolyError};
use crate::interval::{Interval, IntervalRepr};
use crate::numfield::{certify_pisot, CertificateRepr, NumFieldError, NumberField, PisotCertificate, Verdict};
use crate::seqlab::{run_suite, Expectation, SeqError, SuiteOptions, SuiteReport};

pub const DEFAULT_BITS: u32 = 192;
pub const DEFAULT_TOL: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("no root of {poly} in ]{lo}, {hi}[")]
    NoRootInInterval { poly: String, lo: u64, hi: u64 },
    #[error("{spec}: residual bound {bound} is not below {tol}")]
    ResidualTooLarge { spec: String, bound: String, tol: String },
    #[error("{0}: the root is not Pisot")]
    NotPisot(String),
    #[error("{what}: {bits} bits are not enough")]
    PrecisionExhausted { what: String, bits: u32 },
    #[error("cannot separate {0} from {1}")]
    IncomparableAdjacent(String, String),
    #[error("count must be at least 2, got {0}")]
    CountTooSmall(usize),
    #[error("the generalized congruence pattern is stated for the heart family only")]
    NotHeart,
    #[error(transparent)]
    NumField(#[from] NumFieldError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEquationSpec {
    pub family: Family,
    pub m: u64,
    pub n: usize,
    /// Heart family only, `1 ≤ l < m`.
    pub l: Option<u64>,
}

impl LogEquationSpec {
    pub fn club(m: u64, n: usize) -> Self {
        LogEquationSpec { family: Family::Club, m, n, l: None }
    }

    pub fn heart(m: u64, n: usize, l: u64) -> Self {
        LogEquationSpec { family: Family::Heart, m, n, l: Some(l) }
    }

    pub fn spade(m: u64, n: usize) -> Self {
        LogEquationSpec { family: Family::Spade, m, n, l: None }
    }

    /// `]m − 1, m[` for club and heart, `]m, m + 1[` for spade.
    pub fn root_interval(&self) -> (u64, u64) {
        match self.family {
            Family::Spade => (self.m, self.m + 1),
            _ => (self.m - 1, self.m),
        }
    }

    /// Every spec with `2 ≤ m ≤ m_max`, `1 ≤ n ≤ n_max`, all families and
    /// all admissible `l`.
    pub fn enumerate(m_max: u64, n_max: usize) -> Vec<LogEquationSpec> {
        let mut out = Vec::new();
        for m in 2..=m_max {
            for n in 1..=n_max {
                out.push(Self::club(m, n));
                out.extend((1..m).map(|l| Self::heart(m, n, l)));
                out.push(Self::spade(m, n));
            }
        }
        out
    }
}

impl std::fmt::Display for LogEquationSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.l {
            Some(l) => write!(f, "{}(m={}, n={}, l={})", self.family, self.m, self.n, l),
            None => write!(f, "{}(m={}, n={})", self.family, self.m, self.n),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LimitPointSolution {
    pub spec: LogEquationSpec,
    /// Family polynomial with every factor `x − 1` removed.
    pub poly: IntPolynomial,
    pub root: Interval,
    pub certificate: PisotCertificate,
    /// Enclosure of `|LHS − n|` for the original equation at `root`.
    pub residual: Interval,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionRepr {
    pub spec: LogEquationSpec,
    pub poly: Vec<String>,
    pub root: IntervalRepr,
    pub certificate: CertificateRepr,
    pub residual_bound: String,
}

impl LimitPointSolution {
    pub fn to_repr(&self, digits: usize) -> SolutionRepr {
        SolutionRepr {
            spec: self.spec,
            poly: self.poly.to_decimal_strings(),
            root: self.root.to_repr(digits),
            certificate: self.certificate.to_repr(digits.min(crate::interval::digits_for(self.certificate.precision_bits))),
            residual_bound: self.residual.to_repr(6).hi,
        }
    }
}

/// Removes every factor `x − 1`.
pub fn strip_unit_root(p: &IntPolynomial) -> IntPolynomial {
    let x_minus_1 = IntPolynomial::from_i64(&[-1, 1]);
    let mut q = p.clone();
    while q.degree().is_some_and(|d| d > 0) && q.eval(&BigInt::one()).is_zero() {
        q = q.exact_div(&x_minus_1).expect("1 is a root");
    }
    q
}

fn sign_at(p: &IntPolynomial, m: &BigInt, shift: u32) -> i8 {
    let v = p.eval_dyadic_scaled(m, shift as u64);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Bisects a sign change of `p` in `[lo, hi]` down to width `2^{-bits}`.
/// `None` when the endpoint signs agree.
pub fn bisect_root(p: &IntPolynomial, lo: &BigRational, hi: &BigRational, bits: u32) -> Option<Interval> {
    let scale = BigRational::from_integer(BigInt::one() << bits as usize);
    let mut a = (lo * &scale).ceil().to_integer();
    let mut b = (hi * &scale).floor().to_integer();
    let (sa, sb) = (sign_at(p, &a, bits), sign_at(p, &b, bits));
    if sa == 0 {
        return Some(Interval::from_scaled(a.clone(), a, bits));
    }
    if sb == 0 {
        return Some(Interval::from_scaled(b.clone(), b, bits));
    }
    if sa == sb {
        return None;
    }
    while &b - &a > BigInt::one() {
        let mid: BigInt = (&a + &b) >> 1;
        match sign_at(p, &mid, bits) {
            0 => return Some(Interval::from_scaled(mid.clone(), mid, bits)),
            s if s == sa => a = mid,
            _ => b = mid,
        }
    }
    Some(Interval::from_scaled(a, b, bits))
}

fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn ln_or(iv: &Interval, what: &str, bits: u32) -> Result<Interval, LimitError> {
    iv.ln().ok_or_else(|| LimitError::PrecisionExhausted { what: what.to_string(), bits })
}

/// `log(a)/log(x) − log(b)/log(x)` as an interval, each term `−log(·)`.
fn log_ratio(num_args: &[Interval], minus_args: &[Interval], x: &Interval, bits: u32) -> Result<Interval, LimitError> {
    let lx = ln_or(x, "log x", bits)?;
    let mut acc = Interval::from_i64(0, x.prec());
    for a in num_args {
        acc = acc.sub(&ln_or(a, "log argument", bits)?);
    }
    for a in minus_args {
        acc = acc.add(&ln_or(a, "log argument", bits)?);
    }
    acc.div(&lx).ok_or_else(|| LimitError::PrecisionExhausted { what: "log x".into(), bits })
}

/// Left-hand side of the spec's logarithmic equation at `x`.
pub fn equation_lhs(spec: &LogEquationSpec, x: &Interval, bits: u32) -> Result<Interval, LimitError> {
    let m = BigInt::from(spec.m);
    let m_minus_x = x.neg().add_int(&m);
    match spec.family {
        Family::Club => log_ratio(&[m_minus_x], &[], x, bits),
        Family::Heart => {
            let l = BigInt::from(spec.l.unwrap_or(0));
            let x_minus = x.add_int(&(l - &m));
            log_ratio(&[m_minus_x], &[x_minus], x, bits)
        }
        Family::Spade => log_ratio(&[x.add_int(&-m)], &[], x, bits),
    }
}

fn residual(value: &Interval, target: &BigRational) -> Interval {
    value.sub(&Interval::from_ratio(target, value.prec())).abs()
}

pub fn solve_log_equation(spec: &LogEquationSpec, tol: f64, bits: u32) -> Result<LimitPointSolution, LimitError> {
    let raw = family_poly(spec.family, spec.m, spec.n, spec.l)?;
    let poly = strip_unit_root(&raw);
    let (lo, hi) = spec.root_interval();
    let no_root = || LimitError::NoRootInInterval { poly: raw.to_string(), lo, hi };
    if poly.degree().unwrap_or(0) == 0 {
        return Err(no_root());
    }
    let root = bisect_root(&poly, &int(lo), &int(hi), bits).ok_or_else(no_root)?;
    if !(root.lo() > int(lo) && root.hi() < int(hi)) {
        return Err(no_root());
    }
    let certificate = certify_pisot(&poly)?;
    // one root outside the unit disk, so the sign change above is that root
    if !certificate.verdict.has_pisot_geometry() {
        return Err(LimitError::NotPisot(spec.to_string()));
    }
    let lhs = equation_lhs(spec, &root, bits)?;
    let residual = residual(&lhs, &int(spec.n as u64));
    let tol_r = BigRational::from_f64(tol).unwrap_or_else(BigRational::zero);
    if residual.hi() >= tol_r {
        return Err(LimitError::ResidualTooLarge {
            spec: spec.to_string(),
            bound: residual.to_repr(6).hi,
            tol: format!("{tol:e}"),
        });
    }
    Ok(LimitPointSolution { spec: *spec, poly, root, certificate, residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    /// `−log(2 − β_n)/log β_n = n + 1`
    I,
    /// `(−log(2 − α_n) + log(α_n − 1))/log α_n = n`
    II,
    /// `−log(2 − α₂)/log α₂ = 5/2` and `−log(α₂ − 1)/log α₂ = 1/2`
    Alpha2Pair,
    /// `(−log(2 − α₃) + log(α₃ − α₁))/log α₃ = 1`
    Alpha3Extra,
    /// `(−log(2 − δ) + log(δ − 1))/log δ = 7/2` for `δ` the root of
    /// `x⁴ − x³ − 2x² + 1`
    DeltaPrime,
}

#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub kind: IdentityKind,
    pub n: usize,
    pub label: String,
    pub claimed: BigRational,
    pub value: Interval,
    /// Enclosure of `|value − claimed|`.
    pub residual: Interval,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityRepr {
    pub kind: IdentityKind,
    pub n: usize,
    pub label: String,
    pub claimed: String,
    pub value: IntervalRepr,
    pub residual_bound: String,
}

impl IdentityCheck {
    pub fn to_repr(&self, digits: usize) -> IdentityRepr {
        IdentityRepr {
            kind: self.kind,
            n: self.n,
            label: self.label.clone(),
            claimed: self.claimed.to_string(),
            value: self.value.to_repr(digits),
            residual_bound: self.residual.to_repr(6).hi,
        }
    }
}

pub fn delta_prime_poly() -> IntPolynomial {
    IntPolynomial::from_i64(&[1, 0, -2, -1, 1])
}

fn root_in_1_2(p: &IntPolynomial, bits: u32, what: &str) -> Result<Interval, LimitError> {
    bisect_root(p, &int(1), &int(2), bits)
        .ok_or_else(|| LimitError::NoRootInInterval { poly: format!("{what}: {p}"), lo: 1, hi: 2 })
}

/// Certified residuals for one identity. `Alpha2Pair` yields two checks.
pub fn verify_identity(kind: IdentityKind, n: usize, bits: u32) -> Result<Vec<IdentityCheck>, LimitError> {
    if bits < 64 {
        return Err(LimitError::PrecisionExhausted { what: "identity".into(), bits });
    }
    let one = BigInt::one();
    let two = BigInt::from(2);
    let check = |label: String, n: usize, value: Interval, claimed: BigRational| IdentityCheck {
        kind,
        n,
        label,
        residual: residual(&value, &claimed),
        claimed,
        value,
    };
    let two_minus = |x: &Interval| x.neg().add_int(&two);
    let minus_one = |x: &Interval| x.add_int(&-one.clone());
    match kind {
        IdentityKind::I => {
            let n = n.max(1);
            let b = root_in_1_2(&beta_poly(n), bits, "beta")?;
            let v = log_ratio(&[two_minus(&b)], &[], &b, bits)?;
            Ok(vec![check(format!("beta_{n}"), n, v, int(n as u64 + 1))])
        }
        IdentityKind::II => {
            let n = n.max(1);
            let a = root_in_1_2(&alpha_poly(n), bits, "alpha")?;
            let v = log_ratio(&[two_minus(&a)], &[minus_one(&a)], &a, bits)?;
            Ok(vec![check(format!("alpha_{n}"), n, v, int(n as u64))])
        }
        IdentityKind::Alpha2Pair => {
            let a = root_in_1_2(&alpha_poly(2), bits, "alpha")?;
            let v1 = log_ratio(&[two_minus(&a)], &[], &a, bits)?;
            let v2 = log_ratio(&[minus_one(&a)], &[], &a, bits)?;
            Ok(vec![
                check("alpha_2: 2 - x".into(), 2, v1, BigRational::new(5.into(), 2.into())),
                check("alpha_2: x - 1".into(), 2, v2, BigRational::new(1.into(), 2.into())),
            ])
        }
        IdentityKind::Alpha3Extra => {
            let a3 = root_in_1_2(&alpha_poly(3), bits, "alpha")?;
            let a1 = root_in_1_2(&alpha_poly(1), bits, "alpha")?;
            let v = log_ratio(&[two_minus(&a3)], &[a3.sub(&a1)], &a3, bits)?;
            Ok(vec![check("alpha_3 with alpha_1".into(), 3, v, BigRational::one())])
        }
        IdentityKind::DeltaPrime => {
            let d = root_in_1_2(&delta_prime_poly(), bits, "delta")?;
            let v = log_ratio(&[two_minus(&d)], &[minus_one(&d)], &d, bits)?;
            Ok(vec![check("delta'_2".into(), 4, v, BigRational::new(7.into(), 2.into()))])
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChainEntry {
    pub label: String,
    pub poly: IntPolynomial,
    pub root: Interval,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainEntryRepr {
    pub label: String,
    pub root: IntervalRepr,
}

#[derive(Debug, Clone)]
pub struct OrderingReport {
    /// In the expected increasing order; `alpha_1` stands for `beta_1` too.
    pub chain: Vec<ChainEntry>,
    /// `alpha_poly(1) == beta_poly(1)`.
    pub first_pair_identical: bool,
    /// Adjacent pairs certified in the wrong order.
    pub inversions: Vec<(String, String)>,
    pub all_below_two: bool,
}

impl OrderingReport {
    pub fn holds(&self) -> bool {
        self.first_pair_identical && self.inversions.is_empty() && self.all_below_two
    }

    pub fn chain_repr(&self, digits: usize) -> Vec<ChainEntryRepr> {
        self.chain.iter().map(|e| ChainEntryRepr { label: e.label.clone(), root: e.root.to_repr(digits) }).collect()
    }
}

/// Certifies `α₁ = β₁ < α₂ < β₂ < α₃ < δ′₂ < β₃ < α₄ < β₄ < … < 2` up to
/// `α_count`, `β_count`; `δ′₂` appears when `count ≥ 3`.
pub fn ordering_check(count: usize, bits: u32) -> Result<OrderingReport, LimitError> {
    if count < 2 {
        return Err(LimitError::CountTooSmall(count));
    }
    let mut labels: Vec<(String, IntPolynomial)> = vec![("alpha_1".into(), alpha_poly(1))];
    for n in 2..=count {
        labels.push((format!("alpha_{n}"), alpha_poly(n)));
        if n == 3 {
            labels.push(("delta'_2".into(), delta_prime_poly()));
        }
        labels.push((format!("beta_{n}"), beta_poly(n)));
    }
    let chain: Vec<ChainEntry> = labels
        .into_iter()
        .map(|(label, poly)| {
            let root = root_in_1_2(&poly, bits, &label)?;
            Ok(ChainEntry { label, poly, root })
        })
        .collect::<Result<_, LimitError>>()?;
    let mut inversions = Vec::new();
    for w in chain.windows(2) {
        match w[0].root.certified_cmp(&w[1].root) {
            Some(std::cmp::Ordering::Less) => {}
            Some(_) => inversions.push((w[0].label.clone(), w[1].label.clone())),
            None => return Err(LimitError::IncomparableAdjacent(w[0].label.clone(), w[1].label.clone())),
        }
    }
    let two = int(2);
    Ok(OrderingReport {
        all_below_two: chain.iter().all(|e| e.root.hi() < two),
        first_pair_identical: alpha_poly(1) == beta_poly(1),
        chain,
        inversions,
    })
}

#[derive(Debug, Clone)]
pub struct GeneralizedReport {
    pub solution: LimitPointSolution,
    pub suite: SuiteReport,
    /// Parts of the pattern with an empty level range.
    pub skipped: Vec<String>,
}

/// Expectations for the heart-family root of degree `n₀ + 1`: level 0
/// residue `m`, levels `1 ..= n₀ − 2` residue 0, level `n₀ − 1` residue −1,
/// level `n₀` eventually constant 1.
pub fn generalized_expectations(spec: &LogEquationSpec, max_onset: u64) -> (Vec<Expectation>, Vec<String>) {
    let n0 = spec.n;
    let mut ex = vec![Expectation::Congruence { level: 0, residue: spec.m as i64, from_prime: None }];
    let mut skipped = Vec::new();
    if n0 >= 3 {
        ex.extend((1..=n0 - 2).map(|level| Expectation::Congruence { level, residue: 0, from_prime: None }));
    } else {
        skipped.push("no level strictly between 0 and n0 - 1: the residue-0 expectation is vacuous".to_string());
    }
    if n0 >= 2 {
        ex.push(Expectation::Congruence { level: n0 - 1, residue: -1, from_prime: None });
    } else {
        skipped.push("n0 = 1: the residue -1 level coincides with level 0".to_string());
    }
    ex.push(Expectation::EventuallyConstant { level: n0, value: 1, max_onset });
    (ex, skipped)
}

pub fn generalized_congruence_check(
    spec: &LogEquationSpec,
    p_hi: u64,
    opts: &SuiteOptions,
) -> Result<GeneralizedReport, LimitError> {
    if spec.family != Family::Heart {
        return Err(LimitError::NotHeart);
    }
    let solution = solve_log_equation(spec, DEFAULT_TOL, DEFAULT_BITS)?;
    let field = Arc::new(NumberField::new(solution.poly.clone())?);
    let opts = SuiteOptions { p_hi, ..*opts };
    let (ex, skipped) = generalized_expectations(spec, opts.n_max / 2);
    let suite = run_suite(field, &ex, &opts)?;
    Ok(GeneralizedReport { solution, suite, skipped })
}

/// Power sums `s_k = Σ rootᵏ` of the monic `p` for `k < count`, from
/// Newton's identities. `s_p ≡ s_1 (mod p)` for every prime `p`.
pub fn power_sums(p: &IntPolynomial, count: usize) -> Vec<BigInt> {
    let d = p.degree().unwrap_or(0);
    // e-style coefficients: p = x^d + c₁x^{d−1} + … + c_d
    let c: Vec<BigInt> = (0..=d).map(|i| p.coeff(d - i)).collect();
    let mut s: Vec<BigInt> = Vec::with_capacity(count);
    for k in 0..count {
        let v = if k == 0 {
            BigInt::from(d)
        } else {
            let mut acc = if k <= d { -BigInt::from(k) * &c[k] } else { BigInt::zero() };
            for i in 1..k.min(d + 1) {
                acc -= &c[i] * &s[k - i];
            }
            acc
        };
        s.push(v);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedTerm {
    pub n: u64,
    #[serde(with = "crate::report::decimal")]
    pub power_sum: BigInt,
    /// Nearest integer to `θⁿ`.
    #[serde(with = "crate::report::decimal")]
    pub nearest: BigInt,
    /// `power_sum mod n` when `n` is prime.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_if_prime: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct GeneratedSequence {
    pub target: u64,
    pub solution: LimitPointSolution,
    pub terms: Vec<GeneratedTerm>,
}

impl GeneratedSequence {
    /// Primes `p` in the table with `s_p ≢ target (mod p)`.
    pub fn violations(&self) -> Vec<u64> {
        self.terms
            .iter()
            .filter_map(|t| t.residue_if_prime.map(|r| (t.n, r)))
            .filter(|&(p, r)| r != self.target % p)
            .map(|(p, _)| p)
            .collect()
    }
}

/// Integer sequence with `u_p ≡ target (mod p)` for every prime `p`: the
/// power sums of the heart-family root with `m = target`, tabulated with
/// the nearest integers to `θⁿ` for `1 ≤ n ≤ n_max`.
pub fn residue_generator(target: u64, n0: usize, l: u64, n_max: u64) -> Result<GeneratedSequence, LimitError> {
    let spec = LogEquationSpec::heart(target, n0, l);
    let solution = solve_log_equation(&spec, DEFAULT_TOL, DEFAULT_BITS)?;
    let field = NumberField::new(solution.poly.clone())?;
    let sums = power_sums(&solution.poly, n_max as usize + 1);
    let primes: std::collections::BTreeSet<u64> = crate::numfield::primes_between(2, n_max).into_iter().collect();
    let terms = (1..=n_max)
        .map(|n| {
            let nearest = field.nearest_integer(&field.theta_power(n))?;
            let power_sum = sums[n as usize].clone();
            let residue_if_prime = primes.contains(&n).then(|| {
                use num_integer::Integer;
                use num_traits::ToPrimitive;
                power_sum.mod_floor(&BigInt::from(n)).to_u64().unwrap()
            });
            Ok(GeneratedTerm { n, power_sum, nearest, residue_if_prime })
        })
        .collect::<Result<Vec<_>, LimitError>>()?;
    Ok(GeneratedSequence { target, solution, terms })
}

/// True when the verdict is a full certificate (irreducibility included).
pub fn fully_certified(s: &LimitPointSolution) -> bool {
    s.certificate.verdict == Verdict::Pisot
}
