//! Analysis of the integer sequences `u^k_n`: recurrences, prime
//! congruences, constant tails, convergence, and an expectation-driven suite.
//!
//! Checkers classify and report. A failed expectation is a finding in the
//! suite report, not an error.

mod congruence;
mod patterns;
mod recurrence;

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigpoly::{classify_pair, classify_symmetry, PairRelation, SymmetryClass};
use crate::numfield::NumberField;
use crate::transform::{build_table, IterateTable, TransformError};

pub use congruence::{
    classify, congruence_from_table, congruence_scan, Branch, CongruenceReport, LevelRecurrence, Method, PrimeResidue,
    MIN_BRANCH_RUN,
};
pub use patterns::{constant_detect, convergence_check, ConstantVerdict, ConvergenceReport, Violation, MIN_PATTERN_TAIL};
pub use recurrence::{
    characteristic_of, compare_recurrence, detect_recurrence, modular_extend, predicted_recurrence, sign_rule,
    PredictedRecurrence, Recurrence, RecurrenceMatch, Variant,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("sequence has {len} terms, need at least {min}")]
    SequenceTooShort { len: usize, min: usize },
    #[error("no recurrence of admissible order fits any long enough suffix")]
    NoRecurrenceFound,
    #[error("recurrence has non-integer coefficients")]
    NonIntegral,
    #[error("variant {variant:?} does not apply: {reason}")]
    VariantInapplicable { variant: Variant, reason: String },
    #[error("index {index} lies below the recurrence onset {onset}")]
    IndexBelowOnset { index: usize, onset: usize },
    #[error("need {needed} initial terms, got {got}")]
    NotEnoughTerms { needed: usize, got: usize },
    #[error("modulus {0} is not usable")]
    InvalidModulus(u64),
    #[error("a coefficient denominator is divisible by {modulus}")]
    DenominatorDivisible { modulus: u64 },
    #[error("level {k}: prime {p} is beyond the exact limit and no verified recurrence is available")]
    RecurrenceUnavailable { k: usize, p: u64 },
    #[error("invalid range {lo}..={hi}")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("level {lambda}: magnitudes at n = {n}, {} could not be separated", n + 1)]
    IncomparableMagnitudes { lambda: usize, n: u64 },
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// What a suite run is expected to find. Levels are iterate levels `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    /// `u^level_p ≡ residue (mod p)` for every scanned prime `p ≥ from_prime`,
    /// or, without `from_prime`, from the classified onset on.
    Congruence {
        level: usize,
        residue: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        from_prime: Option<u64>,
    },
    /// `u^level_n = value` for every tabulated `n ≥ from`.
    Constant { level: usize, value: i64, from: u64 },
    /// `u^level_n = odd` for odd `n ≥ from`, `even` for even `n ≥ from`.
    Alternating { level: usize, odd: i64, even: i64, from: u64 },
    /// The level's tail is constant `value` with onset at most `max_onset`.
    EventuallyConstant { level: usize, value: i64, max_onset: u64 },
    /// The detected recurrence at `level` equals the prediction, possibly
    /// up to onset.
    Recurrence { level: usize, variant: Variant },
}

impl Expectation {
    pub fn level(&self) -> usize {
        match self {
            Expectation::Congruence { level, .. }
            | Expectation::Constant { level, .. }
            | Expectation::Alternating { level, .. }
            | Expectation::EventuallyConstant { level, .. }
            | Expectation::Recurrence { level, .. } => *level,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationOutcome {
    pub expectation: Expectation,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Table exponents run over `1..=n_max` (extended to cover exact primes).
    pub n_max: u64,
    pub p_lo: u64,
    pub p_hi: u64,
    pub exact_limit: u64,
    /// Highest level analysed; defaults to `degree − 1`.
    pub k_max: Option<usize>,
    /// Skip the convergence check (the costliest part for long tables).
    pub convergence: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { n_max: 120, p_lo: 2, p_hi: 100, exact_limit: 300, k_max: None, convergence: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceSummary {
    pub order: usize,
    pub coeffs: Vec<String>,
    pub onset_exponent: u64,
    pub integral: bool,
    /// Ascending coefficients of `x^j − b₁x^{j−1} − … − b_j`.
    pub characteristic: Option<Vec<String>>,
    pub symmetry: Option<SymmetryClass>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelReport {
    pub k: usize,
    pub recurrence: Result<RecurrenceSummary, String>,
    pub congruence: Result<CongruenceReport, String>,
    pub constant: ConstantVerdict,
    pub convergence: Option<Result<ConvergenceReport, String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredictionReport {
    pub variant: Variant,
    pub level: usize,
    pub predicted: Vec<String>,
    pub outcome: Result<RecurrenceMatch, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairAudit {
    pub levels: (usize, usize),
    pub relation: PairRelation,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub degree: usize,
    pub table_range: (u64, u64),
    pub levels: Vec<LevelReport>,
    pub predictions: Vec<PredictionReport>,
    pub pairs: Vec<PairAudit>,
    pub expectations: Vec<ExpectationOutcome>,
    /// Rounding failures while building the table.
    pub errors: Vec<String>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.expectations.iter().all(|e| e.passed)
    }

    pub fn level(&self, k: usize) -> Option<&LevelReport> {
        self.levels.iter().find(|l| l.k == k)
    }
}

/// Recurrence of level `k` over the table, with data for modular extension.
pub fn level_recurrence(t: &IterateTable, k: usize) -> Result<LevelRecurrence, SeqError> {
    let (start, seq) = t.level_sequence(k);
    let r = detect_recurrence(&seq)?;
    Ok(LevelRecurrence::from_sequence(r, start, &seq))
}

fn summarize(lr: &LevelRecurrence) -> RecurrenceSummary {
    let r = &lr.recurrence;
    let ch = characteristic_of(r).ok();
    RecurrenceSummary {
        order: r.order,
        coeffs: r.coeff_strings(),
        onset_exponent: lr.onset_exponent(),
        integral: r.integer_coeffs().is_some(),
        symmetry: ch.as_ref().map(classify_symmetry),
        characteristic: ch.map(|c| c.to_decimal_strings()),
    }
}

fn check_values(t: &IterateTable, level: usize, from: u64, want: impl Fn(u64) -> i64) -> (bool, String) {
    let (_, hi) = t.n_range();
    if from > hi {
        return (false, format!("table ends at n = {hi}, before {from}"));
    }
    for n in from..=hi {
        match t.u(level, n) {
            None => return (false, format!("u at n = {n} was not computed")),
            Some(u) if *u != BigInt::from(want(n)) => return (false, format!("u at n = {n} is {u}, expected {}", want(n))),
            _ => {}
        }
    }
    (true, format!("holds for {from} <= n <= {hi}"))
}

fn evaluate(
    e: &Expectation,
    t: &IterateTable,
    levels: &[LevelReport],
    recs: &[Result<LevelRecurrence, SeqError>],
    f: &NumberField,
) -> ExpectationOutcome {
    let (passed, detail) = match e {
        _ if e.level() >= levels.len() => (false, format!("level {} was not analysed", e.level())),
        Expectation::Congruence { level, residue, from_prime: Some(from) } => match &levels[*level].congruence {
            Ok(c) if !c.residues.iter().any(|r| r.p >= *from) => (false, format!("no primes >= {from} scanned")),
            Ok(c) if c.holds_from(*residue, *from) => (true, format!("branch {:?}, onset prime {:?}", c.branch, c.onset_prime)),
            Ok(c) => (false, format!("fails at primes {:?}; branch {:?}", c.failing_primes(*residue, *from), c.branch)),
            Err(err) => (false, err.clone()),
        },
        Expectation::Congruence { level, residue, from_prime: None } => match &levels[*level].congruence {
            Ok(c) => {
                let ok = c.onset_prime.is_some_and(|on| c.holds_from(*residue, on));
                (ok, format!("branch {:?}, onset prime {:?}", c.branch, c.onset_prime))
            }
            Err(err) => (false, err.clone()),
        },
        Expectation::EventuallyConstant { level, value, max_onset } => match levels[*level].constant {
            ConstantVerdict::Constant { value: v, onset } if v as i64 == *value && onset <= *max_onset => {
                (true, format!("constant {v} from n = {onset}"))
            }
            other => {
                let tail: Vec<String> = t.level(*level).iter().rev().take(3).rev().map(|(n, u)| format!("u({n}) = {u}")).collect();
                (false, format!("{other:?}; tail {}", tail.join(", ")))
            }
        },
        Expectation::Constant { level, value, from } => check_values(t, *level, *from, |_| *value),
        Expectation::Alternating { level, odd, even, from } => {
            check_values(t, *level, *from, |n| if n % 2 == 1 { *odd } else { *even })
        }
        Expectation::Recurrence { level, variant } => match (&recs[*level], predicted_recurrence(f.min_poly(), *variant)) {
            (Ok(lr), Ok(p)) => {
                let m = compare_recurrence(&lr.recurrence, &p);
                (matches!(m, RecurrenceMatch::Equal | RecurrenceMatch::EqualUpToOnset), format!("{m:?}"))
            }
            (Err(err), _) => (false, err.to_string()),
            (_, Err(err)) => (false, err.to_string()),
        },
    };
    ExpectationOutcome { expectation: e.clone(), passed, detail }
}

/// Builds the table, analyses every level and checks `expectations`.
pub fn run_suite(f: Arc<NumberField>, expectations: &[Expectation], opts: &SuiteOptions) -> Result<SuiteReport, SeqError> {
    let d = f.degree();
    let k_max = opts.k_max.unwrap_or(d.saturating_sub(1)).max(expectations.iter().map(|e| e.level()).max().unwrap_or(0));
    let n_hi = opts.n_max.max(opts.p_hi.min(opts.exact_limit)).max(8);
    let t = build_table(f.clone(), k_max, 1, n_hi)?;
    let recs: Vec<Result<LevelRecurrence, SeqError>> = (0..=k_max).map(|k| level_recurrence(&t, k)).collect();
    let levels: Vec<LevelReport> = (0..=k_max)
        .map(|k| {
            let rec = recs[k].as_ref().ok();
            let extend = rec.filter(|_| opts.p_hi > opts.exact_limit.min(n_hi));
            LevelReport {
                k,
                recurrence: recs[k].as_ref().map(summarize).map_err(|e| e.to_string()),
                congruence: congruence_from_table(&t, k, opts.p_lo, opts.p_hi, opts.exact_limit.min(n_hi), extend)
                    .map_err(|e| e.to_string()),
                constant: constant_detect(&t, k),
                convergence: opts
                    .convergence
                    .then(|| convergence_check(&t, k).map_err(|e| e.to_string())),
            }
        })
        .collect();

    let predictions = Variant::ALL
        .iter()
        .filter_map(|&v| predicted_recurrence(f.min_poly(), v).ok())
        .filter(|p| p.level <= k_max)
        .map(|p| PredictionReport {
            variant: p.variant,
            level: p.level,
            predicted: p.coeffs.iter().map(|c| c.to_string()).collect(),
            outcome: recs[p.level]
                .as_ref()
                .map(|lr| compare_recurrence(&lr.recurrence, &p))
                .map_err(|e| e.to_string()),
        })
        .collect();

    let chars: Vec<_> = recs
        .iter()
        .map(|r| r.as_ref().ok().and_then(|lr| characteristic_of(&lr.recurrence).ok()))
        .collect();
    let mut pairs = Vec::new();
    for m in 0..=k_max {
        let Some(partner) = (d + 2).checked_sub(m) else { continue };
        if partner < m || partner > k_max {
            continue;
        }
        if let (Some(a), Some(b)) = (&chars[m], &chars[partner]) {
            if let Ok(relation) = classify_pair(a, b) {
                pairs.push(PairAudit { levels: (m, partner), relation });
            }
        }
    }

    let outcomes = expectations.iter().map(|e| evaluate(e, &t, &levels, &recs, &f)).collect();
    Ok(SuiteReport {
        degree: d,
        table_range: t.n_range(),
        levels,
        predictions,
        pairs,
        expectations: outcomes,
        errors: t.errors().iter().map(|e| e.to_string()).collect(),
    })
}

/// Expectations for `α_n`: level 0 residue 2, levels strictly between 0 and
/// `n − 1` residue 0, level `n − 1` residue −1, each from `from_prime` on.
pub fn alpha_expectations(n: usize, from_prime: u64) -> Vec<Expectation> {
    let from_prime = Some(from_prime);
    let mut out = vec![Expectation::Congruence { level: 0, residue: 2, from_prime }];
    out.extend((1..n.saturating_sub(1)).map(|level| Expectation::Congruence { level, residue: 0, from_prime }));
    if n >= 2 {
        out.push(Expectation::Congruence { level: n - 1, residue: -1, from_prime });
    }
    out
}

/// Expectations for `β_n`: residue 1 at every level `k < n`.
pub fn beta_expectations(n: usize, from_prime: u64) -> Vec<Expectation> {
    (0..n).map(|level| Expectation::Congruence { level, residue: 1, from_prime: Some(from_prime) }).collect()
}
