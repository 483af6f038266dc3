//! Residues of `u^k_p` modulo primes `p`, and classification of the tail.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::recurrence::{modular_extend, Recurrence};
use super::SeqError;
use crate::numfield::{primes_between, NumberField};
use crate::transform::{iterate_row, IterateTable};

/// Consecutive agreeing primes needed before a branch is declared.
pub const MIN_BRANCH_RUN: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    RecurrenceExtended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Branch {
    Zero,
    PlusOne,
    MinusOne,
    Other(i64),
    Mixed,
}

impl Branch {
    fn of(v: i64) -> Branch {
        match v {
            0 => Branch::Zero,
            1 => Branch::PlusOne,
            -1 => Branch::MinusOne,
            v => Branch::Other(v),
        }
    }

    /// Signed residue the branch stands for.
    pub fn value(self) -> Option<i64> {
        match self {
            Branch::Zero => Some(0),
            Branch::PlusOne => Some(1),
            Branch::MinusOne => Some(-1),
            Branch::Other(v) => Some(v),
            Branch::Mixed => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeResidue {
    pub p: u64,
    /// In `[0, p)`.
    pub residue: u64,
    /// Representative in `(−p/2, p/2]`.
    pub signed: i64,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub k: usize,
    pub prime_range: (u64, u64),
    pub residues: Vec<PrimeResidue>,
    pub branch: Branch,
    pub onset_prime: Option<u64>,
    /// Primes where both paths ran.
    pub cross_checked: Vec<u64>,
    /// Primes where the two paths disagreed.
    pub disagreements: Vec<u64>,
}

impl CongruenceReport {
    pub fn residue_map(&self) -> BTreeMap<u64, u64> {
        self.residues.iter().map(|r| (r.p, r.residue)).collect()
    }

    /// True when every scanned prime `p ≥ from` has `u ≡ value (mod p)`.
    pub fn holds_from(&self, value: i64, from: u64) -> bool {
        self.failing_primes(value, from).is_empty()
    }

    /// Scanned primes `p ≥ from` with `u ≢ value (mod p)`.
    pub fn failing_primes(&self, value: i64, from: u64) -> Vec<u64> {
        self.residues
            .iter()
            .filter(|r| r.p >= from && value.rem_euclid(r.p as i64) as u64 != r.residue)
            .map(|r| r.p)
            .collect()
    }
}

/// A level recurrence with its exact starting terms, for extension past the
/// exactly computed primes. `first_exponent` is the exponent of sequence
/// index 0.
#[derive(Debug, Clone)]
pub struct LevelRecurrence {
    pub recurrence: Recurrence,
    pub first_exponent: u64,
    /// `u` at sequence indices `onset .. onset + order`.
    pub initial_terms: Vec<BigInt>,
}

impl LevelRecurrence {
    /// Builds the extension data from a level sequence starting at exponent
    /// `first_exponent`.
    pub fn from_sequence(recurrence: Recurrence, first_exponent: u64, seq: &[BigInt]) -> Self {
        let o = recurrence.onset;
        let initial_terms = seq[o..o + recurrence.order].to_vec();
        LevelRecurrence { recurrence, first_exponent, initial_terms }
    }

    pub fn onset_exponent(&self) -> u64 {
        self.first_exponent + self.recurrence.onset as u64
    }

    pub fn residue_at(&self, p: u64, exponent: u64) -> Result<u64, SeqError> {
        if exponent < self.first_exponent {
            return Err(SeqError::IndexBelowOnset { index: 0, onset: self.recurrence.onset });
        }
        modular_extend(&self.recurrence, &self.initial_terms, p, (exponent - self.first_exponent) as usize)
    }
}

fn signed(res: u64, p: u64) -> i64 {
    if res > p / 2 {
        res as i64 - p as i64
    } else {
        res as i64
    }
}

fn residue_of(u: &BigInt, p: u64) -> u64 {
    u.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Longest run of equal signed residues ending at the last prime.
pub fn classify(residues: &[PrimeResidue]) -> (Branch, Option<u64>) {
    let Some(last) = residues.last() else {
        return (Branch::Mixed, None);
    };
    let run = residues.iter().rev().take_while(|r| r.signed == last.signed).count();
    if run < MIN_BRANCH_RUN {
        return (Branch::Mixed, None);
    }
    (Branch::of(last.signed), Some(residues[residues.len() - run].p))
}

fn assemble(
    k: usize,
    range: (u64, u64),
    exact: BTreeMap<u64, BigInt>,
    ext: Option<&LevelRecurrence>,
) -> Result<CongruenceReport, SeqError> {
    let primes = primes_between(range.0, range.1);
    let mut residues = Vec::with_capacity(primes.len());
    let mut cross_checked = Vec::new();
    let mut disagreements = Vec::new();
    for p in primes {
        let extended = match ext {
            Some(e) if p >= e.onset_exponent() => Some(e.residue_at(p, p)?),
            _ => None,
        };
        let (res, method) = match (exact.get(&p), extended) {
            (Some(u), x) => {
                let r = residue_of(u, p);
                if let Some(x) = x {
                    cross_checked.push(p);
                    if x != r {
                        disagreements.push(p);
                    }
                }
                (r, Method::Exact)
            }
            (None, Some(x)) => (x, Method::RecurrenceExtended),
            (None, None) => return Err(SeqError::RecurrenceUnavailable { k, p }),
        };
        residues.push(PrimeResidue { p, residue: res, signed: signed(res, p), method });
    }
    let (branch, onset_prime) = classify(&residues);
    Ok(CongruenceReport { k, prime_range: range, residues, branch, onset_prime, cross_checked, disagreements })
}

/// Residues of `u^k_p` for primes in `[p_lo, p_hi]`. Primes up to
/// `exact_limit` are computed exactly; larger ones need `ext`.
pub fn congruence_scan(
    f: &NumberField,
    k: usize,
    p_lo: u64,
    p_hi: u64,
    exact_limit: u64,
    ext: Option<&LevelRecurrence>,
) -> Result<CongruenceReport, SeqError> {
    if p_lo > p_hi {
        return Err(SeqError::InvalidRange { lo: p_lo, hi: p_hi });
    }
    let exact_primes = primes_between(p_lo, p_hi.min(exact_limit));
    let rows: Vec<(u64, Result<BigInt, SeqError>)> = exact_primes
        .par_iter()
        .map(|&p| {
            let (cells, err) = iterate_row(f, k, p);
            let u = match cells.get(k) {
                Some(c) => Ok(c.integer_part.clone()),
                None => Err(SeqError::Transform(err.expect("short row carries its error"))),
            };
            (p, u)
        })
        .collect();
    let mut exact = BTreeMap::new();
    for (p, u) in rows {
        exact.insert(p, u?);
    }
    assemble(k, (p_lo, p_hi), exact, ext)
}

/// Like [`congruence_scan`], taking exact values from a prebuilt table for
/// primes up to `exact_limit` that the table covers.
pub fn congruence_from_table(
    t: &IterateTable,
    k: usize,
    p_lo: u64,
    p_hi: u64,
    exact_limit: u64,
    ext: Option<&LevelRecurrence>,
) -> Result<CongruenceReport, SeqError> {
    if p_lo > p_hi {
        return Err(SeqError::InvalidRange { lo: p_lo, hi: p_hi });
    }
    let exact = primes_between(p_lo, p_hi.min(exact_limit))
        .into_iter()
        .filter_map(|p| t.u(k, p).map(|u| (p, u.clone())))
        .collect();
    assemble(k, (p_lo, p_hi), exact, ext)
}
