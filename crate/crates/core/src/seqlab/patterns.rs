//! Tail patterns of a single level: constant or parity-alternating `±1`, and
//! eventual strict decrease of the fractional magnitudes.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::SeqError;
use crate::transform::{frac_magnitudes, IterateTable, Step};

/// Shortest tail accepted as a constant or alternating pattern.
pub const MIN_PATTERN_TAIL: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstantVerdict {
    Constant { value: i8, onset: u64 },
    /// `odd` at odd exponents, `even` at even ones, with `odd = −even`.
    Alternating { odd: i8, even: i8, onset: u64 },
    None,
}

fn unit(v: &BigInt) -> Option<i8> {
    if v.abs().is_one() {
        Some(if v.is_positive() { 1 } else { -1 })
    } else {
        None
    }
}

/// Classifies the tail of `u^k_n` over the table's exponent range.
pub fn constant_detect(t: &IterateTable, k: usize) -> ConstantVerdict {
    let level = t.level(k);
    let vals: Vec<(u64, Option<i8>)> = level.iter().map(|(n, u)| (*n, unit(u))).collect();
    let Some(&(n_last, Some(last))) = vals.last() else {
        return ConstantVerdict::None;
    };
    let constant = vals.iter().rev().take_while(|(_, v)| *v == Some(last)).count();
    let alt_at = |n: u64| if (n_last - n).is_multiple_of(2) { last } else { -last };
    let alternating = vals.iter().rev().take_while(|(n, v)| *v == Some(alt_at(*n))).count();
    let onset = |run: usize| vals[vals.len() - run].0;
    if constant >= MIN_PATTERN_TAIL && constant >= alternating {
        ConstantVerdict::Constant { value: last, onset: onset(constant) }
    } else if alternating >= MIN_PATTERN_TAIL {
        let odd = if n_last % 2 == 1 { last } else { -last };
        ConstantVerdict::Alternating { odd, even: -odd, onset: onset(alternating) }
    } else {
        ConstantVerdict::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub sigma: u64,
    pub nu: u64,
    pub class: Step,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub lambda: usize,
    pub range: (u64, u64),
    /// Smallest `n` from which the magnitudes strictly decrease, allowing the
    /// tail to end in exact zeros.
    pub onset_estimate: Option<u64>,
    /// Every adjacent pair that is not a certified strict decrease.
    pub violations: Vec<Violation>,
}

impl ConvergenceReport {
    /// Violations at or after the onset; all are exact-zero plateaus when the
    /// onset exists.
    pub fn violations_after_onset(&self) -> Vec<Violation> {
        let Some(on) = self.onset_estimate else {
            return self.violations.clone();
        };
        self.violations.iter().filter(|v| v.sigma >= on).copied().collect()
    }

    /// True when the magnitudes decrease strictly from the onset on, with no
    /// zero plateau.
    pub fn strictly_monotone_tail(&self) -> bool {
        self.onset_estimate.is_some() && self.violations_after_onset().is_empty()
    }
}

pub fn convergence_check(t: &IterateTable, lambda: usize) -> Result<ConvergenceReport, SeqError> {
    let entries = frac_magnitudes(t, lambda).map_err(SeqError::Transform)?;
    let steps: Vec<(u64, Step)> = entries.iter().filter_map(|e| e.step_to_next.map(|s| (e.n, s))).collect();
    if let Some(&(n, _)) = steps.iter().find(|(_, s)| *s == Step::Incomparable) {
        return Err(SeqError::IncomparableMagnitudes { lambda, n });
    }
    // tail shape: Decrease* Plateau*
    let mut i = steps.len();
    while i > 0 && steps[i - 1].1 == Step::Plateau {
        i -= 1;
    }
    while i > 0 && steps[i - 1].1 == Step::Decrease {
        i -= 1;
    }
    let (n_lo, n_hi) = t.n_range();
    let onset_estimate = steps.get(i).map(|s| s.0);
    let violations = steps
        .iter()
        .filter(|(_, s)| *s != Step::Decrease)
        .map(|&(n, s)| Violation { sigma: n, nu: n + 1, class: s })
        .collect();
    Ok(ConvergenceReport { lambda, range: (n_lo, n_hi), onset_estimate, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigpoly::IntPolynomial;
    use crate::numfield::NumberField;
    use crate::transform::build_table;
    use std::sync::Arc;

    fn table(c: &[i64], k: usize, lo: u64, hi: u64) -> IterateTable {
        build_table(Arc::new(NumberField::new(IntPolynomial::from_i64(c)).unwrap()), k, lo, hi).unwrap()
    }

    #[test]
    fn golden_converges_from_the_start() {
        let r = convergence_check(&table(&[-1, -1, 1], 0, 2, 60), 0).unwrap();
        assert_eq!(r.onset_estimate, Some(2));
        assert!(r.violations.is_empty());
        assert!(r.strictly_monotone_tail());
    }

    #[test]
    fn zero_magnitudes_form_a_plateau() {
        let r = convergence_check(&table(&[-1, -1, 1], 1, 2, 20), 1).unwrap();
        assert_eq!(r.onset_estimate, Some(2));
        assert_eq!(r.violations.len(), 18);
        assert!(r.violations.iter().all(|v| v.class == Step::Plateau));
        assert!(!r.strictly_monotone_tail());
    }

    #[test]
    fn plastic_has_a_late_onset() {
        let r = convergence_check(&table(&[-1, -1, 0, 1], 0, 1, 60), 0).unwrap();
        let on = r.onset_estimate.unwrap();
        assert!(on > 1 && on <= 60);
        assert!(r.violations.iter().any(|v| v.class == Step::Increase && v.sigma < on));
        assert!(r.violations_after_onset().is_empty());
    }

    #[test]
    fn golden_first_level_alternates() {
        let v = constant_detect(&table(&[-1, -1, 1], 1, 2, 30), 1);
        assert_eq!(v, ConstantVerdict::Alternating { odd: 1, even: -1, onset: 2 });
    }

    #[test]
    fn unit_constant_term_gives_a_constant() {
        // −a₀ⁿ = −1 for x² − 3x + 1
        let v = constant_detect(&table(&[1, -3, 1], 1, 2, 30), 1);
        assert_eq!(v, ConstantVerdict::Constant { value: -1, onset: 2 });
    }

    #[test]
    fn growing_rows_have_no_constant() {
        assert_eq!(constant_detect(&table(&[-1, -1, 1], 0, 1, 30), 0), ConstantVerdict::None);
        assert_eq!(constant_detect(&table(&[-1, -1, 1], 2, 2, 30), 2), ConstantVerdict::None);
    }
}
