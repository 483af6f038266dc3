//! The iterated fractional-part transform `x ↦ θⁿ·(x − [x])` on `Z[θ]`.
//!
//! Level 0 of row `n` is `θⁿ`; level `k + 1` is `θⁿ·(I^k(θⁿ) − [I^k(θⁿ)])`.
//! Every level stays in `Z[θ]`, so the only inexact step is rounding, which
//! is certified by [`NumberField::round_certified`].

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalRepr};
use crate::numfield::{FieldElement, NumFieldError, NumberField};

/// Relative accuracy of stored fractional-part magnitudes.
pub const FRAC_REL_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("level {k}, exponent {n}: {source}")]
    Cell {
        k: usize,
        n: u64,
        #[source]
        source: NumFieldError,
    },
    #[error("level {k} exceeds the table's k_max = {k_max}")]
    LevelOutOfRange { k: usize, k_max: usize },
    #[error("invalid exponent range {lo}..={hi}")]
    InvalidRange { lo: u64, hi: u64 },
}

/// One step: returns `(θⁿ·(x − [x]), [x])`.
pub fn iterate_once(f: &NumberField, n: u64, x: &FieldElement) -> Result<(FieldElement, BigInt), NumFieldError> {
    let theta_n = f.theta_power(n);
    iterate_with_power(f, &theta_n, x).map(|(next, u, _)| (next, u))
}

/// Like [`iterate_once`] with `θⁿ` supplied; also returns the fractional
/// part `x − [x]`.
pub fn iterate_with_power(
    f: &NumberField,
    theta_n: &FieldElement,
    x: &FieldElement,
) -> Result<(FieldElement, BigInt, FieldElement), NumFieldError> {
    let u = f.nearest_integer(x)?;
    let frac = f.sub_int(x, &u);
    Ok((f.mul(theta_n, &frac), u, frac))
}

#[derive(Debug, Clone)]
pub struct Cell {
    /// `I^k(θⁿ)`, exact.
    pub element: FieldElement,
    /// `u^k_n = [I^k(θⁿ)]`.
    pub integer_part: BigInt,
    /// Enclosure of `|I^k(θⁿ) − u^k_n|`, inside `[0, 1/2]`.
    pub frac_magnitude: Interval,
}

impl Cell {
    pub fn frac_element(&self, f: &NumberField) -> FieldElement {
        f.sub_int(&self.element, &self.integer_part)
    }
}

/// `u^k_n` and fractional magnitudes for `k ≤ k_max`, `n ∈ [n_lo, n_hi]`.
#[derive(Debug, Clone)]
pub struct IterateTable {
    field: Arc<NumberField>,
    k_max: usize,
    n_lo: u64,
    n_hi: u64,
    /// `rows[n − n_lo][k]`; a failed rounding ends its row early and is
    /// recorded in `errors`.
    rows: Vec<Vec<Cell>>,
    errors: Vec<TransformError>,
}

fn clamp_half(iv: Interval) -> Interval {
    let p = iv.prec();
    let half = BigInt::one() << (p as usize - 1);
    let hi = iv.hi_scaled().clone().min(half);
    let lo = iv.lo_scaled().clone().min(hi.clone());
    Interval::from_scaled(lo, hi, p)
}

/// Levels `0..=k_max` at exponent `n`. Stops at the first rounding failure and
/// returns the cells computed so far together with the error.
pub fn iterate_row(f: &NumberField, k_max: usize, n: u64) -> (Vec<Cell>, Option<TransformError>) {
    let theta_n = f.theta_power(n);
    let mut x = theta_n.clone();
    let mut cells = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let step = f.round_certified(&x).and_then(|(u, _)| {
            let frac = f.sub_int(&x, &u);
            let mag = f.abs_enclosure(&frac, FRAC_REL_BITS)?;
            Ok((u, frac, mag))
        });
        match step {
            Ok((u, frac, mag)) => {
                let next = if k < k_max { Some(f.mul(&theta_n, &frac)) } else { None };
                cells.push(Cell { element: x, integer_part: u, frac_magnitude: clamp_half(mag) });
                match next {
                    Some(nx) => x = nx,
                    None => break,
                }
            }
            Err(e) => return (cells, Some(TransformError::Cell { k, n, source: e })),
        }
    }
    (cells, None)
}

/// Applies the transform `k_max` times to every `θⁿ`, `n_lo ≤ n ≤ n_hi`.
/// Rows are computed in parallel; a rounding failure truncates only its row.
pub fn build_table(f: Arc<NumberField>, k_max: usize, n_lo: u64, n_hi: u64) -> Result<IterateTable, TransformError> {
    if n_lo < 1 || n_lo > n_hi {
        return Err(TransformError::InvalidRange { lo: n_lo, hi: n_hi });
    }
    let results: Vec<(Vec<Cell>, Option<TransformError>)> =
        (n_lo..=n_hi).into_par_iter().map(|n| iterate_row(&f, k_max, n)).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    for (cells, err) in results {
        rows.push(cells);
        errors.extend(err);
    }
    Ok(IterateTable { field: f, k_max, n_lo, n_hi, rows, errors })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: usize,
    pub n: u64,
    pub u: String,
    pub frac: IntervalRepr,
}

impl IterateTable {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn n_range(&self) -> (u64, u64) {
        (self.n_lo, self.n_hi)
    }

    pub fn errors(&self) -> &[TransformError] {
        &self.errors
    }

    pub fn cell(&self, k: usize, n: u64) -> Option<&Cell> {
        if n < self.n_lo || n > self.n_hi {
            return None;
        }
        self.rows[(n - self.n_lo) as usize].get(k)
    }

    /// `u^k_n`, if the cell was computed.
    pub fn u(&self, k: usize, n: u64) -> Option<&BigInt> {
        self.cell(k, n).map(|c| &c.integer_part)
    }

    /// `(n, u^k_n)` over the longest run of computed cells ending at `n_hi`.
    pub fn level(&self, k: usize) -> Vec<(u64, BigInt)> {
        let mut out: Vec<(u64, BigInt)> = Vec::new();
        for n in (self.n_lo..=self.n_hi).rev() {
            match self.u(k, n) {
                Some(u) => out.push((n, u.clone())),
                None => break,
            }
        }
        out.reverse();
        out
    }

    /// The integer sequence at level `k` (see [`IterateTable::level`]) and the
    /// exponent of its first term.
    pub fn level_sequence(&self, k: usize) -> (u64, Vec<BigInt>) {
        let lv = self.level(k);
        let start = lv.first().map_or(self.n_hi + 1, |(n, _)| *n);
        (start, lv.into_iter().map(|(_, u)| u).collect())
    }

    pub fn rows(&self, digits: usize) -> Vec<TableRow> {
        let mut out = Vec::new();
        for k in 0..=self.k_max {
            for n in self.n_lo..=self.n_hi {
                if let Some(c) = self.cell(k, n) {
                    out.push(TableRow {
                        k,
                        n,
                        u: c.integer_part.to_string(),
                        frac: c.frac_magnitude.to_repr(digits),
                    });
                }
            }
        }
        out
    }
}

/// Certified-order status between consecutive magnitudes `m_n` and `m_{n+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Decrease,
    Increase,
    /// Equal and nonzero.
    Equal,
    /// Both exactly zero.
    Plateau,
    /// Refinement reached the precision cap without separating them.
    Incomparable,
    /// One of the cells is missing.
    Missing,
}

#[derive(Debug, Clone)]
pub struct MagnitudeEntry {
    pub n: u64,
    pub magnitude: Option<Interval>,
    /// Order relation to the next entry (absent for the last one).
    pub step_to_next: Option<Step>,
}

fn is_exact_zero(iv: &Interval) -> bool {
    iv.is_point() && iv.lo_scaled().is_zero()
}

/// `|I^k(θⁿ) − [I^k(θⁿ)]|` in `n` order, with each adjacent pair refined until
/// the two enclosures are disjoint, known equal, or flagged incomparable.
pub fn frac_magnitudes(t: &IterateTable, k: usize) -> Result<Vec<MagnitudeEntry>, TransformError> {
    if k > t.k_max {
        return Err(TransformError::LevelOutOfRange { k, k_max: t.k_max });
    }
    let f = &t.field;
    let ns: Vec<u64> = (t.n_lo..=t.n_hi).collect();
    let mut mags: Vec<Option<Interval>> = ns.iter().map(|&n| t.cell(k, n).map(|c| c.frac_magnitude.clone())).collect();
    let mut steps = vec![None; ns.len()];
    for i in 0..ns.len().saturating_sub(1) {
        let (Some(a), Some(b)) = (t.cell(k, ns[i]), t.cell(k, ns[i + 1])) else {
            steps[i] = Some(Step::Missing);
            continue;
        };
        let (ma, mb) = (mags[i].clone().unwrap(), mags[i + 1].clone().unwrap());
        if is_exact_zero(&ma) && is_exact_zero(&mb) {
            steps[i] = Some(Step::Plateau);
            continue;
        }
        let fa = a.frac_element(f);
        let fb = b.frac_element(f);
        // power-basis coordinates are unique, so |a| = |b| iff a = ±b
        let neg_fb = f.sub(&f.zero(), &fb);
        if fa == fb || fa == neg_fb {
            steps[i] = Some(Step::Equal);
            continue;
        }
        let (mut ra, mut rb) = (ma, mb);
        let mut rel = FRAC_REL_BITS;
        let step = loop {
            match rb.certified_cmp(&ra) {
                Some(std::cmp::Ordering::Less) => break Step::Decrease,
                Some(std::cmp::Ordering::Greater) => break Step::Increase,
                _ => {}
            }
            rel *= 2;
            match (f.abs_enclosure(&fa, rel), f.abs_enclosure(&fb, rel)) {
                (Ok(x), Ok(y)) => {
                    ra = clamp_half(x);
                    rb = clamp_half(y);
                }
                _ => break Step::Incomparable,
            }
            if rel > f.config().cap_bits {
                break Step::Incomparable;
            }
        };
        mags[i] = Some(ra);
        mags[i + 1] = Some(rb);
        steps[i] = Some(step);
    }
    Ok(ns
        .into_iter()
        .zip(mags)
        .zip(steps)
        .map(|((n, magnitude), step_to_next)| MagnitudeEntry { n, magnitude, step_to_next })
        .collect())
}

/// Upper bound on `|I^k(θⁿ) − u|` as a rational, for diagnostics.
pub fn frac_upper(c: &Cell) -> BigRational {
    c.frac_magnitude.hi()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigpoly::IntPolynomial;

    fn field(c: &[i64]) -> Arc<NumberField> {
        Arc::new(NumberField::new(IntPolynomial::from_i64(c)).unwrap())
    }

    #[test]
    fn iterate_once_examples() {
        let f = field(&[-1, -1, 1]);
        let x = f.theta_power(2);
        let (next, u) = iterate_once(&f, 2, &x).unwrap();
        assert_eq!(u, BigInt::from(3));
        assert_eq!(next, f.from_int(-1));

        let c = f.from_int(17);
        let (next, u) = iterate_once(&f, 5, &c).unwrap();
        assert_eq!(u, BigInt::from(17));
        assert!(next.is_zero());

        let plastic = field(&[-1, -1, 0, 1]);
        let (_, u) = iterate_once(&plastic, 7, &plastic.theta_power(7)).unwrap();
        assert_eq!(u, BigInt::from(7));
    }

    #[test]
    fn golden_first_level_alternates() {
        let t = build_table(field(&[-1, -1, 1]), 1, 2, 6).unwrap();
        let row: Vec<i64> = (2..=6).map(|n| t.u(1, n).unwrap().try_into().unwrap()).collect();
        assert_eq!(row, vec![-1, 1, -1, 1, -1]);
    }

    #[test]
    fn level_zero_only() {
        let t = build_table(field(&[-1, -1, 1]), 0, 1, 5).unwrap();
        let row: Vec<i64> = (1..=5).map(|n| t.u(0, n).unwrap().try_into().unwrap()).collect();
        // [φⁿ]: 1.618, 2.618, 4.236, 6.854, 11.09
        assert_eq!(row, vec![2, 3, 4, 7, 11]);
        assert!(t.cell(1, 3).is_none());
    }

    #[test]
    fn minus_a0_power_law_for_x2_3x_1() {
        let t = build_table(field(&[1, -3, 1]), 1, 2, 6).unwrap();
        assert!((2..=6).all(|n| t.u(1, n) == Some(&BigInt::from(-1))));
    }

    #[test]
    fn golden_magnitudes_decrease() {
        let t = build_table(field(&[-1, -1, 1]), 0, 2, 5).unwrap();
        let m = frac_magnitudes(&t, 0).unwrap();
        let vals: Vec<f64> = m.iter().map(|e| e.magnitude.as_ref().unwrap().mid_f64()).collect();
        let expect = [0.381966, 0.236068, 0.145898, 0.090170];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-6);
        }
        assert!(m[..3].iter().all(|e| e.step_to_next == Some(Step::Decrease)));
    }

    #[test]
    fn integer_elements_have_zero_magnitude() {
        let t = build_table(field(&[-1, -1, 1]), 2, 2, 8).unwrap();
        let m = frac_magnitudes(&t, 1).unwrap();
        assert!(m.iter().all(|e| is_exact_zero(e.magnitude.as_ref().unwrap())));
        assert!(m[..m.len() - 1].iter().all(|e| e.step_to_next == Some(Step::Plateau)));
    }

    #[test]
    fn plastic_magnitudes_oscillate_early() {
        let t = build_table(field(&[-1, -1, 0, 1]), 0, 1, 20).unwrap();
        let m = frac_magnitudes(&t, 0).unwrap();
        assert!(m.iter().any(|e| e.step_to_next == Some(Step::Increase)));
    }

    #[test]
    fn cells_reproduce_under_independent_high_precision_rounding() {
        let f = field(&[1, 0, -2, -1, 1]);
        let t = build_table(f.clone(), 3, 1, 40).unwrap();
        for k in 0..=3 {
            for n in 1..=40 {
                let c = t.cell(k, n).unwrap();
                let iv = f.eval_interval(&c.element, 4096);
                let z = (iv.mid() + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
                assert_eq!(z, c.integer_part);
                assert!(c.frac_magnitude.hi() <= BigRational::new(BigInt::one(), BigInt::from(2)));
            }
        }
    }

    #[test]
    fn bad_ranges() {
        let f = field(&[-1, -1, 1]);
        assert!(build_table(f.clone(), 1, 0, 3).is_err());
        assert!(build_table(f.clone(), 1, 5, 3).is_err());
        let t = build_table(f, 1, 1, 3).unwrap();
        assert!(matches!(frac_magnitudes(&t, 2), Err(TransformError::LevelOutOfRange { .. })));
    }

    #[test]
    fn rounding_failures_truncate_rows() {
        let mut nf = NumberField::new(IntPolynomial::from_i64(&[-1, -1, 1])).unwrap();
        nf.set_config(crate::numfield::PrecisionConfig { start_bits: 64, cap_bits: 256, root_cap_bits: 4096 });
        let t = build_table(Arc::new(nf), 3, 1, 400).unwrap();
        assert!(!t.errors().is_empty());
        assert!(t.u(0, 10).is_some());
        assert!(t.u(0, 400).is_none());
        assert!(matches!(t.errors()[0], TransformError::Cell { .. }));
    }
}
