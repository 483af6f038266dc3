//! Fixed-point dyadic interval arithmetic with outward rounding.
//!
//! An [`Interval`] at precision `p` is the closed set `[lo/2^p, hi/2^p]` with
//! big-integer endpoints. Every operation rounds its lower endpoint toward
//! −∞ and its upper endpoint toward +∞, so the result always encloses the
//! exact image of the operands.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

/// Serialisable form: decimal endpoints rounded outward, plus the working
/// precision in bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalRepr {
    pub lo: String,
    pub hi: String,
    pub bits: u32,
}

fn floor_shr(x: &BigInt, k: u64) -> BigInt {
    // BigInt >> rounds toward −∞ for negative values
    x >> k
}

fn ceil_shr(x: &BigInt, k: u64) -> BigInt {
    -((-x) >> k)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -(-a).div_floor(b)
}

fn ceil_sqrt(x: &BigInt) -> BigInt {
    let s = x.sqrt();
    if &s * &s == *x {
        s
    } else {
        s + 1
    }
}

impl Interval {
    /// The exact integer `v` at precision `prec`.
    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        let m = v << prec as usize;
        Interval { lo: m.clone(), hi: m, prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(v), prec)
    }

    /// Encloses the rational `r` at precision `prec`.
    pub fn from_ratio(r: &BigRational, prec: u32) -> Self {
        let num = r.numer() << prec as usize;
        let den = r.denom();
        Interval { lo: num.div_floor(den), hi: ceil_div(&num, den), prec }
    }

    /// `[lo/2^prec, hi/2^prec]`; panics if `lo > hi`.
    pub fn from_scaled(lo: BigInt, hi: BigInt, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, prec }
    }

    /// Hull of two rationals, in either order.
    pub fn hull_of(a: &BigRational, b: &BigRational, prec: u32) -> Self {
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        let lo = Self::from_ratio(x, prec).lo;
        let hi = Self::from_ratio(y, prec).hi;
        Interval { lo, hi, prec }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn lo_scaled(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_scaled(&self) -> &BigInt {
        &self.hi
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec as usize)
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec as usize)
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, BigInt::one() << (self.prec as usize + 1))
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, BigInt::one() << self.prec as usize)
    }

    /// `hi − lo` in units of `2^-prec`.
    pub fn width_ulps(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.lo() <= *r && *r <= self.hi()
    }

    /// `self ⊆ other` as real sets.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo() <= self.lo() && self.hi() <= other.hi()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified comparison: `Some` only when the intervals are disjoint
    /// (or identical points).
    pub fn certified_cmp(&self, other: &Interval) -> Option<Ordering> {
        if self.hi() < other.lo() {
            Some(Ordering::Less)
        } else if self.lo() > other.hi() {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo() == other.lo() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Re-expresses the interval at precision `p`, rounding outward when
    /// precision drops.
    pub fn with_prec(&self, p: u32) -> Self {
        match p.cmp(&self.prec) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = (p - self.prec) as usize;
                Interval { lo: &self.lo << s, hi: &self.hi << s, prec: p }
            }
            Ordering::Less => {
                let s = (self.prec - p) as u64;
                Interval { lo: floor_shr(&self.lo, s), hi: ceil_shr(&self.hi, s), prec: p }
            }
        }
    }

    fn aligned(&self, other: &Interval) -> (Interval, Interval) {
        let p = self.prec.max(other.prec);
        (self.with_prec(p), other.with_prec(p))
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval { lo: a.lo + b.lo, hi: a.hi + b.hi, prec: a.prec }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        Interval { lo: a.lo - b.hi, hi: a.hi - b.lo, prec: a.prec }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }

    pub fn add_int(&self, v: &BigInt) -> Interval {
        let m = v << self.prec as usize;
        Interval { lo: &self.lo + &m, hi: &self.hi + &m, prec: self.prec }
    }

    /// Exact product with an integer.
    pub fn mul_int(&self, v: &BigInt) -> Interval {
        let (a, b) = (&self.lo * v, &self.hi * v);
        if v.is_negative() {
            Interval { lo: b, hi: a, prec: self.prec }
        } else {
            Interval { lo: a, hi: b, prec: self.prec }
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let (a, b) = self.aligned(other);
        let p = a.prec as u64;
        let cands = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = cands.iter().min().unwrap();
        let max = cands.iter().max().unwrap();
        Interval { lo: floor_shr(min, p), hi: ceil_shr(max, p), prec: a.prec }
    }

    pub fn square(&self) -> Interval {
        let p = self.prec as u64;
        let l2 = &self.lo * &self.lo;
        let h2 = &self.hi * &self.hi;
        let lo = if self.contains_zero() { BigInt::zero() } else { floor_shr(&l2.clone().min(h2.clone()), p) };
        Interval { lo, hi: ceil_shr(&l2.max(h2), p), prec: self.prec }
    }

    /// Quotient; `None` when the divisor contains zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let (a, b) = self.aligned(other);
        let p = a.prec as usize;
        let nums = [&a.lo << p, &a.hi << p];
        let dens = [&b.lo, &b.hi];
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for n in &nums {
            for d in dens {
                let f = n.div_floor(d);
                let c = ceil_div(n, d);
                lo = Some(lo.map_or(f.clone(), |x| x.min(f)));
                hi = Some(hi.map_or(c.clone(), |x| x.max(c)));
            }
        }
        Some(Interval { lo: lo.unwrap(), hi: hi.unwrap(), prec: a.prec })
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            Interval { lo: BigInt::zero(), hi: (-&self.lo).max(self.hi.clone()), prec: self.prec }
        }
    }

    /// Square root of the non-negative part; `None` if entirely negative.
    pub fn sqrt(&self) -> Option<Interval> {
        if self.hi.is_negative() {
            return None;
        }
        let p = self.prec as usize;
        let lo = if self.lo.is_positive() { (&self.lo << p).sqrt() } else { BigInt::zero() };
        let hi = ceil_sqrt(&(&self.hi << p));
        Some(Interval { lo, hi, prec: self.prec })
    }

    /// Natural logarithm; `None` unless the interval is strictly positive.
    pub fn ln(&self) -> Option<Interval> {
        if !self.lo.is_positive() {
            return None;
        }
        let lo = ln_bounds(&self.lo, self.prec).0;
        let hi = ln_bounds(&self.hi, self.prec).1;
        Some(Interval { lo, hi, prec: self.prec })
    }

    pub fn to_repr(&self, digits: usize) -> IntervalRepr {
        IntervalRepr {
            lo: format_rational(&self.lo(), digits, Rounding::Down),
            hi: format_rational(&self.hi(), digits, Rounding::Up),
            bits: self.prec,
        }
    }

    /// Midpoint as an `f64`, for display and diagnostics only.
    pub fn mid_f64(&self) -> f64 {
        ratio_to_f64(&self.mid())
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_repr(20);
        write!(f, "[{}, {}]@{}", r.lo, r.hi, r.bits)
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    // scale to keep both parts inside f64 range
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb - db) - 60;
    let scaled = if shift > 0 {
        r.numer().clone() / (r.denom() << shift as usize)
    } else {
        (r.numer() << (-shift) as usize) / r.denom()
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Down,
    Up,
}

/// Significant decimal digits worth printing for `bits` bits of precision.
pub fn digits_for(bits: u32) -> usize {
    (bits as usize * 30103).div_ceil(100000) + 2
}

/// Decimal rendering with `digits` significant digits, rounded in the given
/// direction. Plain notation for moderate magnitudes, scientific otherwise.
pub fn format_rational(r: &BigRational, digits: usize, dir: Rounding) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    if r.is_integer() && r.numer().bits() <= 200 {
        return r.numer().to_string();
    }
    let digits = digits.max(1);
    // estimate of floor(log10 |r|)
    let bits = r.numer().bits() as i64 - r.denom().bits() as i64;
    let e10 = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64;
    let scale_exp = digits as i64 - 1 - e10;
    let ten = BigInt::from(10);
    let scaled = if scale_exp >= 0 {
        r * BigRational::from_integer(num_traits::pow(ten, scale_exp as usize))
    } else {
        r / BigRational::from_integer(num_traits::pow(ten, (-scale_exp) as usize))
    };
    let n = match dir {
        Rounding::Down => scaled.floor().to_integer(),
        Rounding::Up => scaled.ceil().to_integer(),
    };
    let neg = n.is_negative();
    let s = n.abs().to_string();
    if s == "0" {
        // happens only for tiny magnitudes rounded toward zero
        return "0".to_string();
    }
    // value = n · 10^{-scale_exp}
    let exp = -scale_exp + s.len() as i64 - 1;
    let mantissa_digits = s.trim_end_matches('0');
    let mantissa_digits = if mantissa_digits.is_empty() { "0" } else { mantissa_digits };
    let sign = if neg { "-" } else { "" };
    if (-5..21).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if mantissa_digits.len() <= int_len {
                format!("{sign}{}{}", mantissa_digits, "0".repeat(int_len - mantissa_digits.len()))
            } else {
                format!("{sign}{}.{}", &mantissa_digits[..int_len], &mantissa_digits[int_len..])
            }
        } else {
            format!("{sign}0.{}{}", "0".repeat((-exp - 1) as usize), mantissa_digits)
        }
    } else {
        let (head, tail) = mantissa_digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }
}

/// Lower and upper bounds, at precision `prec`, for `ln(m / 2^prec)`, `m > 0`.
fn ln_bounds(m: &BigInt, prec: u32) -> (BigInt, BigInt) {
    const GUARD: u32 = 64;
    let w = prec + GUARD;
    // m / 2^prec = y · 2^e with y ∈ [1, 2)
    let e = m.bits() as i64 - 1 - prec as i64;
    // y = m / 2^{bits-1}, exact rational
    let y_num = m.clone();
    let y_den = BigInt::one() << (m.bits() as usize - 1);
    // z = (y − 1)/(y + 1) ∈ [0, 1/3)
    let z_num = &y_num - &y_den;
    let z_den = &y_num + &y_den;
    let (s_lo, s_hi) = atanh_bounds(&z_num, &z_den, w);
    let (l2_lo, l2_hi) = atanh_bounds(&BigInt::one(), &BigInt::from(3), w);
    // ln x = 2·atanh(z) + 2e·atanh(1/3)
    let e_big = BigInt::from(e);
    let (ln2_part_lo, ln2_part_hi) = if e >= 0 {
        (&l2_lo * &e_big, &l2_hi * &e_big)
    } else {
        (&l2_hi * &e_big, &l2_lo * &e_big)
    };
    let lo = (s_lo + ln2_part_lo) * 2;
    let hi = (s_hi + ln2_part_hi) * 2;
    (floor_shr(&lo, GUARD as u64), ceil_shr(&hi, GUARD as u64))
}

/// Bounds on `atanh(num/den)` at fixed-point precision `w`, for
/// `0 ≤ num/den ≤ 1/3`.
fn atanh_bounds(num: &BigInt, den: &BigInt, w: u32) -> (BigInt, BigInt) {
    if num.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let w = w as usize;
    // every quantity below is a floor, hence a lower estimate
    let z = (num << w).div_floor(den);
    let z2 = (&z * &z) >> w;
    let mut pow = z.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    let two = BigInt::from(2);
    while pow >= two {
        sum += &pow / BigInt::from(2 * k + 1);
        pow = (&pow * &z2) >> w;
        k += 1;
    }
    // Each truncated term is low by at most 4 ulps (the power error stays
    // below 3 ulps because z² < 1/9); the tail after stopping is < 4 ulps.
    let slack = BigInt::from(4 * (k + 2));
    (sum.clone(), sum + slack)
}
