//! Dense integer polynomials, coefficient-symmetry classification, and the
//! polynomial families whose roots are the Pisot limit points studied here.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division leaves a nonzero remainder")]
    NonExactDivision,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomials have different degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),
    #[error("cannot parse coefficient {0:?}")]
    Parse(String),
}

/// Polynomial with arbitrary-precision integer coefficients, stored in
/// ascending degree order. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        Self::term(BigInt::one(), k)
    }

    /// `c·x^k`
    pub fn term(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// Parses a comma-separated ascending list of decimal coefficients,
    /// e.g. `"-1,-1,1"` for `x² − x − 1`.
    pub fn parse_ascending(s: &str) -> Result<Self, PolyError> {
        let coeffs = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                t.parse::<BigInt>().map_err(|_| PolyError::Parse(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn from_decimal_strings(items: &[String]) -> Result<Self, PolyError> {
        let coeffs = items
            .iter()
            .map(|t| t.trim().parse::<BigInt>().map_err(|_| PolyError::Parse(t.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(coeffs))
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    /// `x^n P(1/x)` for `n = deg P`.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Multiplies by −1 if needed so the leading coefficient is positive.
    pub fn sign_normalized(self) -> Self {
        match self.leading() {
            Some(l) if l.is_negative() => -self,
            _ => self,
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Exact value at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `2^{shift·deg} · P(m / 2^shift)`, an integer with the sign of `P(m/2^shift)`.
    pub fn eval_dyadic_scaled(&self, m: &BigInt, shift: u64) -> BigInt {
        let Some(deg) = self.degree() else {
            return BigInt::zero();
        };
        // Horner on the homogenised form: acc = Σ a_i m^i 2^{shift(deg-i)}
        let mut acc = BigInt::zero();
        for (idx, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * m + (c << (shift as usize * (deg - idx)));
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| {
            acc * x + num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN)
        })
    }

    /// Quotient and remainder for a monic (or unit-leading) divisor.
    pub fn div_rem(&self, den: &Self) -> Result<(Self, Self), PolyError> {
        let dd = den.degree().ok_or(PolyError::DivisionByZero)?;
        let lead = den.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return Err(PolyError::NonExactDivision);
            }
            for (j, d) in den.coeffs.iter().enumerate() {
                rem[i + j] -= &q * d;
            }
            quot[i] = q;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Quotient of an exact division; fails if the remainder is nonzero.
    pub fn exact_div(&self, den: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.div_rem(den)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::NonExactDivision)
        }
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(a: &IntPolynomial, b: &IntPolynomial, op: ArithOp) -> IntPolynomial {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    }
}

pub fn poly_exact_div(num: &IntPolynomial, den: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    num.exact_div(den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryClass {
    Palindromic,
    AntiPalindromic,
    SemiPalindromic,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairRelation {
    Reciprocal,
    AntiReciprocal,
    SemiReciprocal,
    None,
}

/// Coefficient symmetry of a single polynomial, tested in the order
/// palindromic, anti-palindromic, semi-palindromic.
///
/// The semi-palindromic test asks `a_i = −a_{n−i}` for even `i < n` and
/// `a_i = a_{n−i}` for odd `i`. The extra requirement `a_n = a_0` that a
/// literal reading adds would contradict `a_0 = −a_n`, so it is not imposed.
pub fn classify_symmetry(p: &IntPolynomial) -> SymmetryClass {
    let Some(n) = p.degree() else {
        return SymmetryClass::None;
    };
    let a = |i: usize| p.coeff(i);
    if (0..=n).all(|i| a(i) == a(n - i)) {
        SymmetryClass::Palindromic
    } else if (0..=n).all(|i| a(i) == -a(n - i)) {
        SymmetryClass::AntiPalindromic
    } else if (0..=n).all(|i| {
        if i % 2 == 1 {
            a(i) == a(n - i)
        } else if i < n {
            a(i) == -a(n - i)
        } else {
            true
        }
    }) {
        SymmetryClass::SemiPalindromic
    } else {
        SymmetryClass::None
    }
}

/// Reciprocity relation between two polynomials of equal degree.
///
/// Semi-reciprocity uses the same reading as [`classify_symmetry`]:
/// `a_i = −b_{n−i}` for even `i < n` and `a_i = b_{n−i}` for odd `i`, without
/// the endpoint clause `a_n = b_0, a_0 = b_n` (it contradicts the `i = 0`
/// case). Since that reading is not symmetric in `P` and `Q` when `n` is
/// even, both directions must hold.
pub fn classify_pair(p: &IntPolynomial, q: &IntPolynomial) -> Result<PairRelation, PolyError> {
    let (dp, dq) = (p.degree().unwrap_or(0), q.degree().unwrap_or(0));
    if dp != dq || p.is_zero() != q.is_zero() {
        return Err(PolyError::DegreeMismatch(dp, dq));
    }
    let n = dp;
    let a = |i: usize| p.coeff(i);
    let b = |i: usize| q.coeff(i);
    if (0..=n).all(|i| a(i) == b(n - i)) {
        return Ok(PairRelation::Reciprocal);
    }
    if (0..=n).all(|i| a(i) == -b(n - i)) {
        return Ok(PairRelation::AntiReciprocal);
    }
    let semi = |a: &dyn Fn(usize) -> BigInt, b: &dyn Fn(usize) -> BigInt| {
        (0..=n).all(|i| {
            if i % 2 == 1 {
                a(i) == b(n - i)
            } else if i < n {
                a(i) == -b(n - i)
            } else {
                true
            }
        })
    };
    if semi(&a, &b) && semi(&b, &a) {
        return Ok(PairRelation::SemiReciprocal);
    }
    Ok(PairRelation::None)
}

/// `x^{n+1} − 2xⁿ + x − 1`, whose dominant root is the limit point αₙ.
pub fn alpha_poly(n: usize) -> IntPolynomial {
    assert!(n >= 1, "alpha_poly requires n >= 1");
    // 1 − x + xⁿ(2 − x), negated
    let base = IntPolynomial::from_i64(&[1, -1]);
    let tail = &IntPolynomial::monomial(n) * &IntPolynomial::from_i64(&[2, -1]);
    (&base + &tail).sign_normalized()
}

/// `(x^{n+2} − 2x^{n+1} + 1)/(x − 1)`, whose dominant root is βₙ.
pub fn beta_poly(n: usize) -> IntPolynomial {
    assert!(n >= 1, "beta_poly requires n >= 1");
    let num = &IntPolynomial::constant(1)
        - &(&IntPolynomial::monomial(n + 1) * &IntPolynomial::from_i64(&[2, -1]));
    let den = IntPolynomial::from_i64(&[1, -1]);
    num.exact_div(&den)
        .expect("x = 1 is always a root of 1 - x^(n+1)(2 - x)")
        .sign_normalized()
}

/// The three logarithmic-equation families for limit points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `−log(m − x) / log x = n`
    Club,
    /// `−log(m − x)/log x + log(x − m + l)/log x = n`
    Heart,
    /// `−log(x − m) / log x = n`
    Spade,
}

impl std::str::FromStr for Family {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        match s.to_ascii_lowercase().as_str() {
            "club" | "clubs" => Ok(Family::Club),
            "heart" | "hearts" => Ok(Family::Heart),
            "spade" | "spades" => Ok(Family::Spade),
            _ => Err(PolyError::InvalidParameters(format!("unknown family {s:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Club => "club",
            Family::Heart => "heart",
            Family::Spade => "spade",
        })
    }
}

/// Integer polynomial obtained by exponentiating a family's logarithmic
/// equation:
///
/// * club: `x^{n+1} − m xⁿ + 1`
/// * heart: `x^{n+1} − m xⁿ + x − m + l`
/// * spade: `x^{n+1} − m xⁿ − 1`
pub fn family_poly(family: Family, m: u64, n: usize, l: Option<u64>) -> Result<IntPolynomial, PolyError> {
    if m < 2 {
        return Err(PolyError::InvalidParameters(format!("m = {m} must be at least 2")));
    }
    if n < 1 {
        return Err(PolyError::InvalidParameters("n must be at least 1".into()));
    }
    let m_big = BigInt::from(m);
    let lead = &IntPolynomial::monomial(n + 1) - &IntPolynomial::term(m_big.clone(), n);
    let tail = match family {
        Family::Club => IntPolynomial::constant(1),
        Family::Spade => IntPolynomial::constant(-1),
        Family::Heart => {
            let l = l.ok_or_else(|| PolyError::InvalidParameters("heart family needs l".into()))?;
            if l < 1 || l >= m {
                return Err(PolyError::InvalidParameters(format!(
                    "heart family needs 1 <= l < m, got l = {l}, m = {m}"
                )));
            }
            IntPolynomial::new(vec![BigInt::from(l) - &m_big, BigInt::one()])
        }
    };
    Ok(&lead + &tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(poly_arith(&p(&[-1, 1]), &p(&[-1, -1, 1]), ArithOp::Mul), p(&[1, 0, -2, 1]));
        assert_eq!(poly_arith(&p(&[3, 0, 1]), &IntPolynomial::zero(), ArithOp::Add), p(&[3, 0, 1]));
        assert_eq!(p(&[1, 1]) * p(&[-1, 1]), p(&[-1, 0, 1]));
        assert_eq!(p(&[1, 1]) - p(&[1, 1]), IntPolynomial::zero());
    }

    #[test]
    fn zero_is_distinct_from_constants() {
        assert_eq!(IntPolynomial::zero().degree(), None);
        assert_eq!(IntPolynomial::constant(0), IntPolynomial::zero());
        assert_eq!(IntPolynomial::constant(5).degree(), Some(0));
        assert_ne!(IntPolynomial::constant(5), IntPolynomial::zero());
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(poly_exact_div(&p(&[1, 0, 0, -2, 1]), &p(&[-1, 1])).unwrap(), p(&[-1, -1, -1, 1]));
        assert_eq!(poly_exact_div(&p(&[4, 5, 6]), &p(&[1])).unwrap(), p(&[4, 5, 6]));
        assert_eq!(poly_exact_div(&p(&[-1, 0, 1]), &p(&[1, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(poly_exact_div(&p(&[1, 0, 1]), &p(&[1, 1])), Err(PolyError::NonExactDivision));
        assert_eq!(poly_exact_div(&p(&[1]), &IntPolynomial::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn symmetry_examples() {
        assert_eq!(classify_symmetry(&p(&[1, 3, 0, 3, 1])), SymmetryClass::Palindromic);
        assert_eq!(classify_symmetry(&p(&[-1, -2, 2, 1])), SymmetryClass::AntiPalindromic);
        // a₀ = −a₂ and a₁ mirrors itself: neither palindromic nor anti, but
        // semi-palindromic under the reading above
        assert_eq!(classify_symmetry(&p(&[-1, -1, 1])), SymmetryClass::SemiPalindromic);
        assert_eq!(classify_symmetry(&p(&[2, -1, 1])), SymmetryClass::None);
        // odd degree: the even/odd clauses force a₀ = a₃ = 0
        assert_eq!(classify_symmetry(&p(&[-1, 2, 2, 1])), SymmetryClass::None);
        // even i < n flip sign, odd i mirror: 1 + 2x + 0x² + 2x³ − x⁴
        assert_eq!(classify_symmetry(&p(&[-1, 2, 0, 2, 1])), SymmetryClass::SemiPalindromic);
    }

    #[test]
    fn pair_examples() {
        assert_eq!(classify_pair(&p(&[-1, -1, 1]), &p(&[-1, 1, 1])).unwrap(), PairRelation::AntiReciprocal);
        // −x² − x + 1 is the coefficient reversal of x² − x − 1
        assert_eq!(classify_pair(&p(&[-1, -1, 1]), &p(&[1, -1, -1])).unwrap(), PairRelation::Reciprocal);
        assert_eq!(classify_pair(&p(&[-1, 2, 0, 2, 1]), &p(&[-1, 2, 0, 2, 1])).unwrap(), PairRelation::SemiReciprocal);
        let pal = p(&[1, 3, 0, 3, 1]);
        assert_eq!(classify_pair(&pal, &pal.reverse()).unwrap(), PairRelation::Reciprocal);
        assert_eq!(classify_pair(&p(&[-1, -1, 1]), &p(&[1, 1, 1])).unwrap(), PairRelation::None);
        assert_eq!(classify_pair(&p(&[-1, 1]), &p(&[1, 1, 1])), Err(PolyError::DegreeMismatch(1, 2)));
    }

    #[test]
    fn alpha_and_beta_examples() {
        assert_eq!(alpha_poly(1), p(&[-1, -1, 1]));
        assert_eq!(alpha_poly(2), p(&[-1, 1, -2, 1]));
        assert_eq!(alpha_poly(3), p(&[-1, 1, 0, -2, 1]));
        assert_eq!(beta_poly(1), p(&[-1, -1, 1]));
        assert_eq!(beta_poly(2), p(&[-1, -1, -1, 1]));
        assert_eq!(beta_poly(3), p(&[-1, -1, -1, -1, 1]));
    }

    #[test]
    fn family_examples() {
        assert_eq!(family_poly(Family::Heart, 2, 2, Some(1)).unwrap(), alpha_poly(2));
        assert_eq!(family_poly(Family::Club, 2, 2, None).unwrap(), p(&[1, 0, -2, 1]));
        assert_eq!(family_poly(Family::Spade, 2, 1, None).unwrap(), p(&[-1, -2, 1]));
        assert!(matches!(
            family_poly(Family::Heart, 3, 2, Some(3)),
            Err(PolyError::InvalidParameters(_))
        ));
        assert!(family_poly(Family::Heart, 3, 2, Some(0)).is_err());
        assert!(family_poly(Family::Heart, 3, 2, None).is_err());
    }

    #[test]
    fn family_identities_up_to_twenty() {
        let x_minus_1 = p(&[-1, 1]);
        for n in 1..=20 {
            let expected = &(&IntPolynomial::monomial(n + 2) - &IntPolynomial::term(BigInt::from(2), n + 1))
                + &IntPolynomial::constant(1);
            assert_eq!(&x_minus_1 * &beta_poly(n), expected, "n = {n}");
            assert_eq!(family_poly(Family::Heart, 2, n, Some(1)).unwrap(), alpha_poly(n));
        }
        assert_eq!(alpha_poly(1), beta_poly(1));
    }

    #[test]
    fn display_and_parse() {
        let q = IntPolynomial::parse_ascending("1, -1, -2, 0, 1").unwrap();
        assert_eq!(q.to_string(), "x^4 - 2x^2 - x + 1");
        assert!(IntPolynomial::parse_ascending("1,a").is_err());
        assert_eq!(p(&[-3]).to_string(), "-3");
    }

    #[test]
    fn dyadic_sign_evaluation() {
        // x² − 2 at 3/2 → 1/4 > 0, at 5/4 → −7/16 < 0
        let q = p(&[-2, 0, 1]);
        assert!(q.eval_dyadic_scaled(&BigInt::from(3), 1) > BigInt::zero());
        assert!(q.eval_dyadic_scaled(&BigInt::from(5), 2) < BigInt::zero());
        assert_eq!(q.eval_dyadic_scaled(&BigInt::from(3), 1), BigInt::from(1));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly() -> impl Strategy<Value = IntPolynomial> {
            prop::collection::vec(-20i64..=20, 1..8).prop_map(|c| IntPolynomial::from_i64(&c))
        }

        /// Degree-`n` polynomial with nonzero leading coefficient.
        fn arb_poly_of_degree(n: usize) -> impl Strategy<Value = IntPolynomial> {
            (prop::collection::vec(-20i64..=20, n), prop_oneof![-20i64..=-1, 1i64..=20]).prop_map(|(mut c, l)| {
                c.push(l);
                IntPolynomial::from_i64(&c)
            })
        }

        fn arb_pair() -> impl Strategy<Value = (IntPolynomial, IntPolynomial)> {
            (1usize..7).prop_flat_map(|n| (arb_poly_of_degree(n), arb_poly_of_degree(n)))
        }

        fn arb_unit_leading() -> impl Strategy<Value = IntPolynomial> {
            (prop::collection::vec(-20i64..=20, 0..5), prop::bool::ANY).prop_map(|(mut c, neg)| {
                c.push(if neg { -1 } else { 1 });
                IntPolynomial::from_i64(&c)
            })
        }

        proptest! {
            #[test]
            fn reverse_preserves_symmetry_class(q in arb_poly()) {
                prop_assume!(q.degree().unwrap_or(0) >= 1 && !q.coeff(0).is_zero());
                let c = classify_symmetry(&q);
                let r = classify_symmetry(&q.reverse());
                if c == SymmetryClass::Palindromic || c == SymmetryClass::AntiPalindromic {
                    prop_assert_eq!(c, r);
                }
            }

            #[test]
            fn self_pair_mirrors_symmetry(q in arb_poly()) {
                prop_assume!(q.degree().unwrap_or(0) >= 1);
                let rel = classify_pair(&q, &q).unwrap();
                let sym = classify_symmetry(&q);
                prop_assert_eq!(rel == PairRelation::Reciprocal, sym == SymmetryClass::Palindromic);
                prop_assert_eq!(rel == PairRelation::SemiReciprocal, sym == SymmetryClass::SemiPalindromic);
            }

            #[test]
            fn pair_relation_is_symmetric((a, b) in arb_pair()) {
                prop_assert_eq!(classify_pair(&a, &b).unwrap(), classify_pair(&b, &a).unwrap());
            }

            #[test]
            fn product_then_exact_division(a in arb_poly(), b in arb_unit_leading()) {
                prop_assume!(!a.is_zero());
                let prod = &a * &b;
                prop_assert_eq!(prod.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
                prop_assert_eq!(prod.exact_div(&b).unwrap(), a);
            }
        }
    }
}
