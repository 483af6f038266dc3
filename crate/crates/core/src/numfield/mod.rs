//! Exact arithmetic in `Z[θ]` for a certified Pisot number `θ`, with
//! interval evaluation of the real embedding and certified rounding.

mod modp;
mod roots;

use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigpoly::IntPolynomial;
use crate::interval::{Interval, IntervalRepr};

pub use modp::{irreducibility_witness, irreducible_mod, primes_between};
pub use roots::{isolate_roots, RootDisk};

/// Largest prime tried when searching for an irreducibility witness.
pub const WITNESS_PRIME_LIMIT: u64 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumFieldError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("polynomial has degree < 1")]
    DegreeTooSmall,
    #[error("polynomial {0} does not define a Pisot number")]
    NotPisot(String),
    #[error("value is exactly a half-integer; nearest integer undefined")]
    ExactHalfInteger,
    #[error("precision cap of {bits} bits exhausted")]
    PrecisionExhausted { bits: u32 },
    #[error("element has {got} coordinates, field degree is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Working-precision policy for adaptive evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// First precision tried, in bits; doubled on each retry.
    pub start_bits: u32,
    /// Hard cap in bits.
    pub cap_bits: u32,
    /// Cap used while isolating the roots of the defining polynomial.
    pub root_cap_bits: u32,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { start_bits: 64, cap_bits: 1 << 20, root_cap_bits: 4096 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pisot,
    NotPisot,
    /// Root geometry is Pisot, but no prime ≤ 100 certifies irreducibility.
    UnverifiedIrreducibility,
}

impl Verdict {
    /// Pisot root geometry (irreducibility aside).
    pub fn has_pisot_geometry(self) -> bool {
        !matches!(self, Verdict::NotPisot)
    }
}

#[derive(Debug, Clone)]
pub struct PisotCertificate {
    pub verdict: Verdict,
    /// Real enclosure of the dominant root when one was found.
    pub dominant_root: Option<Interval>,
    /// Modulus enclosures of all other roots.
    pub conjugate_moduli: Vec<Interval>,
    pub irreducibility_witness: Option<u64>,
    pub precision_bits: u32,
    /// Why a `NotPisot` verdict was reached.
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateRepr {
    pub verdict: Verdict,
    pub dominant_root: Option<IntervalRepr>,
    pub conjugate_moduli: Vec<IntervalRepr>,
    pub irreducibility_witness: Option<u64>,
    pub bits: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl PisotCertificate {
    pub fn to_repr(&self, digits: usize) -> CertificateRepr {
        CertificateRepr {
            verdict: self.verdict,
            dominant_root: self.dominant_root.as_ref().map(|i| i.to_repr(digits)),
            conjugate_moduli: self.conjugate_moduli.iter().map(|i| i.to_repr(digits)).collect(),
            irreducibility_witness: self.irreducibility_witness,
            bits: self.precision_bits,
            reason: self.reason.clone(),
        }
    }

    /// Largest certified upper bound on a conjugate modulus.
    pub fn conjugate_bound(&self) -> BigRational {
        self.conjugate_moduli
            .iter()
            .map(Interval::hi)
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

fn one_rat() -> BigRational {
    BigRational::one()
}

/// Decides whether the monic `p` defines a Pisot number.
///
/// All complex roots are isolated in disjoint certified disks; the verdict is
/// `pisot` when exactly one root lies outside the closed unit disk, that root
/// is real and greater than 1, and every other disk lies strictly inside the
/// unit circle. Irreducibility is witnessed by a prime `q ≤ 100` modulo which
/// `p` stays irreducible.
pub fn certify_pisot(p: &IntPolynomial) -> Result<PisotCertificate, NumFieldError> {
    certify_pisot_with(p, &PrecisionConfig::default())
}

pub fn certify_pisot_with(p: &IntPolynomial, cfg: &PrecisionConfig) -> Result<PisotCertificate, NumFieldError> {
    let d = p.degree().ok_or(NumFieldError::DegreeTooSmall)?;
    if d < 1 {
        return Err(NumFieldError::DegreeTooSmall);
    }
    if !p.is_monic() {
        return Err(NumFieldError::NotMonic);
    }
    if p.coeff(0).is_zero() {
        return Err(NumFieldError::ZeroConstantTerm);
    }
    let witness = irreducibility_witness(p, WITNESS_PRIME_LIMIT);

    let decided = |disks: &[RootDisk]| {
        disks.iter().all(|dk| {
            let m = dk.modulus();
            m.hi() < one_rat() || m.lo() > one_rat()
        })
    };
    let Some(disks) = isolate_roots(p, cfg.root_cap_bits, decided) else {
        return Ok(PisotCertificate {
            verdict: Verdict::NotPisot,
            dominant_root: None,
            conjugate_moduli: Vec::new(),
            irreducibility_witness: witness,
            precision_bits: cfg.root_cap_bits,
            reason: Some("root disks did not separate (repeated or clustered roots)".into()),
        });
    };
    let prec = disks.first().map_or(64, |d| d.prec);
    if !decided(&disks) {
        return Ok(PisotCertificate {
            verdict: Verdict::NotPisot,
            dominant_root: None,
            conjugate_moduli: disks.iter().map(RootDisk::modulus).collect(),
            irreducibility_witness: witness,
            precision_bits: prec,
            reason: Some("a root could not be separated from the unit circle".into()),
        });
    }
    let outside: Vec<usize> = (0..disks.len()).filter(|&i| disks[i].modulus().lo() > one_rat()).collect();
    let dominant = outside.first().copied().or_else(|| {
        // report the largest root for context even if nothing is outside
        (0..disks.len()).max_by(|&a, &b| disks[a].modulus().mid().cmp(&disks[b].modulus().mid()))
    });
    let conjugate_moduli: Vec<Interval> = (0..disks.len())
        .filter(|&i| Some(i) != dominant)
        .map(|i| disks[i].modulus())
        .collect();
    let dom_disk = dominant.map(|i| &disks[i]);
    let reason = if outside.len() != 1 {
        Some(format!("{} roots lie outside the unit circle", outside.len()))
    } else {
        let dk = dom_disk.unwrap();
        if !dk.is_real {
            Some("the dominant root is not real".into())
        } else if dk.real_interval().lo() <= one_rat() {
            Some("the dominant root is negative".into())
        } else {
            None
        }
    };
    let verdict = match (&reason, witness) {
        (Some(_), _) => Verdict::NotPisot,
        (None, Some(_)) => Verdict::Pisot,
        (None, None) => Verdict::UnverifiedIrreducibility,
    };
    Ok(PisotCertificate {
        verdict,
        dominant_root: dom_disk.filter(|d| d.is_real).map(RootDisk::real_interval),
        conjugate_moduli,
        irreducibility_witness: witness,
        precision_bits: prec,
        reason,
    })
}

/// Element of `Z[θ]` in the power basis `1, θ, …, θ^{d−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: Vec<BigInt>,
}

impl FieldElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// True when only the constant coordinate may be nonzero.
    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(Zero::is_zero)
    }

    pub fn max_coord_bits(&self) -> u64 {
        self.coords.iter().map(|c| c.bits()).max().unwrap_or(0)
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coords.iter().map(ToString::to_string).collect()
    }
}

/// Certified isolating interval for `θ`, refined on demand and cached.
#[derive(Debug)]
struct ThetaRoot {
    /// Isolating interval from the certificate; never replaced.
    isolating: Interval,
    /// Sign of `p` at the lower end of any enclosure.
    sign_lo: i8,
    best: RwLock<Interval>,
}

/// `Q(θ)` for a Pisot number `θ`, presented by its monic minimal polynomial.
#[derive(Debug)]
pub struct NumberField {
    min_poly: IntPolynomial,
    degree: usize,
    certificate: PisotCertificate,
    theta: ThetaRoot,
    conjugate_bound: BigRational,
    config: PrecisionConfig,
}

impl NumberField {
    pub fn new(min_poly: IntPolynomial) -> Result<Self, NumFieldError> {
        Self::with_config(min_poly, PrecisionConfig::default())
    }

    pub fn with_config(min_poly: IntPolynomial, config: PrecisionConfig) -> Result<Self, NumFieldError> {
        let certificate = certify_pisot_with(&min_poly, &config)?;
        if !certificate.verdict.has_pisot_geometry() {
            return Err(NumFieldError::NotPisot(min_poly.to_string()));
        }
        let isolating = certificate
            .dominant_root
            .clone()
            .expect("pisot certificate carries a dominant root");
        let s = min_poly.eval_dyadic_scaled(isolating.lo_scaled(), isolating.prec() as u64);
        let sign_lo = if s.is_negative() { -1 } else { 1 };
        let conjugate_bound = certificate.conjugate_bound();
        Ok(NumberField {
            degree: min_poly.degree().unwrap(),
            min_poly,
            theta: ThetaRoot { best: RwLock::new(isolating.clone()), isolating, sign_lo },
            certificate,
            conjugate_bound,
            config,
        })
    }

    pub fn min_poly(&self) -> &IntPolynomial {
        &self.min_poly
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn certificate(&self) -> &PisotCertificate {
        &self.certificate
    }

    pub fn theta_interval(&self) -> &Interval {
        &self.theta.isolating
    }

    /// Certified upper bound `< 1` on the moduli of the conjugates of `θ`.
    pub fn conjugate_bound(&self) -> &BigRational {
        &self.conjugate_bound
    }

    pub fn config(&self) -> &PrecisionConfig {
        &self.config
    }

    pub fn set_config(&mut self, config: PrecisionConfig) {
        self.config = config;
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<FieldElement, NumFieldError> {
        if coords.len() != self.degree {
            return Err(NumFieldError::DimensionMismatch { expected: self.degree, got: coords.len() });
        }
        Ok(FieldElement { coords })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<FieldElement, NumFieldError> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_int(&self, c: impl Into<BigInt>) -> FieldElement {
        let mut coords = vec![BigInt::zero(); self.degree];
        coords[0] = c.into();
        FieldElement { coords }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
    }

    pub fn sub_int(&self, a: &FieldElement, c: &BigInt) -> FieldElement {
        let mut out = a.clone();
        out.coords[0] -= c;
        out
    }

    /// Reduces a coefficient vector of any length modulo the minimal
    /// polynomial, using `θ^d = −(a_{d−1}θ^{d−1} + … + a₀)`.
    fn reduce(&self, mut v: Vec<BigInt>) -> FieldElement {
        let d = self.degree;
        let a = self.min_poly.coeffs();
        for k in (d..v.len()).rev() {
            let c = std::mem::take(&mut v[k]);
            if c.is_zero() {
                continue;
            }
            for (j, aj) in a.iter().take(d).enumerate() {
                if !aj.is_zero() {
                    v[k - d + j] -= &c * aj;
                }
            }
        }
        v.resize(d, BigInt::zero());
        FieldElement { coords: v }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree;
        let mut out = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        self.reduce(out)
    }

    /// `θ` itself.
    pub fn theta(&self) -> FieldElement {
        self.reduce({
            let mut v = vec![BigInt::zero(); self.degree.max(2)];
            v[1] = BigInt::one();
            v
        })
    }

    /// Exact coordinates of `θⁿ`.
    pub fn theta_power(&self, n: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = self.theta();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        result
    }

    /// Enclosure of `θ` of width at most `2^{-bits}`.
    pub fn theta_enclosure(&self, bits: u32) -> Interval {
        {
            let best = self.theta.best.read().unwrap();
            if best.prec() >= bits && width_ok(&best, bits) {
                return best.with_prec(bits.max(best.prec()));
            }
        }
        let refined = self.refine_theta(bits);
        let mut best = self.theta.best.write().unwrap();
        if refined.prec() > best.prec() {
            *best = refined.clone();
        }
        refined
    }

    fn sign_at(&self, m: &BigInt, prec: u32) -> i8 {
        let v = self.min_poly.eval_dyadic_scaled(m, prec as u64);
        if v.is_negative() {
            -1
        } else if v.is_positive() {
            1
        } else {
            0
        }
    }

    fn refine_theta(&self, bits: u32) -> Interval {
        let start = self.theta.best.read().unwrap().clone();
        let target = bits + 8;
        // precision-doubling Newton from the current midpoint
        let mut w = start.prec().min(target);
        let mut x = (start.lo_scaled() + start.hi_scaled()) >> (1 + (start.prec() - w) as usize);
        let dp = self.min_poly.derivative();
        loop {
            let next_w = (w * 2).min(target);
            x <<= (next_w - w) as usize;
            w = next_w;
            let steps = if w == target { 3 } else { 1 };
            for _ in 0..steps {
                let f = horner_fixed(&self.min_poly, &x, w);
                let df = horner_fixed(&dp, &x, w);
                if df.is_zero() {
                    break;
                }
                x -= (f << w as usize) / df;
            }
            if w == target {
                break;
            }
        }
        let eps = BigInt::from(4);
        let lo = &x - &eps;
        let hi = &x + &eps;
        let iso = self.theta.isolating.with_prec(target);
        let inside = &lo >= iso.lo_scaled() && &hi <= iso.hi_scaled();
        if inside && self.sign_at(&lo, target) == self.theta.sign_lo && self.sign_at(&hi, target) == -self.theta.sign_lo
        {
            return Interval::from_scaled(lo, hi, target);
        }
        self.bisect_theta(&start, target)
    }

    fn bisect_theta(&self, start: &Interval, target: u32) -> Interval {
        let iv = start.with_prec(target);
        let (mut lo, mut hi) = (iv.lo_scaled().clone(), iv.hi_scaled().clone());
        while &hi - &lo > BigInt::from(8) {
            let mid: BigInt = (&lo + &hi) >> 1usize;
            match self.sign_at(&mid, target) {
                0 => return Interval::from_scaled(mid.clone(), mid, target),
                s if s == self.theta.sign_lo => lo = mid,
                _ => hi = mid,
            }
        }
        Interval::from_scaled(lo, hi, target)
    }

    /// Certified enclosure of the real value `Σ coords[i]·θ^i`, computed at
    /// working precision `precision_bits`.
    pub fn eval_interval(&self, a: &FieldElement, precision_bits: u32) -> Interval {
        let bits = precision_bits.max(16);
        if a.is_rational() {
            return Interval::from_int(&a.coords[0], bits);
        }
        let theta = self.theta_enclosure(bits);
        let mut acc = Interval::from_int(&a.coords[self.degree - 1], bits);
        for c in a.coords[..self.degree - 1].iter().rev() {
            acc = acc.mul(&theta).add_int(c);
        }
        acc
    }

    /// Precision below which evaluating `a` cannot resolve its integer part:
    /// cancellation costs about as many bits as the coordinates carry.
    fn precision_floor(&self, a: &FieldElement) -> u32 {
        let theta_bits = self.theta.isolating.hi().ceil().to_integer().bits() as u32;
        (a.max_coord_bits() as u32) + theta_bits * self.degree as u32 + 2 * (self.degree as u32).max(1) + 8
    }

    fn first_precision(&self, a: &FieldElement) -> u32 {
        let floor = self.precision_floor(a);
        let mut p = self.config.start_bits.max(16);
        while p < floor && p < self.config.cap_bits {
            p *= 2;
        }
        p
    }

    /// Nearest integer to the value of `a`.
    pub fn nearest_integer(&self, a: &FieldElement) -> Result<BigInt, NumFieldError> {
        self.round_certified(a).map(|(z, _)| z)
    }

    /// Nearest integer to `a / den` (`den > 0`), together with the enclosure
    /// of `a / den` that certified it.
    pub fn nearest_integer_scaled(&self, a: &FieldElement, den: &BigInt) -> Result<BigInt, NumFieldError> {
        assert!(den.is_positive(), "denominator must be positive");
        if a.is_rational() {
            let c = &a.coords[0];
            let two_c: BigInt = c * 2;
            if two_c.is_multiple_of(den) && (&two_c / den).is_odd() {
                return Err(NumFieldError::ExactHalfInteger);
            }
            // floor((2c + den) / (2 den))
            return Ok((two_c + den).div_floor(&(den * 2)));
        }
        let den_iv = Interval::from_int(den, 16);
        let mut prec = self.first_precision(a) + den.bits() as u32;
        loop {
            if prec > self.config.cap_bits {
                return Err(NumFieldError::PrecisionExhausted { bits: self.config.cap_bits });
            }
            let iv = self.eval_interval(a, prec).div(&den_iv).expect("den > 0");
            if let Some(z) = certified_round(&iv) {
                return Ok(z);
            }
            prec *= 2;
        }
    }

    /// Nearest integer and the enclosure of the value that certified it.
    pub fn round_certified(&self, a: &FieldElement) -> Result<(BigInt, Interval), NumFieldError> {
        if a.is_rational() {
            let c = a.coords[0].clone();
            return Ok((c.clone(), Interval::from_int(&c, self.config.start_bits)));
        }
        let mut prec = self.first_precision(a);
        loop {
            if prec > self.config.cap_bits {
                return Err(NumFieldError::PrecisionExhausted { bits: self.config.cap_bits });
            }
            let iv = self.eval_interval(a, prec);
            if let Some(z) = certified_round(&iv) {
                return Ok((z, iv));
            }
            prec *= 2;
        }
    }

    /// Enclosure of `|a|` that either is exactly zero (for the zero element)
    /// or excludes zero with relative width at most `2^{-rel_bits}`.
    pub fn abs_enclosure(&self, a: &FieldElement, rel_bits: u32) -> Result<Interval, NumFieldError> {
        if a.is_rational() {
            return Ok(Interval::from_int(&a.coords[0].abs(), self.config.start_bits));
        }
        let mut prec = self.first_precision(a);
        loop {
            if prec > self.config.cap_bits {
                return Err(NumFieldError::PrecisionExhausted { bits: self.config.cap_bits });
            }
            let iv = self.eval_interval(a, prec).abs();
            if iv.lo_scaled().is_positive() && (iv.width_ulps() << rel_bits as usize) <= *iv.lo_scaled() {
                return Ok(iv);
            }
            prec *= 2;
        }
    }

    /// Enclosure of `|a|` at working precision `bits` (no adaptivity).
    pub fn abs_at(&self, a: &FieldElement, bits: u32) -> Interval {
        self.eval_interval(a, bits).abs()
    }
}

fn width_ok(iv: &Interval, bits: u32) -> bool {
    // width ≤ 2^{-bits}
    let w = iv.width_ulps();
    if iv.prec() < bits {
        return w.is_zero();
    }
    w <= BigInt::one() << (iv.prec() - bits) as usize
}

/// Fixed-point Horner evaluation of `p(x / 2^w) · 2^w`.
fn horner_fixed(p: &IntPolynomial, x: &BigInt, w: u32) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.coeffs().iter().rev() {
        acc = ((acc * x) >> w as usize) + (c << w as usize);
    }
    acc
}

/// The integer `z` with `iv ⊂ (z − 1/2, z + 1/2)`, if there is one.
fn certified_round(iv: &Interval) -> Option<BigInt> {
    let p = iv.prec() as usize;
    let half = BigInt::one() << (p - 1);
    let lo_shift = iv.lo_scaled() + &half;
    let z = &lo_shift >> p;
    let z_scaled = &z << p;
    if lo_shift == z_scaled {
        return None;
    }
    let upper = &z_scaled + (BigInt::one() << p);
    if iv.hi_scaled() + &half >= upper {
        return None;
    }
    Some(z)
}
