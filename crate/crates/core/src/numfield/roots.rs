//! Certified complex root isolation for integer polynomials.
//!
//! Approximations come from an Aberth iteration (in `f64`, then in
//! big fixed-point). They are certified a posteriori with Smith's bound: for
//! a monic `p` of degree `d` and distinct approximations `z_i`, every root lies
//! in a disk `|z − z_i| ≤ d·|p(z_i)| / Π_{j≠i} |z_i − z_j|`, and a disk disjoint
//! from all the others holds exactly one root. The radii are computed exactly
//! from dyadic approximations, so the resulting disks are rigorous.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigpoly::IntPolynomial;
use crate::interval::Interval;

#[derive(Clone, Copy, Debug)]
struct Cf {
    re: f64,
    im: f64,
}

impl Cf {
    fn add(self, o: Cf) -> Cf {
        Cf { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: Cf) -> Cf {
        Cf { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: Cf) -> Cf {
        Cf { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn div(self, o: Cf) -> Cf {
        let d = o.re * o.re + o.im * o.im;
        Cf { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
    fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Complex number `(re + i·im) / 2^prec` with big-integer parts.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Cfx {
    re: BigInt,
    im: BigInt,
}

impl Cfx {
    fn zero() -> Self {
        Cfx { re: BigInt::zero(), im: BigInt::zero() }
    }
    fn add(&self, o: &Cfx) -> Cfx {
        Cfx { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Cfx) -> Cfx {
        Cfx { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    /// Exact product (scale adds).
    fn mul_exact(&self, o: &Cfx) -> Cfx {
        Cfx { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn mul(&self, o: &Cfx, prec: usize) -> Cfx {
        let p = self.mul_exact(o);
        Cfx { re: p.re >> prec, im: p.im >> prec }
    }
    fn norm_sq(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &Cfx, prec: usize) -> Option<Cfx> {
        let d = o.norm_sq();
        if d.is_zero() {
            return None;
        }
        let re = (&self.re * &o.re + &self.im * &o.im) << prec;
        let im = (&self.im * &o.re - &self.re * &o.im) << prec;
        Some(Cfx { re: re / &d, im: im / &d })
    }
    fn from_f64(z: Cf, prec: usize) -> Cfx {
        let scale = |x: f64| -> BigInt {
            let (m, e) = decompose(x);
            let shift = e + prec as i64;
            if shift >= 0 {
                BigInt::from(m) << shift as usize
            } else {
                BigInt::from(m) >> (-shift) as usize
            }
        };
        Cfx { re: scale(z.re), im: scale(z.im) }
    }
}

/// `x = m · 2^e` with integer `m`.
fn decompose(x: f64) -> (i64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & 0xf_ffff_ffff_ffff) as i64;
    if exp == 0 {
        (sign * frac, -1074)
    } else {
        (sign * (frac | (1 << 52)), exp - 1075)
    }
}

fn coeffs_f64(p: &IntPolynomial) -> Vec<f64> {
    p.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
}

fn horner_f64(c: &[f64], z: Cf) -> (Cf, Cf) {
    let mut v = Cf { re: 0.0, im: 0.0 };
    let mut dv = Cf { re: 0.0, im: 0.0 };
    for &a in c.iter().rev() {
        dv = dv.mul(z).add(v);
        v = v.mul(z).add(Cf { re: a, im: 0.0 });
    }
    (v, dv)
}

/// Floating-point Aberth iteration; a starting point for the exact stage.
fn aberth_f64(p: &IntPolynomial) -> Vec<Cf> {
    let c = coeffs_f64(p);
    let d = c.len() - 1;
    let lead = c[d];
    // Cauchy bound on root moduli
    let radius = 1.0 + c[..d].iter().map(|a| (a / lead).abs()).fold(0.0, f64::max);
    let r0 = radius.min(1e6) * 0.5 + 0.5;
    let mut z: Vec<Cf> = (0..d)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4;
            Cf { re: r0 * ang.cos(), im: r0 * ang.sin() }
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            let (v, dv) = horner_f64(&c, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v.div(dv);
            let mut s = Cf { re: 0.0, im: 0.0 };
            for j in 0..d {
                if j != i {
                    s = s.add(Cf { re: 1.0, im: 0.0 }.div(z[i].sub(z[j])));
                }
            }
            let denom = Cf { re: 1.0, im: 0.0 }.sub(ratio.mul(s));
            let w = ratio.div(denom);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] = z[i].sub(w);
                max_step = max_step.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

fn horner_fx(p: &IntPolynomial, z: &Cfx, prec: usize) -> (Cfx, Cfx) {
    let mut v = Cfx::zero();
    let mut dv = Cfx::zero();
    for a in p.coeffs().iter().rev() {
        dv = dv.mul(z, prec).add(&v);
        v = v.mul(z, prec).add(&Cfx { re: a << prec, im: BigInt::zero() });
    }
    (v, dv)
}

fn aberth_fx(p: &IntPolynomial, z: &mut [Cfx], prec: usize, iters: usize) {
    let d = z.len();
    let one = Cfx { re: BigInt::one() << prec, im: BigInt::zero() };
    for _ in 0..iters {
        let mut moved = false;
        for i in 0..d {
            let (v, dv) = horner_fx(p, &z[i], prec);
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let Some(ratio) = v.div(&dv, prec) else { continue };
            let mut s = Cfx::zero();
            for j in 0..d {
                if j != i {
                    if let Some(t) = one.div(&z[i].sub(&z[j]), prec) {
                        s = s.add(&t);
                    }
                }
            }
            let denom = one.sub(&ratio.mul(&s, prec));
            let Some(w) = ratio.div(&denom, prec) else { continue };
            if w.re.abs() > BigInt::one() || w.im.abs() > BigInt::one() {
                moved = true;
            }
            z[i] = z[i].sub(&w);
        }
        if !moved {
            break;
        }
    }
}

/// A certified root disk.
#[derive(Clone, Debug)]
pub struct RootDisk {
    /// Center `(re, im) / 2^prec`.
    pub re: BigInt,
    pub im: BigInt,
    /// Radius upper bound `radius / 2^prec`.
    pub radius: BigInt,
    pub prec: u32,
    /// `im == 0` and the disk is isolated: the root is real.
    pub is_real: bool,
}

impl RootDisk {
    /// Enclosure of the root's modulus.
    pub fn modulus(&self) -> Interval {
        let n2 = &self.re * &self.re + &self.im * &self.im;
        let lo_c = n2.sqrt();
        let hi_c = {
            let s = n2.sqrt();
            if &s * &s == n2 {
                s
            } else {
                s + 1
            }
        };
        let lo = (lo_c - &self.radius).max(BigInt::zero());
        let hi = hi_c + &self.radius;
        Interval::from_scaled(lo, hi, self.prec)
    }

    /// Real-axis enclosure `[re − r, re + r]`; meaningful for real roots.
    pub fn real_interval(&self) -> Interval {
        Interval::from_scaled(&self.re - &self.radius, &self.re + &self.radius, self.prec)
    }

    pub fn center_f64(&self) -> (f64, f64) {
        let s = BigRational::new(BigInt::one(), BigInt::one() << self.prec as usize);
        let f = |x: &BigInt| crate::interval::ratio_to_f64(&(BigRational::from_integer(x.clone()) * &s));
        (f(&self.re), f(&self.im))
    }
}

/// Attempts to isolate every root of the monic `p` at working precision
/// `prec`. Returns `None` when the disks are not pairwise disjoint.
fn isolate_at(p: &IntPolynomial, start: &[Cf], prec: usize) -> Option<Vec<RootDisk>> {
    let d = start.len();
    let mut z: Vec<Cfx> = start.iter().map(|&c| Cfx::from_f64(c, prec)).collect();
    let iters = 8 + 2 * (usize::BITS - prec.leading_zeros()) as usize;
    aberth_fx(p, &mut z, prec, iters);
    // snap near-real approximations onto the axis
    let snap = BigInt::one() << (prec / 2);
    for zi in z.iter_mut() {
        if zi.im.abs() < snap {
            zi.im = BigInt::zero();
        }
    }
    let q = prec + 16;
    let up = q - prec;
    let mut radii = Vec::with_capacity(d);
    for i in 0..d {
        // H = Σ a_k Z^k 2^{prec(d−k)} with Z = z·2^prec, exact
        let mut hs = Cfx::zero();
        for (k, a) in p.coeffs().iter().enumerate().rev() {
            hs = hs.mul_exact(&z[i]).add(&Cfx { re: a << (prec * (d - k)), im: BigInt::zero() });
        }
        let mut den = BigInt::one();
        for j in 0..d {
            if j != i {
                let diff = z[i].sub(&z[j]);
                let n = diff.norm_sq();
                if n.is_zero() {
                    return None;
                }
                den *= n;
            }
        }
        // r² = d²|H|² / (2^{2prec} Π|D|²), radius at scale 2^q
        let num = (BigInt::from(d * d) * hs.norm_sq()) << (2 * q);
        let den = den << (2 * prec);
        let r2_scaled = -((-num) / &den);
        let r = {
            let s = r2_scaled.sqrt();
            if &s * &s == r2_scaled {
                s
            } else {
                s + 1
            }
        };
        radii.push(r);
    }
    let centers: Vec<Cfx> = z.iter().map(|c| Cfx { re: &c.re << up, im: &c.im << up }).collect();
    for i in 0..d {
        for j in (i + 1)..d {
            let s = &radii[i] + &radii[j];
            if &s * &s >= centers[i].sub(&centers[j]).norm_sq() {
                return None;
            }
        }
    }
    Some(
        centers
            .into_iter()
            .zip(radii)
            .map(|(c, r)| RootDisk { is_real: c.im.is_zero(), re: c.re, im: c.im, radius: r, prec: q as u32 })
            .collect(),
    )
}

/// Isolates all roots of a monic polynomial, doubling the working precision
/// from 64 bits up to `cap_bits` until the root disks separate and `accept`
/// is satisfied.
pub fn isolate_roots(
    p: &IntPolynomial,
    cap_bits: u32,
    mut accept: impl FnMut(&[RootDisk]) -> bool,
) -> Option<Vec<RootDisk>> {
    let d = p.degree()?;
    if d == 0 {
        return Some(Vec::new());
    }
    let start = aberth_f64(p);
    let mut prec = 64usize;
    let mut last = None;
    while prec <= cap_bits as usize {
        if let Some(disks) = isolate_at(p, &start, prec) {
            if accept(&disks) {
                return Some(disks);
            }
            last = Some(disks);
        }
        prec *= 2;
    }
    last
}
