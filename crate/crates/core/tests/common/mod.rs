//! Independent oracles for integration tests. Nothing here calls into the
//! library's numeric code.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn eval_f64(c: &[i64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a as f64)
}

fn eval_fixed(c: &[i64], x: &BigInt, bits: u64) -> BigInt {
    // Horner in fixed point: every partial value scaled by 2^bits
    let one = BigInt::one() << bits;
    let mut acc = BigInt::zero();
    for &a in c.iter().rev() {
        acc = ((acc * x) >> bits) + BigInt::from(a) * &one;
    }
    acc
}

/// Largest real root of the monic `c` (ascending), times `2^bits`, by f64
/// bisection followed by fixed-point Newton steps.
pub fn theta_fixed(c: &[i64], bits: u64) -> BigInt {
    let bound = 1.0 + c[..c.len() - 1].iter().map(|a| a.abs() as f64).sum::<f64>();
    let (mut lo, mut hi) = (1.0f64, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval_f64(c, mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let dc: Vec<i64> = c.iter().enumerate().skip(1).map(|(i, &a)| a * i as i64).collect();
    let mut x = BigInt::from((lo * (1u64 << 52) as f64) as u64) << (bits - 52);
    let mut prev = BigInt::zero();
    for _ in 0..64 {
        let fx = eval_fixed(c, &x, bits);
        let dfx = eval_fixed(&dc, &x, bits);
        x -= (fx << bits) / dfx;
        if (&x - &prev).abs() <= BigInt::from(4) {
            break;
        }
        prev = x.clone();
    }
    x
}

/// Nearest integer to `Σ coords[i]·θ^i` from a fixed-point `θ`.
pub fn round_fixed(coords: &[BigInt], theta: &BigInt, bits: u64) -> BigInt {
    let one = BigInt::one() << bits;
    let mut pow = one.clone();
    let mut acc = BigInt::zero();
    for c in coords {
        acc += c * &pow;
        pow = (&pow * theta) >> bits;
    }
    (acc + (BigInt::one() << (bits - 1))) >> bits
}

/// Terms `0..count` of `u_l = Σ b_i u_{l−i}` from the given initial terms.
pub fn linear_sequence(b: &[i64], init: &[i64], count: usize) -> Vec<BigInt> {
    let mut u: Vec<BigInt> = init.iter().map(|&v| BigInt::from(v)).collect();
    while u.len() < count {
        let l = u.len();
        let next = b.iter().enumerate().map(|(i, &bi)| BigInt::from(bi) * &u[l - 1 - i]).sum();
        u.push(next);
    }
    u.truncate(count);
    u
}

/// Lucas numbers `L_0 .. L_{count−1}`.
pub fn lucas(count: usize) -> Vec<BigInt> {
    linear_sequence(&[1, 1], &[2, 1], count)
}

/// Perrin numbers `P_0 .. P_{count−1}`.
pub fn perrin(count: usize) -> Vec<BigInt> {
    linear_sequence(&[0, 1, 1], &[3, 0, 2], count)
}

/// Traces of the powers of the companion matrix of the monic `c`, i.e. the
/// power sums of its roots, `s_0 .. s_{count−1}`.
pub fn power_sums_by_matrix(c: &[i64], count: usize) -> Vec<BigInt> {
    let d = c.len() - 1;
    // companion: M[i][d−1] = −c_i, M[i+1][i] = 1
    let mut m = vec![vec![BigInt::zero(); d]; d];
    for i in 0..d {
        m[i][d - 1] = BigInt::from(-c[i]);
        if i + 1 < d {
            m[i + 1][i] = BigInt::one();
        }
    }
    let mut p: Vec<Vec<BigInt>> = (0..d).map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push((0..d).map(|i| p[i][i].clone()).sum());
        let next: Vec<Vec<BigInt>> = (0..d)
            .map(|i| (0..d).map(|j| (0..d).map(|k| &p[i][k] * &m[k][j]).sum()).collect())
            .collect();
        p = next;
    }
    out
}

pub fn mod_u64(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Catalog polynomials as ascending coefficients.
pub const CATALOG: [(&str, &[i64]); 7] = [
    ("golden", &[-1, -1, 1]),
    ("silver", &[-1, -2, 1]),
    ("x2-3x+1", &[1, -3, 1]),
    ("plastic", &[-1, -1, 0, 1]),
    ("second-smallest", &[-1, 0, 0, -1, 1]),
    ("delta2", &[1, 0, -2, -1, 1]),
    ("atypical", &[-1, 1, -1, 0, 1, -2, 1]),
];
