//! Irreducibility over small prime fields (Rabin's test).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::bigpoly::IntPolynomial;

type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn reduce_coeffs(p: &IntPolynomial, q: u64) -> Poly {
    let qb = BigInt::from(q);
    trim(
        p.coeffs()
            .iter()
            .map(|c| c.mod_floor(&qb).to_u64().unwrap())
            .collect(),
    )
}

fn inv_mod(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut r = 1u64;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    r
}

/// Remainder of `a` modulo `m` over F_q.
fn rem(mut a: Poly, m: &Poly, q: u64) -> Poly {
    let dm = m.len() - 1;
    let inv = inv_mod(*m.last().unwrap(), q);
    while a.len() > dm {
        let top = a.len() - 1;
        let c = a[top] * inv % q;
        if c != 0 {
            for (j, &mj) in m.iter().enumerate() {
                let idx = top - dm + j;
                a[idx] = (a[idx] + q - c * mj % q) % q;
            }
        }
        a.pop();
        a = trim(a);
    }
    a
}

fn mul_mod(a: &Poly, b: &Poly, m: &Poly, q: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % q;
        }
    }
    rem(trim(out), m, q)
}

fn pow_poly(base: &Poly, mut e: u64, m: &Poly, q: u64) -> Poly {
    let mut r = vec![1u64];
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(&r, &b, m, q);
        }
        b = mul_mod(&b, &b, m, q);
        e >>= 1;
    }
    r
}

fn gcd(mut a: Poly, mut b: Poly, q: u64) -> Poly {
    while !b.is_empty() {
        let r = rem(a, &b, q);
        a = b;
        b = r;
    }
    a
}

fn sub_x(a: &Poly, q: u64) -> Poly {
    let mut a = a.clone();
    if a.len() < 2 {
        a.resize(2, 0);
    }
    a[1] = (a[1] + q - 1) % q;
    trim(a)
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `p` stays irreducible of the same degree modulo the prime `q`.
pub fn irreducible_mod(p: &IntPolynomial, q: u64) -> bool {
    let f = reduce_coeffs(p, q);
    let Some(d) = p.degree() else { return false };
    if f.len() != d + 1 || d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    // frob[k] = x^{q^k} mod f
    let mut frob = vec![rem(x.clone(), &f, q)];
    for _ in 0..d {
        let next = pow_poly(frob.last().unwrap(), q, &f, q);
        frob.push(next);
    }
    if trim(sub_x(&frob[d], q)) != Vec::<u64>::new() {
        return false;
    }
    prime_factors(d).into_iter().all(|r| {
        let g = gcd(f.clone(), sub_x(&frob[d / r], q), q);
        g.len() == 1
    })
}

pub fn small_primes(limit: u64) -> impl Iterator<Item = u64> {
    primes_between(2, limit).into_iter()
}

/// Primes in `[lo, hi]` by a sieve of Eratosthenes.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            (i * i..=n).step_by(i).for_each(|j| composite[j] = true);
        }
        i += 1;
    }
    (lo.max(2) as usize..=n).filter(|&j| !composite[j]).map(|j| j as u64).collect()
}

/// Smallest prime `q ≤ limit` modulo which `p` is irreducible.
pub fn irreducibility_witness(p: &IntPolynomial, limit: u64) -> Option<u64> {
    small_primes(limit).find(|&q| irreducible_mod(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn golden_is_irreducible_mod_two() {
        assert!(irreducible_mod(&p(&[-1, -1, 1]), 2));
        assert_eq!(irreducibility_witness(&p(&[-1, -1, 1]), 100), Some(2));
    }

    #[test]
    fn reducible_polynomials_have_no_witness() {
        // (x − 1)(x² − x − 1)
        assert_eq!(irreducibility_witness(&p(&[1, 0, -2, 1]), 100), None);
        // (x² + 1)(x² − 2)
        assert_eq!(irreducibility_witness(&p(&[-2, 0, -1, 0, 1]), 100), None);
    }

    #[test]
    fn x4_plus_1_is_reducible_mod_every_prime() {
        assert_eq!(irreducibility_witness(&p(&[1, 0, 0, 0, 1]), 100), None);
    }

    #[test]
    fn catalog_polynomials_have_witnesses() {
        for c in [
            vec![-1, -1, 0, 1],
            vec![-1, 0, 0, -1, 1],
            vec![1, 0, -2, -1, 1],
            vec![-1, 1, -1, 0, 1, -2, 1],
        ] {
            assert!(irreducibility_witness(&p(&c), 100).is_some(), "{c:?}");
        }
    }

    #[test]
    fn mod_reduction_that_drops_degree_is_rejected() {
        // 2x² + x + 1 loses its leading term mod 2
        assert!(!irreducible_mod(&p(&[1, 1, 2]), 2));
    }
}
