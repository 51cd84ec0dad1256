//! Small integer utilities: trial factorization, divisors, modular arithmetic.
//! Everything here is desk scale; primes stay well below 64 bits.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Trial factorization of n >= 1 into (prime, exponent) pairs, ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct primes dividing |n|, ascending. Panics if a cofactor survives
/// trial division past 2^32 (never happens at the scales this crate targets).
pub fn prime_support_bigint(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = 2u64;
    loop {
        let db = BigInt::from(d);
        if (&db * &db) > n {
            break;
        }
        if (&n % &db).is_zero() {
            out.push(d);
            while (&n % &db).is_zero() {
                n /= &db;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::from(1) {
        let p: u64 = (&n).try_into().expect("prime factor exceeds u64");
        out.push(p);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor(n) {
        let base: Vec<u64> = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(base.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n).len() == 1 && factor(n)[0].1 == 1
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut bb = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % m128;
        }
        bb = bb * bb % m128;
        e >>= 1;
    }
    acc as u64
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime
    pow_mod(a % p, p - 2, p)
}

/// Legendre symbol (a/p) for odd prime p, via Euler's criterion.
#[cfg(test)]
pub fn legendre_symbol(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Reduce a BigInt into [0, p).
pub fn bigint_mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    (&r).try_into().unwrap()
}
