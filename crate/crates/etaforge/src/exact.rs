//! Exact arithmetic foundation: arbitrary-precision rationals, p-adic
//! valuations, integer polynomials, and the cyclotomic quotient ring
//! Q[x]/Phi_m(x) in which all character-sum values live.
//!
//! Rationals are `num_rational::BigRational`, which normalizes eagerly
//! (gcd-reduced, positive denominator), so structural equality is value
//! equality. Cyclotomic elements are stored in the power basis modulo the
//! m-th cyclotomic polynomial, fully reduced; projection to Q is a
//! coordinate read.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}

/// ord_p of a nonzero integer.
pub fn int_ord_p(n: &Int, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = Int::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// ord_p(alpha) = ord_p(numerator) - ord_p(denominator).
pub fn ord_p(alpha: &Rational, p: u64) -> Result<i64> {
    if alpha.is_zero() {
        return Err(Error::UndefinedValuation);
    }
    Ok(int_ord_p(alpha.numer(), p) - int_ord_p(alpha.denom(), p))
}

// ---------------------------------------------------------------------------
// Integer polynomials (dense, ascending coefficients).

fn poly_trim(p: &mut Vec<Int>) {
    while p.len() > 1 && p.last().map(Int::is_zero).unwrap_or(false) {
        p.pop();
    }
}

#[cfg(test)]
pub(crate) fn poly_mul(a: &[Int], b: &[Int]) -> Vec<Int> {
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    poly_trim(&mut out);
    out
}

/// Exact division by a monic integer polynomial. Panics on a nonzero
/// remainder; every divisor used here (a cyclotomic polynomial) is monic and
/// divides exactly.
pub(crate) fn poly_divexact(a: &[Int], b: &[Int]) -> Vec<Int> {
    assert!(b.last().map(Int::is_one).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<Int> = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        assert!(rem.iter().all(Int::is_zero));
        return vec![Int::zero()];
    }
    let dq = rem.len() - 1 - db;
    let mut quot = vec![Int::zero(); dq + 1];
    for k in (0..=dq).rev() {
        let c = rem[k + db].clone();
        if !c.is_zero() {
            for (i, bi) in b.iter().enumerate() {
                rem[k + i] -= &c * bi;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Int::is_zero), "division was not exact");
    poly_trim(&mut quot);
    quot
}

/// The m-th cyclotomic polynomial Phi_m, by recursive exact division of
/// x^m - 1 by the Phi_d for proper divisors d | m.
pub fn cyclotomic_polynomial(m: u32) -> Vec<Int> {
    assert!(m >= 1);
    cyclotomic_table(m).pop().unwrap()
}

fn cyclotomic_table(m: u32) -> Vec<Vec<Int>> {
    let mut table: Vec<Vec<Int>> = Vec::with_capacity(m as usize);
    for k in 1..=m {
        let mut q = {
            // x^k - 1
            let mut v = vec![Int::zero(); k as usize + 1];
            v[0] = Int::from(-1);
            v[k as usize] = Int::one();
            v
        };
        for d in 1..k {
            if k % d == 0 {
                q = poly_divexact(&q, &table[(d - 1) as usize]);
            }
        }
        table.push(q);
    }
    table
}

// ---------------------------------------------------------------------------
// Q[x]/Phi_m(x)

/// Shared reduction data for one cyclotomic order: Phi_m and the reductions
/// of x^j modulo Phi_m for 0 <= j < 2m (enough for any product of two
/// reduced elements and any root-of-unity power).
struct CycloModulus {
    deg: usize,
    pow_red: Vec<Vec<Int>>,
}

static MODULI: Lazy<RwLock<HashMap<u32, Arc<CycloModulus>>>> = Lazy::new(Default::default);

fn modulus(m: u32) -> Arc<CycloModulus> {
    if let Some(md) = MODULI.read().unwrap().get(&m) {
        return md.clone();
    }
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    let mut pow_red: Vec<Vec<Int>> = Vec::with_capacity(2 * m as usize);
    for j in 0..(2 * m as usize).max(2 * deg) {
        if j < deg {
            let mut v = vec![Int::zero(); deg];
            v[j] = Int::one();
            pow_red.push(v);
        } else {
            // x^j = x * x^{j-1}, then fold the overflow term with
            // x^deg = -(phi_0 + phi_1 x + ... + phi_{deg-1} x^{deg-1}).
            let prev = &pow_red[j - 1];
            let mut v = vec![Int::zero(); deg + 1];
            for (i, c) in prev.iter().enumerate() {
                v[i + 1] = c.clone();
            }
            let lead = v.pop().unwrap();
            if !lead.is_zero() {
                for i in 0..deg {
                    v[i] -= &lead * &phi[i];
                }
            }
            pow_red.push(v);
        }
    }
    let md = Arc::new(CycloModulus { deg, pow_red });
    MODULI.write().unwrap().insert(m, md.clone());
    md
}

/// A residue in Q[x]/Phi_m(x), always stored fully reduced: `coeffs` has
/// exactly deg Phi_m entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElement {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycloElement {
    pub fn zero(m: u32) -> Self {
        let deg = modulus(m).deg;
        CycloElement {
            order: m,
            coeffs: vec![Rational::zero(); deg],
        }
    }

    pub fn from_rational(m: u32, r: Rational) -> Self {
        let mut e = Self::zero(m);
        e.coeffs[0] = r;
        e
    }

    /// zeta_m^k as an element of the power basis (k taken mod m).
    pub fn zeta_pow(m: u32, k: i64) -> Self {
        let md = modulus(m);
        let k = k.rem_euclid(m as i64) as usize;
        let coeffs = md.pow_red[k]
            .iter()
            .map(|c| Rational::from(c.clone()))
            .collect();
        CycloElement { order: m, coeffs }
    }

    /// Build sum_k counts[k] * zeta_m^k, scaled by `scale`. Used to fold
    /// character sums cheaply: the bulk of the accumulation stays in integers.
    pub(crate) fn from_zeta_counts(m: u32, counts: &[Int], scale: &Rational) -> Self {
        let md = modulus(m);
        let mut acc = vec![Int::zero(); md.deg];
        for (k, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, red) in md.pow_red[k].iter().enumerate() {
                acc[i] += c * red;
            }
        }
        CycloElement {
            order: m,
            coeffs: acc.into_iter().map(|c| Rational::from(c) * scale).collect(),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycloElement { order: self.order, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycloElement { order: self.order, coeffs }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let md = modulus(self.order);
        let deg = md.deg;
        let mut raw = vec![Rational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        let mut out = vec![Rational::zero(); deg];
        for (j, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if j < deg {
                out[j] += c;
            } else {
                for (i, red) in md.pow_red[j].iter().enumerate() {
                    if !red.is_zero() {
                        out[i] += &c * Rational::from(red.clone());
                    }
                }
            }
        }
        CycloElement { order: self.order, coeffs: out }
    }

    /// Extract the rational value of a completed sum: all higher-degree
    /// coordinates must vanish.
    pub fn project_rational(&self) -> Result<Rational> {
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            if !c.is_zero() {
                return Err(Error::NotRational(i));
            }
        }
        Ok(self.coeffs[0].clone())
    }
}

/// Euler's totient, for test assertions about deg Phi_m.
pub fn euler_phi(m: u32) -> u32 {
    let mut n = m as u64;
    let mut phi = n;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            phi -= phi / d;
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi as u32
}
