//! Characters of GF(p), Greene binomials, Gaussian hypergeometric series,
//! generalized Apery numbers, and the congruence linking them.
//!
//! Multiplicative characters of GF(p)* are realized through a discrete-log
//! table against a fixed primitive root g: the character of index j sends
//! g^k to zeta_{p-1}^{jk}. Every character, including the trivial one, is
//! extended by chi(0) = 0; that convention makes the hypergeometric sum at
//! argument 0 vanish and is what the identity with the curve coefficients
//! pins down numerically.

use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::exact::{ord_p, CycloElement, Int, Rational};
use crate::legendre;

/// Discrete-log machinery for one odd prime p; immutable once built.
#[derive(Clone, Debug)]
pub struct CharContext {
    p: u64,
    generator: u64,
    /// order of the character group, p - 1
    m: u32,
    /// dlog[x] for x in 1..p; dlog[0] is unused
    dlog: Vec<u32>,
}

/// A multiplicative character chi_j, j taken mod p - 1. Index 0 is the
/// trivial character epsilon; index (p-1)/2 is the quadratic character phi;
/// conjugation is index negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharacterIndex(pub u32);

impl CharContext {
    pub fn new(p: u64) -> Result<Self> {
        let g = (2..p)
            .find(|&g| is_primitive_root(g, p))
            .ok_or_else(|| Error::Precondition(format!("{p} is not an odd prime")))?;
        CharContext::with_generator(p, g)
    }

    /// Same context against a caller-chosen primitive root; character values
    /// move around but every completed rational-valued sum is unchanged.
    pub fn with_generator(p: u64, g: u64) -> Result<Self> {
        if p < 3 || !arith::is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not an odd prime")));
        }
        if !is_primitive_root(g % p, p) {
            return Err(Error::Precondition(format!(
                "{g} is not a primitive root mod {p}"
            )));
        }
        let m = (p - 1) as u32;
        let mut dlog = vec![0u32; p as usize];
        let mut acc = 1u64;
        for k in 0..m {
            dlog[acc as usize] = k;
            acc = acc * (g % p) % p;
        }
        Ok(CharContext { p, generator: g % p, m, dlog })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn epsilon(&self) -> CharacterIndex {
        CharacterIndex(0)
    }

    pub fn phi(&self) -> CharacterIndex {
        CharacterIndex(self.m / 2)
    }

    pub fn conj(&self, j: CharacterIndex) -> CharacterIndex {
        CharacterIndex((self.m - j.0 % self.m) % self.m)
    }

    pub fn mul_char(&self, a: CharacterIndex, b: CharacterIndex) -> CharacterIndex {
        CharacterIndex((a.0 % self.m + b.0 % self.m) % self.m)
    }

    fn exponent(&self, j: CharacterIndex, x: u64) -> u32 {
        debug_assert!(x % self.p != 0);
        ((j.0 % self.m) as u64 * self.dlog[(x % self.p) as usize] as u64 % self.m as u64) as u32
    }
}

fn is_primitive_root(g: u64, p: u64) -> bool {
    if p < 3 || !arith::is_prime(p) || g % p == 0 {
        return false;
    }
    arith::factor(p - 1)
        .iter()
        .all(|&(q, _)| arith::pow_mod(g, (p - 1) / q, p) != 1)
}

/// chi_j(x) as an element of Q(zeta_{p-1}); chi(0) = 0 for every character.
pub fn char_value(ctx: &CharContext, j: CharacterIndex, x: u64) -> CycloElement {
    if x % ctx.p == 0 {
        return CycloElement::zero(ctx.m);
    }
    CycloElement::zeta_pow(ctx.m, ctx.exponent(j, x) as i64)
}

/// Greene's binomial (A over B) = B(-1)/p * J(A, conj(B)) with the Jacobi
/// sum J(A, B) = sum_x A(x) B(1 - x).
pub fn greene_binomial(ctx: &CharContext, a: CharacterIndex, b: CharacterIndex) -> CycloElement {
    let p = ctx.p;
    let bbar = ctx.conj(b);
    // accumulate integer counts per zeta exponent, then fold once
    let mut counts = vec![Int::zero(); ctx.m as usize];
    for x in 2..p {
        let e = (ctx.exponent(a, x) as u64 + ctx.exponent(bbar, (p + 1 - x) % p) as u64)
            % ctx.m as u64;
        counts[e as usize] += 1;
    }
    // B(-1) = zeta^{j_B * (p-1)/2} = (-1)^{j_B}
    let sign = if (b.0 % ctx.m) % 2 == 0 { 1 } else { -1 };
    let scale = Rational::new(Int::from(sign), Int::from(p));
    CycloElement::from_zeta_counts(ctx.m, &counts, &scale)
}

/// Greene's w F_{w-1}(A_0, ..., A_n; B_1, ..., B_n | x):
/// (p/(p-1)) sum over all characters chi of
/// (A_0 chi over chi)(A_1 chi over B_1 chi)...(A_n chi over B_n chi) chi(x).
/// The completed sum must be rational; anything else is an internal error.
pub fn hypergeometric(
    ctx: &CharContext,
    top: &[CharacterIndex],
    bottom: &[CharacterIndex],
    x: u64,
) -> Result<Rational> {
    assert!(!top.is_empty() && bottom.len() + 1 == top.len());
    if x % ctx.p == 0 {
        return Ok(Rational::zero());
    }
    let mut total = CycloElement::zero(ctx.m);
    for j in 0..ctx.m {
        let chi = CharacterIndex(j);
        let mut term = greene_binomial(ctx, ctx.mul_char(top[0], chi), chi);
        for (a, b) in top[1..].iter().zip(bottom) {
            if term.is_zero() {
                break;
            }
            term = term.mul(&greene_binomial(
                ctx,
                ctx.mul_char(*a, chi),
                ctx.mul_char(*b, chi),
            ));
        }
        term = term.mul(&char_value(ctx, chi, x));
        total = total.add(&term);
    }
    let scaled = total.scale(&Rational::new(Int::from(ctx.p), Int::from(ctx.p - 1)));
    scaled.project_rational()
}

/// The specialization 2F1(phi, phi; epsilon | x).
pub fn two_f1(ctx: &CharContext, lam_mod_p: u64) -> Result<Rational> {
    hypergeometric(ctx, &[ctx.phi(), ctx.phi()], &[ctx.epsilon()], lam_mod_p)
}

/// Parameters of the generalized Apery number D(n; m, l, r).
#[derive(Clone, Debug)]
pub struct AperyParams {
    pub n: u64,
    pub m: u32,
    pub l: u32,
    pub r: Rational,
}

/// D(n; m, l, r) = sum_{k=0}^{n} C(n+k, k)^m C(n, k)^l r^{lk}, with the
/// k = 0 term read as 1 even when r = 0 (0^0 = 1).
pub fn apery_d(params: &AperyParams) -> Rational {
    let AperyParams { n, m, l, r } = params;
    let mut sum = Rational::zero();
    let mut rpow = Rational::one(); // r^{lk}
    let rl = pow_rational(r, *l);
    for k in 0..=*n {
        let c1 = num_integer::binomial(Int::from(n + k), Int::from(k));
        let c2 = num_integer::binomial(Int::from(*n), Int::from(k));
        let term = Rational::from(c1.pow(*m) * c2.pow(*l)) * &rpow;
        sum += term;
        rpow *= &rl;
    }
    sum
}

fn pow_rational(r: &Rational, e: u32) -> Rational {
    let mut out = Rational::one();
    for _ in 0..e {
        out *= r;
    }
    out
}

/// Reduce lambda mod p after checking ord_p(lambda (lambda - 1)) = 0; the
/// error marks p as a bad prime for the congruence machinery.
pub fn lambda_mod_p(lam: &Rational, p: u64) -> Result<u64> {
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    let prod = lam * (lam - Rational::one());
    if prod.is_zero() || ord_p(&prod, p)? != 0 {
        return Err(Error::BadReduction(p));
    }
    let num = arith::bigint_mod_u64(lam.numer(), p);
    let den = arith::bigint_mod_u64(lam.denom(), p);
    Ok((num as u128 * arith::inv_mod(den, p) as u128 % p as u128) as u64)
}

/// B(p; lambda) = (-1)^{(p+1)/2} (p-1) sum_{k=0}^{f} C(f+k,k) C(f,k) (-lambda)^k
/// reduced mod p, with f = (p-1)/2. Binomials stay p-unit since f + k < p.
pub fn theorem2_rhs(p: u64, lam: &Rational) -> Result<u64> {
    let lam_bar = lambda_mod_p(lam, p)?;
    let f = (p - 1) / 2;
    let pm = p as u128;
    let neg_lam = (p - lam_bar) % p;
    let mut c1: u128 = 1; // C(f+k, k)
    let mut c2: u128 = 1; // C(f, k)
    let mut xpow: u128 = 1; // (-lambda)^k
    let mut sum: u128 = 0;
    for k in 0..=f {
        if k > 0 {
            let invk = arith::inv_mod(k, p) as u128;
            c1 = c1 * ((f + k) as u128 % pm) % pm * invk % pm;
            c2 = c2 * ((f - k + 1) as u128 % pm) % pm * invk % pm;
            xpow = xpow * neg_lam as u128 % pm;
        }
        sum = (sum + c1 * c2 % pm * xpow) % pm;
    }
    let sign_flip = (p + 1) / 2 % 2 == 1;
    let mut b = sum * ((p - 1) as u128) % pm;
    if sign_flip {
        b = (pm - b) % pm;
    }
    Ok(b as u64)
}

/// The identity 2F1(lambda mod p) = -phi(-1) a(p; lambda) / p, checked as an
/// exact rational equality.
pub fn verify_eq5(lam: &Rational, p: u64) -> Result<bool> {
    let lam_bar = lambda_mod_p(lam, p)?;
    let ctx = CharContext::new(p)?;
    let lhs = two_f1(&ctx, lam_bar)?;
    let ap = legendre::ap_good(lam, p)?;
    let phi_neg1: i64 = if (p - 1) / 2 % 2 == 0 { 1 } else { -1 };
    let rhs = Rational::new(Int::from(-phi_neg1 * ap), Int::from(p));
    Ok(lhs == rhs)
}

/// Congruence a/b == c/d (mod p) for p-integral rationals: ord_p of the
/// difference is >= 1. Errors if either side has p in its denominator.
pub fn rationals_congruent_mod_p(a: &Rational, b: &Rational, p: u64) -> Result<bool> {
    for side in [a, b] {
        if !side.is_zero() && ord_p(side, p)? < 0 {
            return Err(Error::Precondition(format!(
                "{side} is not p-integral at p = {p}"
            )));
        }
    }
    let diff = a - b;
    if diff.is_zero() {
        return Ok(true);
    }
    Ok(ord_p(&diff, p)? >= 1)
}

/// D(f; m, l, r) == (p/(p-1))^{w-1} wF_{w-1}(phi,...,phi; eps,...,eps | (-r)^l)
/// (mod p) with w = m + l and f = (p-1)/2.
pub fn verify_eq6(p: u64, m: u32, l: u32, r: &Rational) -> Result<bool> {
    let w = m + l;
    if w < 1 {
        return Err(Error::Precondition("w = m + l must be positive".into()));
    }
    if p < 3 || !arith::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    if r.is_zero() || ord_p(r, p)? != 0 {
        return Err(Error::Precondition(format!(
            "r = {r} must be a p-unit at p = {p}"
        )));
    }
    let f = (p - 1) / 2;
    let lhs = apery_d(&AperyParams { n: f, m, l, r: r.clone() });

    let neg_r = -r;
    let num = arith::bigint_mod_u64(neg_r.numer(), p);
    let den = arith::bigint_mod_u64(neg_r.denom(), p);
    let base = num * arith::inv_mod(den, p) % p;
    let arg = arith::pow_mod(base, l as u64, p);

    let ctx = CharContext::new(p)?;
    let top = vec![ctx.phi(); w as usize];
    let bottom = vec![ctx.epsilon(); (w - 1) as usize];
    let fval = hypergeometric(&ctx, &top, &bottom, arg)?;
    let scale = pow_rational(&Rational::new(Int::from(p), Int::from(p - 1)), w - 1);
    rationals_congruent_mod_p(&lhs, &(scale * fval), p)
}

/// The unique integer congruent to `residue` mod p in the Hasse window
/// (-2 sqrt(p), 2 sqrt(p)); for p > 16 the window holds at most one
/// representative per class.
pub fn hasse_reconstruct(p: u64, residue: i64) -> Result<i64> {
    if !arith::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if p <= 16 {
        return Err(Error::HasseAmbiguous(p));
    }
    let r = residue.rem_euclid(p as i64) as u64;
    if r * r < 4 * p {
        return Ok(r as i64);
    }
    let neg = p - r;
    if neg * neg < 4 * p {
        return Ok(-(neg as i64));
    }
    Err(Error::HasseOutOfRange(r, p))
}
