//! Legendre curves E_lambda : y^2 = x(x-1)(x-lambda) over Q.
//!
//! For lambda = a/b in lowest terms, the admissible change of variables
//! (x, y) -> (X/b^2, Y/b^3) produces the integral model
//!
//!   Y^2 = X^3 - b(a+b) X^2 + a b^3 X,
//!
//! isomorphic to E_lambda over Q with no quadratic twist. Conductors come
//! from Tate's algorithm run at every prime dividing the discriminant
//! 16 a^2 b^8 (a-b)^2, with the model minimized at each prime as the
//! algorithm prescribes. Good-prime coefficients a(p) are Legendre-symbol
//! character sums; bad-prime coefficients come from counting smooth points
//! on the reduced minimal model; composite indices follow the Hecke
//! recursions of weight-2 newform theory.

use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::exact::{int_ord_p, ord_p, Int, Rational};

/// The parameter lambda in Q \ {0, 1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegendreCurve {
    lam: Rational,
}

impl LegendreCurve {
    pub fn new(lam: Rational) -> Result<Self> {
        if lam.is_zero() || lam.is_one() {
            return Err(Error::SingularCurve);
        }
        Ok(LegendreCurve { lam })
    }

    pub fn lambda(&self) -> &Rational {
        &self.lam
    }

    pub fn integral_model(&self) -> IntegralModel {
        // lambda is already vetted, so this cannot fail
        integral_model(&self.lam).unwrap()
    }

    pub fn conductor(&self) -> (u64, Vec<ReductionData>) {
        conductor(&self.lam).unwrap()
    }
}

/// A long Weierstrass model with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralModel {
    pub a1: Int,
    pub a2: Int,
    pub a3: Int,
    pub a4: Int,
    pub a6: Int,
}

impl IntegralModel {
    pub fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Self {
        IntegralModel {
            a1: Int::from(a1),
            a2: Int::from(a2),
            a3: Int::from(a3),
            a4: Int::from(a4),
            a6: Int::from(a6),
        }
    }

    pub fn b_invariants(&self) -> (Int, Int, Int, Int) {
        let b2 = &self.a1 * &self.a1 + Int::from(4) * &self.a2;
        let b4 = Int::from(2) * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + Int::from(4) * &self.a6;
        let b8 = &self.a1 * &self.a1 * &self.a6 + Int::from(4) * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> Int {
        let (b2, b4, b6, b8) = self.b_invariants();
        -&b2 * &b2 * &b8 - Int::from(8) * &b4 * &b4 * &b4 - Int::from(27) * &b6 * &b6
            + Int::from(9) * &b2 * &b4 * &b6
    }

    /// Translation (x, y) -> (x + r, y + s x + t) with u = 1.
    fn transform(&self, r: &Int, s: &Int, t: &Int) -> Self {
        let a1 = &self.a1 + Int::from(2) * s;
        let a2 = &self.a2 - s * &self.a1 + Int::from(3) * r - s * s;
        let a3 = &self.a3 + r * &self.a1 + Int::from(2) * t;
        let a4 = &self.a4 - s * &self.a3 + Int::from(2) * r * &self.a2
            - (t + r * s) * &self.a1
            + Int::from(3) * r * r
            - Int::from(2) * s * t;
        let a6 = &self.a6 + r * &self.a4 + r * r * &self.a2 + r * r * r
            - t * &self.a3
            - t * t
            - r * t * &self.a1;
        IntegralModel { a1, a2, a3, a4, a6 }
    }

    /// Rescale by u (the non-minimal direction): a_i -> a_i * u^i.
    pub fn scale_up(&self, u: u64) -> Self {
        let u = Int::from(u);
        IntegralModel {
            a1: &self.a1 * &u,
            a2: &self.a2 * u.pow(2),
            a3: &self.a3 * u.pow(3),
            a4: &self.a4 * u.pow(4),
            a6: &self.a6 * u.pow(6),
        }
    }

    /// Divide out one power of p (step 11 of Tate's algorithm); exactness is
    /// guaranteed by the algorithm when this is reached.
    fn scale_down(&self, p: u64) -> Self {
        let p = Int::from(p);
        let div = |x: &Int, k: u32| {
            let d = p.pow(k);
            assert!((x % &d).is_zero(), "non-minimal rescale was not exact");
            x / d
        };
        IntegralModel {
            a1: div(&self.a1, 1),
            a2: div(&self.a2, 2),
            a3: div(&self.a3, 3),
            a4: div(&self.a4, 4),
            a6: div(&self.a6, 6),
        }
    }

    fn reduce(&self, p: u64) -> [u64; 5] {
        [
            arith::bigint_mod_u64(&self.a1, p),
            arith::bigint_mod_u64(&self.a2, p),
            arith::bigint_mod_u64(&self.a3, p),
            arith::bigint_mod_u64(&self.a4, p),
            arith::bigint_mod_u64(&self.a6, p),
        ]
    }
}

/// Kodaira symbol of the special fiber at one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KodairaType {
    /// I_0 is good reduction; I_n (n >= 1) is multiplicative.
    I(u64),
    II,
    III,
    IV,
    IStar(u64),
    IVStar,
    IIIStar,
    IIStar,
}

impl std::fmt::Display for KodairaType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

/// Local data at one prime: fiber type, conductor exponent and the local
/// coefficient a_p (p - #smooth points for bad p, the full 1 + p - N(p) for
/// good p), plus the p-minimal model Tate ended on.
#[derive(Clone, Debug)]
pub struct ReductionData {
    pub prime: u64,
    pub kodaira: KodairaType,
    pub conductor_exponent: u32,
    pub local_ap: i64,
    pub minimal_model: IntegralModel,
}

fn is_div(x: &Int, m: &Int) -> bool {
    (x % m).is_zero()
}

/// Affine smooth-point count plus the point at infinity, over GF(p).
fn smooth_point_count(e: &IntegralModel, p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = e.reduce(p);
    let pm = p as u128;
    let mut count = 1u64; // infinity
    for x in 0..p {
        for y in 0..p {
            let (x, y) = (x as u128, y as u128);
            let lhs = (y * y + a1 as u128 * x % pm * y + a3 as u128 * y) % pm;
            let rhs = (x * x * x % pm + a2 as u128 * x % pm * x + a4 as u128 * x + a6 as u128) % pm;
            if lhs % pm != rhs % pm {
                continue;
            }
            // partial derivatives of y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x - a6
            let fy = (2 * y + a1 as u128 * x + a3 as u128) % pm;
            let fx_neg = (3 * x * x % pm + 2 * a2 as u128 * x % pm + a4 as u128) % pm;
            let fx = (a1 as u128 * y % pm + pm - fx_neg) % pm;
            if fy != 0 || fx != 0 {
                count += 1;
            }
        }
    }
    count
}

/// Full point count (all points smooth or not) over GF(p).
fn full_point_count(e: &IntegralModel, p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = e.reduce(p);
    let pm = p as u128;
    let mut count = 1u64;
    for x in 0..p as u128 {
        for y in 0..p as u128 {
            let lhs = (y * y + a1 as u128 * x % pm * y + a3 as u128 * y) % pm;
            let rhs = (x * x * x % pm + a2 as u128 * x % pm * x + a4 as u128 * x + a6 as u128) % pm;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    count
}

/// Multiplicity of alpha as a root of the monic cubic T^3 + b T^2 + c T + d
/// over GF(p).
fn cubic_root_multiplicity(b: u64, c: u64, d: u64, alpha: u64, p: u64) -> u32 {
    let mut coeffs = vec![d % p, c % p, b % p, 1];
    let mut mult = 0;
    // repeated synthetic division by (T - alpha); Horner captures the quotient
    while coeffs.len() > 1 {
        let mut quot = vec![0u64; coeffs.len() - 1];
        let mut r: u128 = 0;
        for i in (0..coeffs.len()).rev() {
            r = (r * alpha as u128 + coeffs[i] as u128) % p as u128;
            if i > 0 {
                quot[i - 1] = r as u64;
            }
        }
        if r != 0 {
            return mult;
        }
        mult += 1;
        coeffs = quot;
    }
    mult
}

/// Discriminant of T^3 + b T^2 + c T + d, reduced mod p.
fn cubic_discriminant_mod(b: &Int, c: &Int, d: &Int, p: u64) -> u64 {
    let disc = Int::from(18) * b * c * d - Int::from(4) * b * b * b * d + b * b * c * c
        - Int::from(4) * c * c * c
        - Int::from(27) * d * d;
    arith::bigint_mod_u64(&disc, p)
}

fn exact_div(x: &Int, d: &Int) -> Int {
    assert!(is_div(x, d), "expected exact division in Tate's algorithm");
    x / d
}

/// Tate's algorithm at p: fiber type, conductor exponent (via the type's
/// component count), local a_p, and the p-minimal model reached. Handles all
/// primes including 2 and 3; loops back on non-minimal models.
pub fn tate(model: &IntegralModel, p: u64) -> ReductionData {
    let pi = Int::from(p);
    let p2 = &pi * &pi;
    let mut e = model.clone();

    let finish = |e: IntegralModel, kodaira: KodairaType, f: u32| {
        let local_ap = match kodaira {
            KodairaType::I(0) => p as i64 + 1 - full_point_count(&e, p) as i64,
            _ => p as i64 - smooth_point_count(&e, p) as i64,
        };
        ReductionData {
            prime: p,
            kodaira,
            conductor_exponent: f,
            local_ap,
            minimal_model: e,
        }
    };

    loop {
        let disc = e.discriminant();
        assert!(!disc.is_zero(), "singular Weierstrass model");
        let n = u32::try_from(int_ord_p(&disc, p)).unwrap();
        if n == 0 {
            return finish(e, KodairaType::I(0), 0);
        }

        // Step 2: move the singular point to (0, 0).
        let (x0, y0) = singular_point(&e, p);
        e = e.transform(&Int::from(x0), &Int::zero(), &Int::from(y0));
        let (b2, _, b6, b8) = e.b_invariants();
        if !is_div(&b2, &pi) {
            return finish(e, KodairaType::I(n as u64), 1);
        }
        // Step 3-5
        if !is_div(&e.a6, &p2) {
            return finish(e, KodairaType::II, n);
        }
        if !is_div(&b8, &(&p2 * &pi)) {
            return finish(e, KodairaType::III, n - 1);
        }
        if !is_div(&b6, &(&p2 * &pi)) {
            return finish(e, KodairaType::IV, n - 2);
        }

        // Normalize so that p | a1, a2; p^2 | a3, a4; p^3 | a6.
        e = normalize_for_cubic(&e, p);

        // Step 6: the reduced cubic T^3 + a21 T^2 + a42 T + a63.
        let a21 = exact_div(&e.a2, &pi);
        let a42 = exact_div(&e.a4, &p2);
        let a63 = exact_div(&e.a6, &(&p2 * &pi));
        if cubic_discriminant_mod(&a21, &a42, &a63, p) != 0 {
            return finish(e, KodairaType::IStar(0), n - 4);
        }
        let b = arith::bigint_mod_u64(&a21, p);
        let c = arith::bigint_mod_u64(&a42, p);
        let d = arith::bigint_mod_u64(&a63, p);
        let (alpha, mult) = (0..p)
            .map(|x| (x, cubic_root_multiplicity(b, c, d, x, p)))
            .max_by_key(|&(_, m)| m)
            .unwrap();
        assert!(mult >= 2, "vanishing cubic discriminant but no repeated root");

        if mult == 2 {
            // Step 7: type I_n* for some n >= 1.
            e = e.transform(&(&pi * Int::from(alpha)), &Int::zero(), &Int::zero());
            let (sub_n, e2) = istar_subloop(e, p);
            return finish(e2, KodairaType::IStar(sub_n), n - u32::try_from(sub_n).unwrap() - 4);
        }

        // Steps 8-11: triple root.
        e = e.transform(&(&pi * Int::from(alpha)), &Int::zero(), &Int::zero());
        let a32 = exact_div(&e.a3, &p2);
        let a64 = exact_div(&e.a6, &(&p2 * &p2));
        let disc_q = arith::bigint_mod_u64(&(&a32 * &a32 + Int::from(4) * &a64), p);
        if disc_q != 0 {
            return finish(e, KodairaType::IVStar, n - 6);
        }
        let beta = if p == 2 {
            arith::bigint_mod_u64(&a64, 2)
        } else {
            let a = arith::bigint_mod_u64(&a32, p);
            (p - a % p) % p * arith::inv_mod(2, p) % p
        };
        e = e.transform(&Int::zero(), &Int::zero(), &(&p2 * Int::from(beta)));
        if !is_div(&e.a4, &(&p2 * &p2)) {
            return finish(e, KodairaType::IIIStar, n - 7);
        }
        if !is_div(&e.a6, &(&p2 * &p2 * &p2)) {
            return finish(e, KodairaType::IIStar, n - 8);
        }
        // Step 11: not minimal; rescale and start over.
        e = e.scale_down(p);
    }
}

/// Locate the singular point of the reduction mod p by exhaustive scan.
fn singular_point(e: &IntegralModel, p: u64) -> (u64, u64) {
    let [a1, a2, a3, a4, a6] = e.reduce(p);
    let pm = p as u128;
    for x in 0..p as u128 {
        for y in 0..p as u128 {
            let on = (y * y + a1 as u128 * x % pm * y + a3 as u128 * y) % pm
                == (x * x * x % pm + a2 as u128 * x % pm * x + a4 as u128 * x + a6 as u128) % pm;
            if !on {
                continue;
            }
            let fy = (2 * y + a1 as u128 * x + a3 as u128) % pm;
            let fx_neg = (3 * x * x % pm + 2 * a2 as u128 * x % pm + a4 as u128) % pm;
            let fx = (a1 as u128 * y % pm + pm - fx_neg) % pm;
            if fy == 0 && fx == 0 {
                return (x as u64, y as u64);
            }
        }
    }
    panic!("bad reduction without a singular point mod {p}");
}

/// Choose (s, t) so that p | a1, a2; p^2 | a3, a4; p^3 | a6. For odd p the
/// closed forms s = -a1/2 (mod p), t = -a3/2 (mod p^2) suffice; for p = 2 a
/// tiny search settles it.
fn normalize_for_cubic(e: &IntegralModel, p: u64) -> IntegralModel {
    let pi = Int::from(p);
    let p2 = &pi * &pi;
    let p3 = &p2 * &pi;
    let good = |m: &IntegralModel| {
        is_div(&m.a1, &pi)
            && is_div(&m.a2, &pi)
            && is_div(&m.a3, &p2)
            && is_div(&m.a4, &p2)
            && is_div(&m.a6, &p3)
    };
    if p == 2 {
        for s in 0..2u64 {
            for t in 0..4u64 {
                let cand = e.transform(&Int::zero(), &Int::from(s), &Int::from(t));
                if good(&cand) {
                    return cand;
                }
            }
        }
        panic!("no normalizing translation found at p = 2");
    }
    let inv2 = arith::inv_mod(2, p);
    let s = arith::bigint_mod_u64(&-&e.a1, p) % p * inv2 % p;
    let e = e.transform(&Int::zero(), &Int::from(s), &Int::zero());
    let psq = p as u128 * p as u128;
    let inv2_sq = {
        // inverse of 2 mod p^2
        let mut inv = inv2 as u128;
        // Newton lift: inv' = inv (2 - 2 inv) mod p^2
        inv = inv * ((2 * psq + 2 - (2 * inv) % psq) % psq) % psq;
        inv
    };
    let a3_mod = {
        let r = &e.a3 % Int::from(psq);
        let r = if r.is_negative() { r + Int::from(psq) } else { r };
        u128::try_from(&r).unwrap()
    };
    let t = (psq - a3_mod) % psq * inv2_sq % psq;
    let e = e.transform(&Int::zero(), &Int::zero(), &Int::from(t));
    assert!(good(&e), "normalization failed at p = {p}");
    e
}

/// The alternating sub-procedure of step 7: returns the index n of I_n* and
/// the (translated) model it finished on.
fn istar_subloop(mut e: IntegralModel, p: u64) -> (u64, IntegralModel) {
    let pi = Int::from(p);
    let inv2 = if p == 2 { 0 } else { arith::inv_mod(2, p) };
    let mut ix: u64 = 3;
    let mut iy: u64 = 3;
    let mut mx = &pi * &pi;
    let mut my = mx.clone();
    loop {
        let a3t = exact_div(&e.a3, &my);
        let a6t = exact_div(&e.a6, &(&mx * &my));
        let disc_y = arith::bigint_mod_u64(&(&a3t * &a3t + Int::from(4) * &a6t), p);
        if disc_y != 0 {
            return (ix + iy - 5, e);
        }
        let beta = if p == 2 {
            arith::bigint_mod_u64(&a6t, 2)
        } else {
            (p - arith::bigint_mod_u64(&a3t, p)) % p * inv2 % p
        };
        e = e.transform(&Int::zero(), &Int::zero(), &(&my * Int::from(beta)));
        my *= &pi;
        iy += 1;

        let a2t = exact_div(&e.a2, &pi);
        let a4t = exact_div(&e.a4, &(&pi * &mx));
        let a6t = exact_div(&e.a6, &(&mx * &my));
        let disc_x = arith::bigint_mod_u64(
            &(&a4t * &a4t - Int::from(4) * &a2t * &a6t),
            p,
        );
        if disc_x != 0 {
            return (ix + iy - 5, e);
        }
        let a2_unit = arith::bigint_mod_u64(&a2t, p);
        assert!(a2_unit != 0, "I_n* loop lost its simple root");
        let gamma = if p == 2 {
            arith::bigint_mod_u64(&a6t, 2)
        } else {
            let a4m = arith::bigint_mod_u64(&a4t, p);
            (p - a4m) % p * arith::inv_mod(2 * a2_unit % p, p) % p
        };
        e = e.transform(&(&mx * Int::from(gamma)), &Int::zero(), &Int::zero());
        mx *= &pi;
        ix += 1;
    }
}

// ---------------------------------------------------------------------------
// Curve-level operations

/// Integral model for lambda = a/b reduced: Y^2 = X^3 - b(a+b) X^2 + a b^3 X.
pub fn integral_model(lam: &Rational) -> Result<IntegralModel> {
    if lam.is_zero() || lam.is_one() {
        return Err(Error::SingularCurve);
    }
    let a = lam.numer().clone();
    let b = lam.denom().clone();
    Ok(IntegralModel {
        a1: Int::zero(),
        a2: -&b * (&a + &b),
        a3: Int::zero(),
        a4: &a * &b * &b * &b,
        a6: Int::zero(),
    })
}

/// Conductor of a model: run Tate at every prime dividing the discriminant.
pub fn conductor_of_model(model: &IntegralModel) -> (u64, Vec<ReductionData>) {
    let disc = model.discriminant();
    let primes = arith::prime_support_bigint(&disc);
    let mut n: u64 = 1;
    let mut data = Vec::new();
    for p in primes {
        let rd = tate(model, p);
        n *= p.pow(rd.conductor_exponent);
        data.push(rd);
    }
    (n, data)
}

/// Conductor N of E_lambda with per-prime reduction data for every prime of
/// the discriminant (entries with exponent 0 are primes that became good
/// after minimization).
pub fn conductor(lam: &Rational) -> Result<(u64, Vec<ReductionData>)> {
    Ok(conductor_of_model(&integral_model(lam)?))
}

/// a(p) for a good odd prime, as the Legendre-symbol character sum
/// -sum_x phi(x (x-1) (x - lambda mod p)).
pub fn ap_good(lam: &Rational, p: u64) -> Result<i64> {
    if p == 2 || !arith::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    let lam_m1 = lam - Rational::one();
    if ord_p(lam, p)? != 0 || ord_p(&lam_m1, p)? != 0 {
        return Err(Error::BadReduction(p));
    }
    let num = arith::bigint_mod_u64(lam.numer(), p);
    let den = arith::bigint_mod_u64(lam.denom(), p);
    let lam_bar = num as u128 * arith::inv_mod(den, p) as u128 % p as u128;
    let lam_bar = lam_bar as u64;

    // quadratic residue table
    let mut table = vec![-1i64; p as usize];
    table[0] = 0;
    for x in 1..p {
        table[(x as u128 * x as u128 % p as u128) as usize] = 1;
    }
    let pm = p as u128;
    let mut sum: i64 = 0;
    for x in 0..p as u128 {
        let v = x * ((x + pm - 1) % pm) % pm * ((x + pm - lam_bar as u128) % pm) % pm;
        sum += table[v as usize];
    }
    Ok(-sum)
}

/// a(p) of an arbitrary integral model at a good odd prime, via the
/// completed-square character sum.
pub fn ap_model(model: &IntegralModel, p: u64) -> Result<i64> {
    if p == 2 || !arith::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not an odd prime")));
    }
    if int_ord_p(&model.discriminant(), p) != 0 {
        return Err(Error::BadReduction(p));
    }
    let [a1, a2, a3, a4, a6] = model.reduce(p);
    let mut table = vec![-1i64; p as usize];
    table[0] = 0;
    for x in 1..p {
        table[(x as u128 * x as u128 % p as u128) as usize] = 1;
    }
    let pm = p as u128;
    let mut sum: i64 = 0;
    for x in 0..p as u128 {
        let lin = (a1 as u128 * x + a3 as u128) % pm;
        let f = (x * x % pm * x + a2 as u128 * x % pm * x + a4 as u128 * x + a6 as u128) % pm;
        let d = (lin * lin + 4 * f) % pm;
        sum += table[d as usize];
    }
    Ok(-sum)
}

/// The newform coefficients a(1..T) attached to E_lambda: primes from point
/// counts (good) or local data (bad), composites by the Hecke recursions.
#[derive(Clone, Debug)]
pub struct NewformSeries {
    pub lam: Rational,
    coeffs: Vec<Int>,
}

impl NewformSeries {
    /// a(n) for 1 <= n <= T.
    pub fn a(&self, n: usize) -> &Int {
        &self.coeffs[n - 1]
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }
}

pub fn newform_coefficients(lam: &Rational, t: usize) -> Result<NewformSeries> {
    assert!(t >= 1);
    let model = integral_model(lam)?;
    let (n_cond, red) = conductor_of_model(&model);

    let ap_at = |p: u64| -> i64 {
        if let Some(rd) = red.iter().find(|r| r.prime == p) {
            rd.local_ap
        } else {
            // odd prime away from the discriminant: the character sum applies
            ap_good(lam, p).expect("good prime preconditions")
        }
    };

    // smallest prime factor sieve
    let mut spf = vec![0usize; t + 1];
    for i in 2..=t {
        if spf[i] == 0 {
            let mut j = i;
            while j <= t {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }

    let mut a = vec![Int::zero(); t + 1];
    if t >= 1 {
        a[1] = Int::one();
    }
    for n in 2..=t {
        let p = spf[n];
        let mut pk = p;
        let mut m = n / p;
        while m % p == 0 {
            pk *= p;
            m /= p;
        }
        a[n] = if m > 1 {
            &a[pk] * &a[m]
        } else if pk == p {
            Int::from(ap_at(p as u64))
        } else if n_cond % p as u64 == 0 {
            // bad prime: a(p^k) = a(p)^k
            &a[p] * &a[pk / p]
        } else {
            &a[p] * &a[pk / p] - Int::from(p) * &a[pk / (p * p)]
        };
    }
    a.remove(0);
    Ok(NewformSeries { lam: lam.clone(), coeffs: a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational;

    #[test]
    fn integral_model_examples() {
        let m = integral_model(&rational(5, 1)).unwrap();
        assert_eq!(m, IntegralModel::new(0, -6, 0, 5, 0));
        let m = integral_model(&rational(27, 16)).unwrap();
        assert_eq!(m, IntegralModel::new(0, -688, 0, 110592, 0));
        let m = integral_model(&rational(-7, 25)).unwrap();
        assert_eq!(m, IntegralModel::new(0, -450, 0, -7 * 15625, 0));
        assert!(matches!(integral_model(&Rational::zero()), Err(Error::SingularCurve)));
        assert!(matches!(integral_model(&Rational::one()), Err(Error::SingularCurve)));
    }

    #[test]
    fn model_discriminant_closed_form() {
        for (a, b) in [(27i64, 16i64), (5, 1), (81, 49), (-7, 25), (-1, 1), (3, 7)] {
            let m = integral_model(&rational(a, b)).unwrap();
            let expect = Int::from(16)
                * Int::from(a).pow(2)
                * Int::from(b).pow(8)
                * Int::from(a - b).pow(2);
            assert_eq!(m.discriminant(), expect);
        }
    }

    #[test]
    fn conductor_examples() {
        for (lam, n) in [
            (rational(27, 16), 33u64),
            (rational(5, 1), 40),
            (rational(81, 49), 42),
            (rational(-7, 25), 70),
            (rational(-1, 1), 32),
        ] {
            let (cond, _) = conductor(&lam).unwrap();
            assert_eq!(cond, n, "lambda = {lam}");
        }
    }

    #[test]
    fn conductor_exponent_classification() {
        // f = 0 iff good, f = 1 iff multiplicative (|ap| = 1), f >= 2 additive
        for (a, b) in [(27i64, 16i64), (5, 1), (81, 49), (-7, 25), (-1, 1), (2, 9), (10, 3)] {
            let (_, red) = conductor(&rational(a, b)).unwrap();
            for rd in red {
                match rd.conductor_exponent {
                    0 => assert!(matches!(rd.kodaira, KodairaType::I(0))),
                    1 => {
                        assert!(matches!(rd.kodaira, KodairaType::I(n) if n >= 1));
                        assert_eq!(rd.local_ap.abs(), 1, "p = {}", rd.prime);
                    }
                    _ => assert_eq!(rd.local_ap, 0, "p = {}", rd.prime),
                }
            }
        }
    }

    #[test]
    fn known_kodaira_types() {
        // lambda = 5 at p = 2: v(Delta) = 8, f = 3, fiber I_1*
        let m = integral_model(&rational(5, 1)).unwrap();
        let rd = tate(&m, 2);
        assert_eq!(rd.kodaira, KodairaType::IStar(1));
        assert_eq!(rd.conductor_exponent, 3);
        // y^2 = x^3 - x at p = 2: type III, f = 5
        let rd = tate(&IntegralModel::new(0, 0, 0, -1, 0), 2);
        assert_eq!(rd.kodaira, KodairaType::III);
        assert_eq!(rd.conductor_exponent, 5);
        // y^2 = x^3 + 1: IV at 2 (f=2), III at 3 (f=2), N = 36
        let m = IntegralModel::new(0, 0, 0, 0, 1);
        assert_eq!(tate(&m, 2).kodaira, KodairaType::IV);
        assert_eq!(tate(&m, 2).conductor_exponent, 2);
        assert_eq!(tate(&m, 3).kodaira, KodairaType::III);
        assert_eq!(tate(&m, 3).conductor_exponent, 2);
        assert_eq!(conductor_of_model(&m).0, 36);
    }

    #[test]
    fn conductor_invariant_under_rescaled_models() {
        for (a, b) in [(27i64, 16i64), (5, 1), (81, 49), (-7, 25)] {
            let lam = rational(a, b);
            let m = integral_model(&lam).unwrap();
            let (n, _) = conductor_of_model(&m);
            for u in [2u64, 3, 6] {
                let (nu, _) = conductor_of_model(&m.scale_up(u));
                assert_eq!(nu, n, "lambda = {lam}, u = {u}");
            }
        }
    }

    #[test]
    fn ap_good_tabulated_values() {
        let lam = rational(27, 16);
        for (p, a) in [(5u64, -2i64), (7, 4), (13, -2), (17, -2), (19, 0), (23, 8), (29, -6)] {
            assert_eq!(ap_good(&lam, p).unwrap(), a, "p = {p}");
        }
    }

    #[test]
    fn ap_symmetry_and_errors() {
        // lambda = -1: x -> -x symmetry kills the sum for p = 3 mod 4
        assert_eq!(ap_good(&rational(-1, 1), 7).unwrap(), 0);
        assert!(matches!(ap_good(&rational(5, 1), 5), Err(Error::BadReduction(5))));
        assert!(matches!(
            ap_good(&rational(27, 16), 2),
            Err(Error::Precondition(_))
        ));
    }

    /// Brute-force projective point count as the independent oracle for the
    /// character-sum a(p).
    fn count_oracle(lam_bar: u64, p: u64) -> u64 {
        let pm = p as u128;
        let mut count = 1u64;
        for x in 0..pm {
            for y in 0..pm {
                if y * y % pm
                    == x * ((x + pm - 1) % pm) % pm * ((x + pm - lam_bar as u128) % pm) % pm
                {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn ap_matches_enumeration_oracle() {
        for p in arith::primes_up_to(31).into_iter().filter(|&p| p > 2) {
            for (a, b) in [(3i64, 1i64), (5, 1), (27, 16), (-7, 25), (2, 1), (-3, 4)] {
                let lam = rational(a, b);
                match ap_good(&lam, p) {
                    Ok(ap) => {
                        let num = arith::bigint_mod_u64(lam.numer(), p);
                        let den = arith::bigint_mod_u64(lam.denom(), p);
                        let lam_bar =
                            (num as u128 * arith::inv_mod(den, p) as u128 % p as u128) as u64;
                        assert_eq!(
                            ap,
                            1 + p as i64 - count_oracle(lam_bar, p) as i64,
                            "p = {p}, lambda = {lam}"
                        );
                    }
                    Err(Error::BadReduction(_)) => {}
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
        }
    }

    #[test]
    fn hasse_bound_for_table_lambdas() {
        for (a, b) in [(27i64, 16i64), (5, 1), (81, 49), (-7, 25)] {
            let lam = rational(a, b);
            for p in arith::primes_up_to(101).into_iter().filter(|&p| p > 2) {
                if let Ok(ap) = ap_good(&lam, p) {
                    assert!(
                        ((ap * ap) as u64) < 4 * p,
                        "Hasse fails at p = {p}, lambda = {lam}"
                    );
                }
            }
        }
    }

    #[test]
    fn bad_primes_come_from_lambda_support() {
        for (a, b) in [(27i64, 16i64), (5, 1), (81, 49), (-7, 25)] {
            let lam = rational(a, b);
            let (n, _) = conductor(&lam).unwrap();
            let prod = &lam * (&lam - Rational::one());
            for (p, _) in arith::factor(n) {
                assert!(
                    p == 2 || ord_p(&prod, p).unwrap() != 0,
                    "prime {p} of N = {n} not in the support of lambda(lambda-1)"
                );
            }
        }
    }

    #[test]
    fn newform_examples() {
        let f = newform_coefficients(&rational(27, 16), 12).unwrap();
        // g(z) = q + q^2 - q^3 - q^4 + ...
        assert_eq!(f.a(1), &Int::one());
        assert_eq!(f.a(2), &Int::one());
        assert_eq!(f.a(3), &Int::from(-1));
        assert_eq!(f.a(4), &Int::from(-1));
        // a(4) = a(2)^2 - 2, a(6) = a(2) a(3)
        assert_eq!(f.a(4).clone(), f.a(2) * f.a(2) - Int::from(2));
        assert_eq!(f.a(6).clone(), f.a(2) * f.a(3));
        assert_eq!(f.a(5), &Int::from(-2));
        assert_eq!(f.a(7), &Int::from(4));
    }
}
