//! Truncated q-expansion arithmetic.
//!
//! A [`QExpansion`] stores exact integer coefficients together with a leading
//! exponent in (1/24)Z: `coeffs[i]` is the coefficient of
//! `q^{(offset24 + 24 i)/24}`. The precision window is the half-open exponent
//! range `[offset24, offset24 + 24 len)` (in 24ths); operations never extend
//! precision, and every result records the tightest valid truncation.
//!
//! Dedekind's eta-function is expanded through Euler's pentagonal-number
//! theorem; the naive product over (1 - q^n) lives in the test suite as the
//! independent oracle.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    /// 24 times the exponent of the first stored coefficient.
    offset24: i64,
    coeffs: Vec<Int>,
}

impl QExpansion {
    /// Build a series from a leading exponent (in 24ths) and coefficients,
    /// normalizing so the leading stored coefficient is nonzero. A series
    /// that is zero to its whole window keeps only the window end.
    pub fn new(offset24: i64, coeffs: Vec<Int>) -> Self {
        let mut s = QExpansion { offset24, coeffs };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.offset24 += 24 * lead_zeros as i64;
        }
    }

    /// The constant series 1, known to `terms` coefficients.
    pub fn one(terms: usize) -> Self {
        let mut coeffs = vec![Int::zero(); terms.max(1)];
        coeffs[0] = Int::one();
        QExpansion { offset24: 0, coeffs }
    }

    /// Zero, with a precision window ending at exponent `end24`/24.
    pub fn zero(end24: i64) -> Self {
        QExpansion { offset24: end24, coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored coefficients (the truncation T).
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn offset24(&self) -> i64 {
        self.offset24
    }

    /// End of the precision window, in 24ths (exclusive).
    pub fn end24(&self) -> i64 {
        self.offset24 + 24 * self.coeffs.len() as i64
    }

    /// Exponent of the leading term; None for the zero series.
    pub fn leading_exponent(&self) -> Option<Rational> {
        if self.is_zero() {
            None
        } else {
            Some(Rational::new(Int::from(self.offset24), Int::from(24)))
        }
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    /// Coefficient of q^{e24/24}, or None when the exponent lies at or past
    /// the precision window. Exponents below the leading term are exactly 0.
    pub fn coeff_at_exp24(&self, e24: i64) -> Option<Int> {
        if e24 >= self.end24() {
            return None;
        }
        if e24 < self.offset24 || (e24 - self.offset24) % 24 != 0 {
            return Some(Int::zero());
        }
        Some(self.coeffs[((e24 - self.offset24) / 24) as usize].clone())
    }

    /// Coefficient of q^n for an integer exponent n.
    pub fn coeff_at(&self, n: i64) -> Option<Int> {
        self.coeff_at_exp24(24 * n)
    }

    /// Dedekind's eta: q^{1/24} prod (1 - q^n), with T stored coefficients,
    /// via the pentagonal-number expansion of the product.
    pub fn eta_expansion(terms: usize) -> Self {
        assert!(terms >= 1);
        let mut coeffs = vec![Int::zero(); terms];
        coeffs[0] = Int::one();
        let mut k: i64 = 1;
        loop {
            let sign = if k % 2 == 0 { Int::one() } else { -Int::one() };
            let idx1 = k * (3 * k - 1) / 2;
            let idx2 = k * (3 * k + 1) / 2;
            if idx1 >= terms as i64 {
                break;
            }
            coeffs[idx1 as usize] = sign.clone();
            if idx2 < terms as i64 {
                coeffs[idx2 as usize] = sign;
            }
            k += 1;
        }
        QExpansion { offset24: 1, coeffs }
    }

    /// Cauchy product; offsets add and the result carries the tightest
    /// truncation implied by the operands' windows.
    pub fn mul(&self, other: &Self) -> Self {
        let off = self.offset24 + other.offset24;
        let end = (self.end24() + other.offset24).min(other.end24() + self.offset24);
        let len = ((end - off) / 24).max(0) as usize;
        let mut coeffs = vec![Int::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        QExpansion::new(off, coeffs)
    }

    /// Sum; both series must have offsets in the same coset of Z inside
    /// (1/24)Z, otherwise coefficients cannot be aligned.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.is_zero() && !other.is_zero() && (self.offset24 - other.offset24) % 24 != 0 {
            return Err(Error::IncompatibleOffsets);
        }
        let end = self.end24().min(other.end24());
        let off = if self.is_zero() {
            other.offset24.min(end)
        } else if other.is_zero() {
            self.offset24.min(end)
        } else {
            self.offset24.min(other.offset24)
        };
        let len = ((end - off) / 24).max(0) as usize;
        let mut coeffs = vec![Int::zero(); len];
        for (s, series) in [(0, self), (1, other)] {
            let _ = s;
            for (i, c) in series.coeffs.iter().enumerate() {
                let e = series.offset24 + 24 * i as i64;
                if e < end {
                    coeffs[((e - off) / 24) as usize] += c;
                }
            }
        }
        Ok(QExpansion::new(off, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QExpansion {
            offset24: self.offset24,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Int) -> Self {
        QExpansion::new(
            self.offset24,
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    /// Multiplicative inverse, valid when the leading coefficient is a unit
    /// (+-1, true for eta factors). Relative precision is preserved.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NonInvertibleLeading);
        }
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::NonInvertibleLeading);
        }
        let len = self.coeffs.len();
        let mut inv = vec![Int::zero(); len];
        inv[0] = c0.clone(); // 1/c0 = c0 for c0 = +-1
        for n in 1..len {
            let mut acc = Int::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &inv[n - k];
                }
            }
            inv[n] = -c0 * acc;
        }
        Ok(QExpansion { offset24: -self.offset24, coeffs: inv })
    }

    /// Integer power; negative exponents go through exact series inversion.
    pub fn int_pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(QExpansion::one(self.coeffs.len().max(1)));
        }
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut acc: Option<QExpansion> = None;
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => a.mul(&sq),
                });
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc.unwrap())
    }

    /// Substitute q -> q^d (index dilation). The window scales exactly: all
    /// intermediate exponents are known zeros.
    pub fn dilate(&self, d: u64) -> Self {
        assert!(d >= 1);
        let d = d as usize;
        if self.is_zero() {
            return QExpansion::zero(self.offset24 * d as i64);
        }
        let mut coeffs = vec![Int::zero(); d * self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[d * i] = c.clone();
        }
        QExpansion { offset24: self.offset24 * d as i64, coeffs }
    }

    /// Iterate (exponent24, coefficient) over nonzero stored terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Int)> {
        let off = self.offset24;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (off + 24 * i as i64, c))
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 + O(q^{}/24)", self.end24());
        }
        let mut first = true;
        for (e24, c) in self.terms() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let show_coeff = !mag.is_one() || e24 == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if e24 != 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                if e24 % 24 == 0 {
                    let n = e24 / 24;
                    if n == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{n}")?;
                    }
                } else {
                    write!(f, "q^({e24}/24)")?;
                }
            }
        }
        if self.end24() % 24 == 0 {
            write!(f, " + O(q^{})", self.end24() / 24)
        } else {
            write!(f, " + O(q^({}/24))", self.end24())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Independent oracle: prod_{n=1}^{limit} (1 - q^n), multiplied out
    /// directly, with `terms` coefficients kept.
    fn euler_product_oracle(terms: usize) -> Vec<Int> {
        let mut coeffs = vec![Int::zero(); terms];
        coeffs[0] = Int::one();
        for n in 1..terms {
            // multiply by (1 - q^n)
            for i in (n..terms).rev() {
                let t = coeffs[i - n].clone();
                coeffs[i] -= t;
            }
        }
        coeffs
    }

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn eta_matches_direct_product_oracle() {
        for t in 1..=64usize {
            let eta = QExpansion::eta_expansion(t);
            assert_eq!(eta.offset24(), 1);
            assert_eq!(eta.coeffs(), &euler_product_oracle(t)[..]);
        }
    }

    #[test]
    fn eta_examples() {
        let eta = QExpansion::eta_expansion(8);
        assert_eq!(eta.coeffs(), &ints(&[1, -1, -1, 0, 0, 1, 0, 1])[..]);
        let eta13 = QExpansion::eta_expansion(13);
        assert_eq!(eta13.coeff_at_exp24(1 + 24 * 12).unwrap(), Int::from(-1));
        assert_eq!(eta13.coeff_at_exp24(1 + 24 * 3).unwrap(), Int::zero());
    }

    #[test]
    fn mul_offsets_add() {
        let q24 = QExpansion::new(1, ints(&[1]));
        let p = q24.mul(&q24);
        assert_eq!(p.offset24(), 2);
        assert_eq!(p.coeffs(), &ints(&[1])[..]);

        let z = QExpansion::zero(24 * 10);
        let f = QExpansion::eta_expansion(6);
        assert!(f.mul(&z).is_zero());
    }

    #[test]
    fn eta_squared_leading_terms() {
        let eta = QExpansion::eta_expansion(6);
        let sq = eta.mul(&eta);
        assert_eq!(sq.offset24(), 2);
        assert_eq!(sq.coeffs(), &ints(&[1, -2, -1, 2, 1, 2])[..]);
    }

    #[test]
    fn pow_and_inverse_contract() {
        let eta = QExpansion::eta_expansion(12);
        let one = eta.int_pow(0).unwrap();
        assert_eq!(one.coeff_at(0).unwrap(), Int::one());
        assert!(one.terms().count() == 1);

        let inv = eta.int_pow(-1).unwrap();
        let prod = inv.mul(&eta);
        assert_eq!(prod, QExpansion::one(12));

        let fourth = eta.int_pow(4).unwrap();
        assert_eq!(fourth.offset24(), 4);
        assert_eq!(
            fourth.leading_exponent().unwrap(),
            crate::exact::rational(1, 6)
        );
    }

    #[test]
    fn non_invertible_leading() {
        let two = QExpansion::new(0, ints(&[2, 1]));
        assert!(matches!(two.int_pow(-1), Err(Error::NonInvertibleLeading)));
    }

    #[test]
    fn pow_additivity_small_exponents() {
        let eta = QExpansion::eta_expansion(10);
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let lhs = eta.int_pow(a + b).unwrap();
                let rhs = eta.int_pow(a).unwrap().mul(&eta.int_pow(b).unwrap());
                // compare on the shared window
                let end = lhs.end24().min(rhs.end24());
                for i in 0..10 {
                    let e = lhs.offset24().min(rhs.offset24()) + 24 * i;
                    if e >= end {
                        break;
                    }
                    assert_eq!(lhs.coeff_at_exp24(e), rhs.coeff_at_exp24(e), "a={a} b={b}");
                }
            }
        }
    }

    fn arb_series() -> impl Strategy<Value = QExpansion> {
        (
            -3i64..=3,
            proptest::collection::vec(-4i64..=4, 1..8),
        )
            .prop_map(|(off, v)| QExpansion::new(24 * off, ints(&v)))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            // associativity of mul
            let l = a.mul(&b).mul(&c);
            let r = a.mul(&b.mul(&c));
            prop_assert_eq!(l, r);
            // distributivity, on the shared window
            let bc = b.add(&c).unwrap();
            let lhs = a.mul(&bc);
            let rhs = a.mul(&b).add(&a.mul(&c)).unwrap();
            let end = lhs.end24().min(rhs.end24());
            let mut e = lhs.offset24().min(rhs.offset24());
            while e < end {
                prop_assert_eq!(lhs.coeff_at_exp24(e), rhs.coeff_at_exp24(e));
                e += 24;
            }
        }
    }

    #[test]
    fn truncation_is_min_of_operands() {
        let f = QExpansion::eta_expansion(10);
        let g = QExpansion::eta_expansion(4);
        assert_eq!(f.mul(&g).truncation(), 4);
    }

    #[test]
    fn dilate_scales_window() {
        let eta = QExpansion::eta_expansion(3);
        let d = eta.dilate(6);
        assert_eq!(d.offset24(), 6);
        assert_eq!(d.truncation(), 18);
        assert_eq!(d.coeff_at_exp24(6).unwrap(), Int::one());
        assert_eq!(d.coeff_at_exp24(6 + 24 * 6).unwrap(), Int::from(-1));
        assert_eq!(d.coeff_at_exp24(6 + 24 * 5).unwrap(), Int::zero());
    }
}
