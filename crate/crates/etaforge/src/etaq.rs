//! Eta-quotients and the S_2(Gamma_0(N)) membership machinery.
//!
//! An eta-quotient `prod eta(delta z)^{r_delta}` is written in bracket
//! notation `[1^2 11^2]`, `[1^-1 2^2 4^2 5^1 8^-1 40^1]`, etc. Membership in
//! S_2(Gamma_0(N)) is decided by the weight condition sum r = 4, the two
//! mod-24 congruences on sum delta*r and sum (N/delta)*r, and strict
//! positivity of the order of vanishing
//!
//!   (N/24) * sum_{delta|N} gcd(d,delta)^2 r_delta / (gcd(d,N/d) d delta)
//!
//! at every cusp c/d; the formula depends on the cusp only through the
//! divisor d, so divisor representatives suffice.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::exact::{Int, Rational};
use crate::qseries::QExpansion;

/// A finite map delta -> r_delta with no zero exponents stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EtaQuotient {
    terms: BTreeMap<u64, i64>,
}

/// Per-divisor cusp orders of an eta-quotient at level N.
#[derive(Clone, Debug)]
pub struct CuspOrderReport {
    pub level: u64,
    pub entries: Vec<(u64, Rational)>,
}

impl EtaQuotient {
    pub fn new(terms: BTreeMap<u64, i64>) -> Result<Self> {
        for (&d, &r) in &terms {
            if d == 0 {
                return Err(Error::Bracket("base 0 is not allowed".into()));
            }
            if r == 0 {
                return Err(Error::Bracket(format!("zero exponent on base {d}")));
            }
        }
        Ok(EtaQuotient { terms })
    }

    pub fn terms(&self) -> &BTreeMap<u64, i64> {
        &self.terms
    }

    /// Twice the weight: sum of the exponents.
    pub fn exponent_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Merge exponent maps (pointwise sum, dropping zeros): the quotient
    /// whose expansion is the product of the two expansions.
    pub fn merge(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&d, &r) in &other.terms {
            let e = terms.entry(d).or_insert(0);
            *e += r;
            if *e == 0 {
                terms.remove(&d);
            }
        }
        EtaQuotient { terms }
    }
}

/// Parse the bracket grammar `'[' (delta ['^' r])+ ']'`; an omitted exponent
/// means 1, braces around the exponent are tolerated for copy-paste fidelity.
pub fn parse_bracket(text: &str) -> Result<EtaQuotient> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| Error::Bracket("expected [ ... ]".into()))?;
    let mut terms = BTreeMap::new();
    let mut any = false;
    for tok in inner.split_whitespace() {
        any = true;
        let (base_s, exp_s) = match tok.split_once('^') {
            Some((b, e)) => (b, e),
            None => (tok, "1"),
        };
        let base: u64 = base_s
            .parse()
            .map_err(|_| Error::Bracket(format!("bad base {base_s:?}")))?;
        if base == 0 {
            return Err(Error::Bracket("base 0 is not allowed".into()));
        }
        let exp_s = exp_s
            .trim_start_matches('{')
            .trim_end_matches('}');
        let exp: i64 = exp_s
            .parse()
            .map_err(|_| Error::Bracket(format!("bad exponent {exp_s:?}")))?;
        if exp == 0 {
            return Err(Error::Bracket(format!("zero exponent on base {base}")));
        }
        if terms.insert(base, exp).is_some() {
            return Err(Error::Bracket(format!("duplicate base {base}")));
        }
    }
    if !any {
        return Err(Error::Bracket("empty bracket".into()));
    }
    Ok(EtaQuotient { terms })
}

impl fmt::Display for EtaQuotient {
    /// Canonical form: bases ascending, exponents always explicit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (d, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{d}^{r}")?;
        }
        write!(f, "]")
    }
}

/// sum r_delta = 4, i.e. weight 2.
pub fn weight_check(f: &EtaQuotient) -> bool {
    f.exponent_sum() == 4
}

/// The two mod-24 conditions: sum delta r = 0 and sum (N/delta) r = 0.
pub fn congruence_checks(f: &EtaQuotient, level: u64) -> Result<bool> {
    let mut s1: i64 = 0;
    let mut s2: i64 = 0;
    for (&d, &r) in f.terms() {
        if level % d != 0 {
            return Err(Error::LevelMismatch(d, level));
        }
        s1 += d as i64 * r;
        s2 += (level / d) as i64 * r;
    }
    Ok(s1.rem_euclid(24) == 0 && s2.rem_euclid(24) == 0)
}

/// Exact order of vanishing at the cusp class of divisor d | N.
pub fn cusp_order(f: &EtaQuotient, level: u64, d: u64) -> Result<Rational> {
    if d == 0 || level % d != 0 {
        return Err(Error::NotADivisor(d, level));
    }
    let mut sum = Rational::zero();
    let gd = d.gcd(&(level / d));
    for (&delta, &r) in f.terms() {
        if level % delta != 0 {
            return Err(Error::LevelMismatch(delta, level));
        }
        let g = d.gcd(&delta);
        let num = Int::from(g) * Int::from(g) * Int::from(r);
        let den = Int::from(gd) * Int::from(d) * Int::from(delta);
        sum += Rational::new(num, den);
    }
    Ok(Rational::new(Int::from(level), Int::from(24)) * sum)
}

/// Full membership test for S_2(Gamma_0(N)): weight, both congruences, and
/// strictly positive order at every divisor cusp. The report is always
/// returned.
pub fn is_cusp_form(f: &EtaQuotient, level: u64) -> Result<(bool, CuspOrderReport)> {
    let mut entries = Vec::new();
    let mut all_positive = true;
    for d in arith::divisors(level) {
        let ord = cusp_order(f, level, d)?;
        if !ord.is_positive() {
            all_positive = false;
        }
        entries.push((d, ord));
    }
    let ok = weight_check(f) && congruence_checks(f, level)? && all_positive;
    Ok((ok, CuspOrderReport { level, entries }))
}

/// True when the weight-2 nebentypus is trivial, i.e. prod delta^{r_delta}
/// is a rational square: every prime must appear with even total exponent.
/// The three membership checks alone only place the quotient in
/// S_2(Gamma_0(N), chi) for the quadratic character chi attached to that
/// product; the trivial-character space additionally needs this parity.
pub fn trivial_character_check(f: &EtaQuotient) -> bool {
    let mut parity: std::collections::BTreeMap<u64, i64> = std::collections::BTreeMap::new();
    for (&delta, &r) in f.terms() {
        for (p, e) in arith::factor(delta) {
            *parity.entry(p).or_insert(0) += e as i64 * r;
        }
    }
    parity.values().all(|v| v % 2 == 0)
}

/// Expand prod eta(delta z)^{r_delta} with at least `terms` stored
/// coefficients (substitution q -> q^delta by index dilation).
pub fn expand_eta_quotient(f: &EtaQuotient, terms: usize) -> Result<QExpansion> {
    assert!(terms >= 1);
    let mut acc = QExpansion::one(terms);
    for (&delta, &r) in f.terms() {
        let base_terms = terms.div_ceil(delta as usize).max(1);
        let eta = QExpansion::eta_expansion(base_terms).dilate(delta);
        let factor = eta.int_pow(r)?;
        acc = acc.mul(&factor);
    }
    Ok(acc)
}
