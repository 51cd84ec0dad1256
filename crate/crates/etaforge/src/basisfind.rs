//! Candidate enumeration, basis selection, and linear-combination solving:
//! the machinery that expresses the newform of E_lambda as a rational
//! combination of eta-quotients in S_2(Gamma_0(N)).
//!
//! Everything is exact: coefficient vectors live over Q, rank is computed by
//! fraction-free-enough Gaussian elimination on BigRationals, and a solved
//! combination is only returned after it has been re-verified coefficient by
//! coefficient against the target series.

use num_traits::Zero;

use crate::dims;
use crate::error::{Error, Result};
use crate::etaq::{expand_eta_quotient, is_cusp_form, EtaQuotient};
use crate::exact::Rational;
use crate::legendre::{conductor, NewformSeries};
use crate::qseries::QExpansion;

/// All eta-quotients on divisors of N with exponents bounded by B that lie
/// in S_2(Gamma_0(N)), sorted by bracket text.
#[derive(Clone, Debug)]
pub struct CandidateSet {
    pub level: u64,
    pub bound: i64,
    pub quotients: Vec<EtaQuotient>,
}

/// Exponent search over all divisor maps with |r| <= B: the weight and the
/// two mod-24 congruences prune before any cusp order is evaluated.
pub fn enumerate_candidates(level: u64, bound: i64) -> CandidateSet {
    assert!(level >= 1 && bound >= 1);
    let divisors = crate::arith::divisors(level);
    let k = divisors.len();
    let mut out = Vec::new();
    let mut exps = vec![0i64; k];

    fn descend(
        divisors: &[u64],
        level: u64,
        bound: i64,
        idx: usize,
        sum: i64,
        s_delta: i64,
        s_codelta: i64,
        exps: &mut Vec<i64>,
        out: &mut Vec<EtaQuotient>,
    ) {
        let k = divisors.len();
        if idx == k {
            if sum != 4 || s_delta % 24 != 0 || s_codelta % 24 != 0 {
                return;
            }
            let terms: std::collections::BTreeMap<u64, i64> = divisors
                .iter()
                .zip(exps.iter())
                .filter(|&(_, &r)| r != 0)
                .map(|(&d, &r)| (d, r))
                .collect();
            if terms.is_empty() {
                return;
            }
            let f = EtaQuotient::new(terms).unwrap();
            // the trivial-character parity keeps the set inside
            // S_2(Gamma_0(N)) proper, not a quadratic-twist eigenspace
            if crate::etaq::trivial_character_check(&f) && is_cusp_form(&f, level).unwrap().0 {
                out.push(f);
            }
            return;
        }
        // |remaining contribution to the weight| is at most bound per slot
        let slack = bound * (k - idx) as i64;
        if (4 - sum).abs() > slack {
            return;
        }
        for r in -bound..=bound {
            exps[idx] = r;
            descend(
                divisors,
                level,
                bound,
                idx + 1,
                sum + r,
                (s_delta + divisors[idx] as i64 * r).rem_euclid(24),
                (s_codelta + (level / divisors[idx]) as i64 * r).rem_euclid(24),
                exps,
                out,
            );
        }
        exps[idx] = 0;
    }

    descend(&divisors, level, bound, 0, 0, 0, 0, &mut exps, &mut out);
    out.sort_by_key(|f| f.to_string());
    CandidateSet { level, bound, quotients: out }
}

/// Incremental row-space tracker over Q for exact rank bookkeeping.
struct RowSpace {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    fn new() -> Self {
        RowSpace { rows: Vec::new(), pivots: Vec::new() }
    }

    /// Reduce v against the stored rows; keep it (and return true) if a
    /// nonzero remainder survives.
    fn try_add(&mut self, mut v: Vec<Rational>) -> bool {
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if !v[piv].is_zero() {
                let factor = &v[piv] / &row[piv];
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &factor * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(piv) => {
                self.rows.push(v);
                self.pivots.push(piv);
                true
            }
            None => false,
        }
    }
}

/// Solve the square system a x = b exactly, or report singularity.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Result<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::SingularSystem)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
            let t = &factor * &b[col];
            b[r] -= t;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc -= &a[r][c] * &x[c];
        }
        x[r] = acc / &a[r][r];
    }
    Ok(x)
}

/// The first ascending indices t_1 < ... < t_d at which the coefficient
/// vectors of `series` become linearly independent, together with an
/// invertible d x d minor.
#[derive(Clone, Debug)]
pub struct IndexWitness {
    pub indices: Vec<i64>,
    /// which members of the series list supply the minor's rows
    pub rows: Vec<usize>,
    /// matrix[a][b] = coefficient of series rows[a] at index indices[b]
    pub matrix: Vec<Vec<Rational>>,
}

fn coeff_vec(series: &[QExpansion], n: i64, limit: usize) -> Result<Vec<Rational>> {
    series
        .iter()
        .map(|s| {
            s.coeff_at(n)
                .map(Rational::from)
                .ok_or_else(|| {
                    Error::Precondition(format!(
                        "series not expanded through coefficient {limit}"
                    ))
                })
        })
        .collect()
}

pub fn independence_indices(
    series: &[QExpansion],
    d: usize,
    limit: usize,
) -> Result<IndexWitness> {
    assert!(series.len() >= d && d >= 1);
    let mut cols = RowSpace::new();
    let mut indices = Vec::new();
    for n in 1..=limit as i64 {
        let v = coeff_vec(series, n, limit)?;
        if cols.try_add(v) {
            indices.push(n);
            if indices.len() == d {
                break;
            }
        }
    }
    if indices.len() < d {
        return Err(Error::InsufficientPrecision(limit));
    }
    // pick d series whose restriction to the chosen indices is invertible
    let mut rows = Vec::new();
    let mut row_space = RowSpace::new();
    for (i, s) in series.iter().enumerate() {
        let v: Vec<Rational> = indices
            .iter()
            .map(|&n| Rational::from(s.coeff_at(n).unwrap()))
            .collect();
        if row_space.try_add(v) {
            rows.push(i);
            if rows.len() == d {
                break;
            }
        }
    }
    assert_eq!(rows.len(), d, "column rank d must admit d independent rows");
    let matrix = rows
        .iter()
        .map(|&i| {
            indices
                .iter()
                .map(|&n| Rational::from(series[i].coeff_at(n).unwrap()))
                .collect()
        })
        .collect();
    Ok(IndexWitness { indices, rows, matrix })
}

/// Greedy rank-increasing scan over `quotients` in the order given,
/// stopping once dim S_2(Gamma_0(N)) members are kept. Returns positions
/// into the input list.
pub fn select_basis(quotients: &[EtaQuotient], level: u64, terms: usize) -> Result<Vec<usize>> {
    let d = dims::dim_s2(level).dimension as usize;
    if d == 0 {
        return Ok(Vec::new());
    }
    let mut space = RowSpace::new();
    let mut kept = Vec::new();
    for (i, q) in quotients.iter().enumerate() {
        let s = expand_eta_quotient(q, terms)?;
        let v: Vec<Rational> = (1..=terms as i64)
            .map(|n| Rational::from(s.coeff_at(n).unwrap()))
            .collect();
        if space.try_add(v) {
            kept.push(i);
            if kept.len() == d {
                return Ok(kept);
            }
        }
    }
    Err(Error::InsufficientPrecision(terms))
}

/// A solved representation of the target as a combination of basis
/// elements, re-checked coefficient by coefficient through verified_to.
#[derive(Clone, Debug)]
pub struct CombinationSolution {
    pub coefficients: Vec<Rational>,
    pub verified_to: usize,
}

/// Verification precision: twice ceil(mu/6) with a floor of 100, where mu is
/// the index of Gamma_0(N) in SL_2(Z).
pub fn sturm_precision(level: u64) -> usize {
    let mut mu = level;
    for (p, _) in crate::arith::factor(level) {
        mu = mu / p * (p + 1);
    }
    std::cmp::max(2 * mu.div_ceil(6), 100) as usize
}

/// Match the target at the witness indices, solve the d x d system exactly,
/// then verify the combination through the target's full truncation.
pub fn solve_combination(
    target: &NewformSeries,
    basis: &[EtaQuotient],
    witness: &IndexWitness,
) -> Result<CombinationSolution> {
    let d = basis.len();
    assert_eq!(witness.indices.len(), d, "witness arity must match the basis");
    let t = target.truncation();
    let expansions: Vec<QExpansion> = basis
        .iter()
        .map(|q| expand_eta_quotient(q, t))
        .collect::<Result<_>>()?;
    // rows: equations indexed by t_j; columns: basis coefficients
    let a: Vec<Vec<Rational>> = witness
        .indices
        .iter()
        .map(|&n| {
            expansions
                .iter()
                .map(|s| Rational::from(s.coeff_at(n).unwrap()))
                .collect()
        })
        .collect();
    let b: Vec<Rational> = witness
        .indices
        .iter()
        .map(|&n| Rational::from(target.a(n as usize).clone()))
        .collect();
    let coefficients = solve_square(a, b)?;

    for n in 1..=t {
        let mut acc = Rational::zero();
        for (c, s) in coefficients.iter().zip(&expansions) {
            acc += c * Rational::from(s.coeff_at(n as i64).unwrap());
        }
        if acc != Rational::from(target.a(n).clone()) {
            return Err(Error::Mismatch(n));
        }
    }
    Ok(CombinationSolution { coefficients, verified_to: t })
}

/// Check sum c_i g_i(n) = a(n; lambda) for all n <= t; Some(n) is the first
/// mismatch. Every quotient must be a cusp form at N = conductor(lambda).
pub fn verify_identity_detail(
    lam: &Rational,
    combo: &[(Rational, EtaQuotient)],
    t: usize,
) -> Result<Option<usize>> {
    let (level, _) = conductor(lam)?;
    for (_, q) in combo {
        let (ok, _) = is_cusp_form(q, level)?;
        if !ok {
            return Err(Error::Precondition(format!(
                "{q} is not a cusp form at level {level}"
            )));
        }
    }
    let target = crate::legendre::newform_coefficients(lam, t)?;
    let expansions: Vec<QExpansion> = combo
        .iter()
        .map(|(_, q)| expand_eta_quotient(q, t))
        .collect::<Result<_>>()?;
    for n in 1..=t {
        let mut acc = Rational::zero();
        for ((c, _), s) in combo.iter().zip(&expansions) {
            acc += c * Rational::from(s.coeff_at(n as i64).unwrap());
        }
        if acc != Rational::from(target.a(n).clone()) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

pub fn verify_identity(lam: &Rational, combo: &[(Rational, EtaQuotient)], t: usize) -> Result<bool> {
    Ok(verify_identity_detail(lam, combo, t)?.is_none())
}
