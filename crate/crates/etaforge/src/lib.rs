//! Exact-arithmetic toolkit for the weight-2 newforms attached to Legendre-form
//! elliptic curves `y^2 = x(x-1)(x-lambda)`.
//!
//! The crate computes everything over Q or GF(p), never over floats:
//! - [`qseries`]: truncated q-expansions with a fractional leading exponent in
//!   (1/24)Z, including Dedekind's eta-function via the pentagonal-number sum.
//! - [`etaq`]: eta-quotients `[prod delta^{r_delta}]`, the S_2(Gamma_0(N))
//!   membership criteria and the cusp-order formula.
//! - [`dims`]: the dimension formula for S_2(Gamma_0(N)).
//! - [`legendre`]: integral models, conductors via Tate's algorithm, point
//!   counts a(p; lambda), and Hecke extension to all coefficient indices.
//! - [`basisfind`]: eta-quotient candidate search, exact-rank basis building,
//!   and verification of linear-combination identities.
//! - [`gaussian`]: characters of GF(p), Greene binomials, Gaussian
//!   hypergeometric sums in cyclotomic arithmetic, generalized Apery numbers,
//!   and the binomial-sum congruence for a(p; lambda).
//! - [`exact`]: the underlying rational and cyclotomic arithmetic.

mod arith;
pub mod basisfind;
pub mod dims;
pub mod error;
pub mod etaq;
pub mod exact;
pub mod gaussian;
pub mod legendre;
pub mod qseries;

pub use error::{Error, Result};

/// Primes in the inclusive range [lo, hi], ascending.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    arith::primes_up_to(hi)
        .into_iter()
        .filter(|&p| p >= lo)
        .collect()
}
