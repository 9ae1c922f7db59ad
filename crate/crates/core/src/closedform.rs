//! Explicit binomial-sum formulas for turn statistics, in exact integers.
//!
//! Two coefficient families carry everything:
//!
//! * [`fuss_catalan`]`(k, N) = C((k+1)N, N) / (kN+1)`, the number of k-Dyck
//!   paths with `N` up-steps;
//! * [`down_coeff`]`(k, λ) = k C((k+1)λ, λ) / (λ+1)`, the coefficients of
//!   `-z^(-1) (û^(-k) - z^(-k))`.
//!
//! Every division below is exact; a nonzero remainder panics because it can
//! only mean an arithmetic bug.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::TurnKind;

/// A validated `(k, N, s)` query: up-step height, number of up-steps, turn index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StatRequest {
    k: u32,
    n: u32,
    s: u32,
}

impl StatRequest {
    /// Requires `k >= 1` and `1 <= s <= N`; paths with fewer than `s`
    /// up-steps have no s-th turn.
    pub fn new(k: u32, n: u32, s: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
        }
        if s < 1 || s > n {
            return Err(Error::TurnOutOfRange { s, n });
        }
        Ok(StatRequest { k, n, s })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Path length `(k+1) N`.
    pub fn length(&self) -> u64 {
        u64::from(self.k + 1) * u64::from(self.n)
    }
}

fn exact_div(num: BigUint, den: &BigUint) -> BigUint {
    let (q, r) = num.div_rem(den);
    assert!(
        r.is_zero(),
        "inexact division: remainder {r} dividing by {den}"
    );
    q
}

/// `C(n, r)` by the descending product `Π (n-i)/(i+1)`, dividing exactly at
/// every step.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = exact_div(acc * (n - i), &BigUint::from(i + 1));
    }
    acc
}

/// Number of k-Dyck paths with `n` up-steps: `C((k+1)n, n) / (kn+1)`.
pub fn fuss_catalan(k: u32, n: u32) -> BigUint {
    let (k, n) = (u64::from(k), u64::from(n));
    exact_div(binomial((k + 1) * n, n), &BigUint::from(k * n + 1))
}

/// `k C((k+1)λ, λ) / (λ+1)`.
pub fn down_coeff(k: u32, lambda: u32) -> BigUint {
    let (k, l) = (u64::from(k), u64::from(lambda));
    exact_div(binomial((k + 1) * l, l) * k, &BigUint::from(l + 1))
}

/// `Σ_{i=1}^{upper} weight(i) · fuss_catalan(k, i) · down_coeff(k, N-i)`.
fn weighted_convolution(k: u32, n: u32, upper: u32, weight: impl Fn(u32) -> u32) -> BigUint {
    (1..=upper)
        .map(|i| fuss_catalan(k, i) * down_coeff(k, n - i) * weight(i))
        .sum()
}

fn leading_term(req: &StatRequest) -> BigUint {
    fuss_catalan(req.k, req.n) * (u64::from(req.s) * u64::from(req.k))
}

fn nonnegative_difference(a: BigUint, b: BigUint, what: &str, req: &StatRequest) -> BigUint {
    assert!(a >= b, "{what} negative for {req:?}");
    a - b
}

/// Sum over all k-Dyck paths with `N` up-steps of the level of the s-th
/// min-turn:
/// `s k/(kN+1) C((k+1)N, N) - Σ_{i=1}^{s} (s+1-i) FC(k,i) D(k, N-i)`.
pub fn min_sum(req: &StatRequest) -> BigUint {
    let s = req.s;
    let correction = weighted_convolution(req.k, req.n, s, |i| s + 1 - i);
    nonnegative_difference(leading_term(req), correction, "min_sum", req)
}

/// Sum of the levels of the s-th max-turn:
/// `s k/(kN+1) C((k+1)N, N) - Σ_{i=1}^{s-1} (s-i) FC(k,i) D(k, N-i)`.
pub fn max_sum(req: &StatRequest) -> BigUint {
    let s = req.s;
    let correction = weighted_convolution(req.k, req.n, s - 1, |i| s - i);
    nonnegative_difference(leading_term(req), correction, "max_sum", req)
}

/// Total length of the s-th down-run: `Σ_{i=1}^{s} FC(k,i) D(k, N-i)`.
pub fn osc_sum(req: &StatRequest) -> BigUint {
    weighted_convolution(req.k, req.n, req.s, |_| 1)
}

pub fn turn_sum(kind: TurnKind, req: &StatRequest) -> BigUint {
    match kind {
        TurnKind::Min => min_sum(req),
        TurnKind::Max => max_sum(req),
        TurnKind::Osc => osc_sum(req),
    }
}

fn average(sum: BigUint, req: &StatRequest) -> BigRational {
    BigRational::new(BigInt::from(sum), BigInt::from(fuss_catalan(req.k, req.n)))
}

/// Mean s-th min-turn level over all paths, in lowest terms.
pub fn avg_min(req: &StatRequest) -> BigRational {
    average(min_sum(req), req)
}

pub fn avg_max(req: &StatRequest) -> BigRational {
    average(max_sum(req), req)
}

pub fn avg_osc(req: &StatRequest) -> BigRational {
    average(osc_sum(req), req)
}

pub fn turn_average(kind: TurnKind, req: &StatRequest) -> BigRational {
    average(turn_sum(kind, req), req)
}

/// Second Fuss–Catalan form `C((k+1)λ+1, λ) / ((k+1)λ+1)`, as an exact
/// rational; equals [`fuss_catalan`].
pub fn fuss_catalan_alt(k: u32, lambda: u32) -> BigRational {
    let (k, l) = (u64::from(k), u64::from(lambda));
    let top = (k + 1) * l + 1;
    BigRational::new(BigInt::from(binomial(top, l)), BigInt::from(top))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(k: u32, n: u32, s: u32) -> StatRequest {
        StatRequest::new(k, n, s).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(24, 8), big(735_471));
        assert_eq!(binomial(3, 4), big(0));
        assert_eq!(
            binomial(60, 30),
            "118264581564861424".parse::<BigUint>().unwrap()
        );
    }

    #[test]
    fn fuss_catalan_values() {
        for k in 1..=5 {
            assert_eq!(fuss_catalan(k, 0), big(1));
        }
        assert_eq!(fuss_catalan(1, 3), big(5));
        assert_eq!(fuss_catalan(2, 2), big(3));
        assert_eq!(fuss_catalan(2, 8), big(43_263));
    }

    #[test]
    fn down_coeff_values() {
        assert_eq!(down_coeff(1, 0), big(1));
        assert_eq!(down_coeff(2, 1), big(3));
        assert_eq!(down_coeff(1, 2), big(2));
    }

    #[test]
    fn request_validation() {
        assert!(matches!(
            StatRequest::new(1, 2, 3),
            Err(Error::TurnOutOfRange { s: 3, n: 2 })
        ));
        assert!(matches!(
            StatRequest::new(1, 2, 0),
            Err(Error::TurnOutOfRange { .. })
        ));
        assert!(matches!(
            StatRequest::new(1, 0, 1),
            Err(Error::TurnOutOfRange { .. })
        ));
        assert!(matches!(
            StatRequest::new(0, 2, 1),
            Err(Error::InvalidParameter(_))
        ));
        assert_eq!(req(2, 3, 1).length(), 9);
    }

    #[test]
    fn small_sums() {
        assert_eq!(min_sum(&req(1, 2, 1)), big(1));
        assert_eq!(min_sum(&req(2, 2, 1)), big(3));
        assert_eq!(min_sum(&req(1, 2, 2)), big(0));
        assert_eq!(max_sum(&req(1, 2, 1)), big(2));
        assert_eq!(max_sum(&req(2, 2, 2)), big(9));
        assert_eq!(max_sum(&req(1, 3, 2)), big(8));
        assert_eq!(osc_sum(&req(1, 2, 1)), big(1));
        assert_eq!(osc_sum(&req(2, 2, 1)), big(3));
    }

    #[test]
    fn averages() {
        assert_eq!(avg_max(&req(1, 2, 1)), BigRational::one());
        assert_eq!(avg_min(&req(2, 2, 1)), BigRational::one());
        // wavy lengths over the five Dyck paths of length 6: 0,0,0,1,1
        assert_eq!(avg_osc(&req(1, 3, 1)), BigRational::new(2.into(), 5.into()));
    }

    #[test]
    fn two_fuss_catalan_forms_agree() {
        for k in 1..=5 {
            for l in 0..=20 {
                assert_eq!(
                    fuss_catalan_alt(k, l),
                    BigRational::from_integer(fuss_catalan(k, l).into())
                );
            }
        }
    }
}
