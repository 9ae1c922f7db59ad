//! Series engine against independent oracles.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use kdyck::closedform::{self, StatRequest};
use kdyck::oracle;
use kdyck::series::{self, Coeff, SeriesZW, UPolySeries};
use kdyck::TurnKind;

fn q(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

/// `C(n, r)` from Pascal's triangle in `u128`.
fn pascal(n: usize, r: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(r).copied().unwrap_or(0)
}

/// Lagrange inversion for `u = z Φ(u)`, `Φ(u) = 1 + w u^(k+1)`:
/// `[z^((k+1)N+1) w^N] u = C((k+1)N+1, N) / ((k+1)N+1)`.
fn lagrange_coeff(k: usize, n: usize) -> BigRational {
    let top = (k + 1) * n + 1;
    BigRational::new(BigInt::from(pascal(top, n)), BigInt::from(top))
}

#[test]
fn kernel_root_matches_lagrange_inversion() {
    for k in 1..=3usize {
        let z_order = 30;
        let ub = series::ubar(k as u32, z_order, 30).unwrap();
        for n in 0..=(29 / (k + 1)) {
            let exp = ((k + 1) * n + 1) as i64;
            assert_eq!(ub.coeff(exp, n as u32), lagrange_coeff(k, n), "k={k} N={n}");
        }
        for (n, s, _) in ub.terms() {
            assert_eq!((n - 1) % (k as i64 + 1), 0);
            assert_eq!(i64::from(s), (n - 1) / (k as i64 + 1));
        }
    }
}

#[test]
fn uhat_specific_coefficients() {
    // (1/5) C(5, 2) = 2
    assert_eq!(series::uhat(1, 7).unwrap().coeff(5, 0), q(2));
    // (1/5) C(6, 2) = 3
    assert_eq!(series::ubar(2, 7, 2).unwrap().coeff(7, 2), q(3));
}

#[test]
fn uhat_neg_k_matches_expansion_and_inverts() {
    for k in 1..=4u32 {
        let z_order = 25;
        let inv = series::uhat_neg_k(k, z_order).unwrap();
        assert_eq!(inv.coeff(-i64::from(k), 0), q(1));
        for lambda in 0..=(24 / (k as usize + 1)) {
            let exp = (k as i64 + 1) * lambda as i64 + 1;
            let want = q(k as i64)
                * BigRational::new(
                    BigInt::from(pascal((k as usize + 1) * lambda, lambda)),
                    BigInt::from(lambda + 1),
                );
            assert_eq!(inv.coeff(exp, 0), -want, "k={k} λ={lambda}");
        }
        let uh = series::uhat(k, z_order + 2 * i64::from(k)).unwrap();
        let prod = inv.mul(&uh.pow(k));
        assert!(prod.z_order() >= z_order - i64::from(k));
        assert_eq!(
            prod.first_difference(&SeriesZW::one(k, prod.z_order(), 0)),
            None
        );
    }
    assert_eq!(series::uhat_neg_k(2, 10).unwrap().coeff(4, 0), q(-3));
}

#[test]
fn slice_sum_satisfies_functional_equation() {
    for k in 1..=3u32 {
        let (z_order, w_order) = (20, 5);
        let f = series::slice_partial_sum(k, z_order, w_order).unwrap();
        assert_eq!(f.u_order(), 5 * k as usize + 1);
        let lhs = UPolySeries::kernel(k, z_order, w_order).mul(&f);
        let ub = series::ubar(k, z_order, w_order).unwrap();
        for j in 0..=lhs.u_order() {
            let want = match j {
                0 => ub.neg(),
                1 => SeriesZW::one(k, z_order, w_order),
                _ => SeriesZW::zero(k, z_order, w_order),
            };
            assert_eq!(lhs.coeff(j).first_difference(&want), None, "k={k} u^{j}");
        }
    }
}

#[test]
fn slice_sum_at_one_counts_paths_by_slices() {
    // At u = 1, F counts all prefixes ending at a min-turn; at u = z it
    // matches the kernel solution.
    let k = 2;
    let f = series::slice_partial_sum(k, 15, 4).unwrap();
    let at_z = f.eval_at_z();
    let closed = series::eval_f_at_z(k, 15, 4).unwrap();
    assert_eq!(at_z.first_difference(&closed), None);
    // one slice: U followed by 0..=k downs, each ending at a distinct level
    let at_one = f.eval_at_one();
    let one_slice: Vec<_> = at_one.terms().filter(|(_, s, _)| *s == 1).collect();
    assert_eq!(one_slice.len(), k as usize + 1);
}

/// Cumulative turn level from brute force over the oracle's listing.
fn enumerated_sum(k: u32, n: u32, s: u32, kind: TurnKind) -> BigInt {
    oracle::enumerate_paths(k, n)
        .unwrap()
        .map(|p| BigInt::from(oracle::turn_profile(&p).level(kind, s).unwrap()))
        .sum()
}

#[test]
fn gf_coefficients_equal_enumerated_sums() {
    for (k, n_max) in [(1u32, 6u32), (2, 5), (3, 4)] {
        let z_order = (i64::from(k) + 1) * i64::from(n_max);
        let min = series::min_gf(k, z_order, n_max).unwrap();
        let max = series::max_gf(k, z_order, n_max).unwrap();
        let osc = series::osc_gf(k, z_order, n_max).unwrap();
        for n in 1..=n_max {
            for s in 1..=n {
                let e = (i64::from(k) + 1) * i64::from(n);
                assert_eq!(
                    min.coeff(e, s),
                    BigRational::from(enumerated_sum(k, n, s, TurnKind::Min))
                );
                assert_eq!(
                    max.coeff(e, s),
                    BigRational::from(enumerated_sum(k, n, s, TurnKind::Max))
                );
                assert_eq!(
                    osc.coeff(e, s),
                    BigRational::from(enumerated_sum(k, n, s, TurnKind::Osc))
                );
            }
        }
    }
}

#[test]
fn gf_spot_values() {
    assert_eq!(series::min_gf(1, 4, 2).unwrap().coeff(4, 1), q(1));
    assert_eq!(series::min_gf(2, 6, 1).unwrap().coeff(6, 1), q(3));
    assert_eq!(series::min_gf(1, 4, 2).unwrap().coeff(4, 2), q(0));
    assert_eq!(series::max_gf(1, 4, 1).unwrap().coeff(4, 1), q(2));
    assert_eq!(series::max_gf(2, 6, 2).unwrap().coeff(6, 2), q(9));
    assert_eq!(series::max_gf(1, 6, 2).unwrap().coeff(6, 2), q(8));
    assert_eq!(series::osc_gf(1, 4, 1).unwrap().coeff(4, 1), q(1));
    assert_eq!(series::osc_gf(2, 6, 1).unwrap().coeff(6, 1), q(3));
}

#[test]
fn right_part_series_coefficient() {
    // (û - z) û / z at k = 2: z^4 + ...
    let part = series::min_right_part(2, 1, 10).unwrap();
    assert_eq!(part.coeff(4, 0), q(1));
    assert_eq!(oracle::suffix_count(2, 1, 4, true), 1u32.into());
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(series::min_gf(0, 4, 2).is_err());
    assert!(series::max_gf(1, 0, 2).is_err());
    assert!(series::uhat_neg_k(0, 5).is_err());
    assert!(series::eval_f_at_z(1, 0, 1).is_err());
}

fn arb_unit_series(k: u32) -> impl Strategy<Value = SeriesZW> {
    (
        prop::collection::vec((0i64..=6, 0u32..=3, -5i64..=5), 0..8),
        prop::sample::select(vec![-2i64, -1, 1, 3]),
    )
        .prop_map(move |(terms, c0)| {
            let mut all: Vec<_> = terms
                .into_iter()
                .filter(|&(n, s, _)| n > 0 || s > 0)
                .map(|(n, s, c)| (n, s, q(c)))
                .collect();
            all.push((0, 0, q(c0)));
            SeriesZW::from_terms(k, 8, 4, all)
        })
}

proptest! {
    #[test]
    fn reciprocal_times_series_is_one(u in arb_unit_series(1)) {
        let inv = u.reciprocal_unit().unwrap();
        let prod = u.mul(&inv);
        prop_assert_eq!(prod.first_difference(&SeriesZW::one(1, 8, 4)), None);
    }

    #[test]
    fn multiplication_commutes_and_distributes(a in arb_unit_series(2), b in arb_unit_series(2), c in arb_unit_series(2)) {
        prop_assert_eq!(a.mul(&b).first_difference(&b.mul(&a)), None);
        let lhs = a.mul(&b.add(&c));
        let rhs = a.mul(&b).add(&a.mul(&c));
        prop_assert_eq!(lhs.first_difference(&rhs), None);
    }

    #[test]
    fn kernel_root_is_a_fixed_point(k in 1u32..=4, z_order in 1i64..=24, w_order in 0u32..=6) {
        let u = series::ubar(k, z_order, w_order).unwrap();
        let z = SeriesZW::monomial(k, z_order, w_order, Coeff::one(), 1, 0);
        let zw = SeriesZW::monomial(k, z_order, w_order, Coeff::one(), 1, 1);
        let rhs = z.add(&zw.mul(&u.pow(k + 1))).truncate(z_order, w_order);
        prop_assert_eq!(u.first_difference(&rhs), None);
        prop_assert!(u.terms().all(|(_, _, c)| c.is_integer() && !c.is_zero()));
    }

    #[test]
    fn gfs_are_integral_and_osc_is_difference(k in 1u32..=4, n in 1u32..=5) {
        let z_order = (i64::from(k) + 1) * i64::from(n);
        let min = series::min_gf(k, z_order, n).unwrap();
        let max = series::max_gf(k, z_order, n).unwrap();
        let osc = series::osc_gf(k, z_order, n).unwrap();
        prop_assert_eq!(max.sub(&min).first_difference(&osc), None);
        for gf in [&min, &max, &osc] {
            prop_assert_eq!(gf.z_shift(), 0);
            prop_assert!(gf.terms().all(|(e, _, c)| e >= 0 && c.is_integer()));
        }
        for s in 1..=n {
            let req = StatRequest::new(k, n, s).unwrap();
            let e = (i64::from(k) + 1) * i64::from(n);
            prop_assert_eq!(min.coeff(e, s), BigRational::from(BigInt::from(closedform::min_sum(&req))));
            prop_assert_eq!(max.coeff(e, s), BigRational::from(BigInt::from(closedform::max_sum(&req))));
        }
    }

    #[test]
    fn laurent_inverse_is_exact(k in 1u32..=4, z_order in 1i64..=20) {
        let inv = series::uhat_neg_k(k, z_order).unwrap();
        prop_assert_eq!(inv.z_shift(), -i64::from(k));
        prop_assert!(!inv.coeff(-i64::from(k), 0).is_zero());
        prop_assert!(inv.terms().all(|(e, _, _)| e == -i64::from(k) || e >= 1));
    }
}
