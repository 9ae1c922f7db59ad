//! Truncated generating functions for k-Dyck turn statistics.
//!
//! Everything here is built from the power-series root of the kernel
//! equation `u = z + z w u^(k+1)`: `ū` (with `w`) and `û` (at `w = 1`).
//! The slice recurrence on [`UPolySeries`] reproduces the same objects from
//! first principles so the closed generating functions can be checked
//! against it.

mod upoly;
mod zw;

pub use upoly::UPolySeries;
pub use zw::{Coeff, SeriesZW};

use crate::error::{Error, Result};

fn check_params(k: u32, z_order: i64) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    if z_order < 1 {
        return Err(Error::InvalidParameter(format!(
            "z_order must be >= 1, got {z_order}"
        )));
    }
    Ok(())
}

/// Number of fixed-point rounds that stabilise all z-exponents up to `z_order`.
fn kernel_rounds(k: u32, z_order: i64) -> usize {
    let width = i64::from(k) + 1;
    ((z_order + width - 1) / width) as usize + 1
}

/// Power-series root of `u = z + z w u^(k+1)` (`with_w`) or of
/// `u = z + z u^(k+1)` (without), by fixed-point iteration.
pub fn solve_kernel(k: u32, with_w: bool, z_order: i64, w_order: u32) -> Result<SeriesZW> {
    check_params(k, z_order)?;
    let one = Coeff::from_integer(1.into());
    let z = SeriesZW::monomial(k, z_order, w_order, one.clone(), 1, 0);
    let zw = SeriesZW::monomial(k, z_order, w_order, one, 1, u32::from(with_w));
    let mut u = z.clone();
    for _ in 0..kernel_rounds(k, z_order) {
        u = z.add(&zw.mul(&u.pow(k + 1))).truncate(z_order, w_order);
    }
    Ok(u)
}

/// `ū`: the kernel root with the slice marker `w`.
pub fn ubar(k: u32, z_order: i64, w_order: u32) -> Result<SeriesZW> {
    solve_kernel(k, true, z_order, w_order)
}

/// `û`: the kernel root at `w = 1`.
pub fn uhat(k: u32, z_order: i64) -> Result<SeriesZW> {
    solve_kernel(k, false, z_order, 0)
}

/// Laurent expansion of `û^(-k)` exact up to `z^z_order`, computed as
/// `z^(-k) (û/z)^(-k)`.
pub fn uhat_neg_k(k: u32, z_order: i64) -> Result<SeriesZW> {
    uhat_neg_k_boxed(k, z_order, 0)
}

/// As [`uhat_neg_k`], declared exact for w-degrees up to `w_order` so it
/// can be multiplied against series in `w` (it has no `w` terms itself).
fn uhat_neg_k_boxed(k: u32, z_order: i64, w_order: u32) -> Result<SeriesZW> {
    check_params(k, z_order)?;
    let work = z_order + i64::from(k) + 1;
    let unit = solve_kernel(k, false, work, w_order)?.div_monomial(1, 0)?;
    let inv = unit.reciprocal_unit()?.pow(k);
    Ok(inv
        .mul_monomial(-i64::from(k), 0)
        .truncate(z_order, w_order))
}

/// One slice: an up-step followed by a maximal run of down-steps.
///
/// Applies `u^j -> z w Σ_{0<=i<=j+k} z^i u^(j+k-i)` to every monomial,
/// truncating whatever leaves the box.
pub fn slice_step(f: &UPolySeries) -> UPolySeries {
    let k = f.k() as usize;
    let mut out = UPolySeries::zero(f.k(), f.z_order(), f.w_order(), f.u_order());
    let mut acc: Vec<SeriesZW> = (0..=f.u_order()).map(|j| out.coeff(j)).collect();
    for j in 0..=f.u_order() {
        let c = f.coeff(j);
        if c.is_zero() {
            continue;
        }
        for i in 0..=j + k {
            let target = j + k - i;
            if target > f.u_order() {
                continue;
            }
            if i as i64 + 1 > f.z_order() {
                break;
            }
            acc[target] = acc[target].add(&c.mul_monomial(i as i64 + 1, 1));
        }
    }
    for (j, c) in acc.into_iter().enumerate() {
        out.set_coeff(j, c);
    }
    out
}

/// Default u-degree bound: `m` slices raise the level by at most `m k`.
pub fn default_u_order(k: u32, w_order: u32) -> usize {
    k as usize * w_order as usize + 1
}

/// `Σ_{m<=w_order} F_m(u)` by iterating [`slice_step`] from `F_0 = 1`.
///
/// `F_m` is homogeneous of w-degree `m`, so the partial sum is exact on all
/// terms of w-degree `<= w_order`.
pub fn slice_partial_sum(k: u32, z_order: i64, w_order: u32) -> Result<UPolySeries> {
    check_params(k, z_order)?;
    let u_order = default_u_order(k, w_order);
    let mut term = UPolySeries::one(k, z_order, w_order, u_order);
    let mut sum = term.clone();
    for _ in 0..w_order {
        term = slice_step(&term);
        sum = sum.add(&term);
    }
    Ok(sum)
}

/// `F(z) = (ū - z) / (w z^(k+2))`, the slice generating function evaluated
/// on the kernel root.
pub fn eval_f_at_z(k: u32, z_order: i64, w_order: u32) -> Result<SeriesZW> {
    check_params(k, z_order)?;
    let shift = i64::from(k) + 2;
    let ub = ubar(k, z_order + shift, w_order + 1)?;
    let z = SeriesZW::monomial(
        k,
        ub.z_order(),
        ub.w_order(),
        Coeff::from_integer(1.into()),
        1,
        0,
    );
    let out = ub.sub(&z).div_monomial(shift, 1)?;
    Ok(out.truncate(z_order, w_order))
}

/// Series shared by the three closed generating functions, all computed
/// with enough headroom that the final combination is exact to the
/// requested order.
struct Ingredients {
    k: u32,
    /// `ū / z`
    ubar_over_z: SeriesZW,
    /// `û / z`
    uhat_over_z: SeriesZW,
    /// `(ū - z) / (z^2 û^k)`
    tail: SeriesZW,
    /// `1 / (1 - w)`
    inv_1mw: SeriesZW,
}

impl Ingredients {
    fn new(k: u32, z_order: i64, w_order: u32) -> Result<Self> {
        check_params(k, z_order)?;
        let kk = i64::from(k);
        let work = z_order + kk + 3;
        let one = Coeff::from_integer(1.into());
        let ub = ubar(k, work, w_order)?;
        let uh = solve_kernel(k, false, work, w_order)?;
        let neg_k = uhat_neg_k_boxed(k, work - kk - 1, w_order)?;
        let z = SeriesZW::monomial(k, work, w_order, one.clone(), 1, 0);
        let tail = ub.sub(&z).mul(&neg_k).mul_monomial(-2, 0);
        let one_minus_w =
            SeriesZW::from_terms(k, work, w_order, [(0, 0, one.clone()), (0, 1, -one)]);
        Ok(Ingredients {
            k,
            ubar_over_z: ub.div_monomial(1, 0)?,
            uhat_over_z: uh.div_monomial(1, 0)?,
            tail,
            inv_1mw: one_minus_w.reciprocal_unit()?,
        })
    }

    fn finish(
        &self,
        body: SeriesZW,
        poles: u32,
        z_order: i64,
        w_order: u32,
        what: &str,
    ) -> Result<SeriesZW> {
        let factor = self.inv_1mw.pow(poles);
        let out = body.mul(&factor);
        if out.z_order() < z_order || out.w_order() < w_order {
            return Err(Error::InternalInconsistency(format!(
                "{what}: precision fell to z<={} w<={}, below requested z<={z_order} w<={w_order}",
                out.z_order(),
                out.w_order()
            )));
        }
        out.truncate(z_order, w_order)
            .into_integral_power_series(what)
    }

    fn kk(&self) -> i64 {
        i64::from(self.k)
    }
}

/// Cumulative min-turn levels:
/// `MIN(z,w) = [k w û/z + (ū-z)/(z^2 û^k) - (k+1) w ū/z] / (1-w)^2`.
///
/// The coefficient of `z^((k+1)N) w^s` is the sum over all k-Dyck paths with
/// `N` up-steps of the level of the s-th min-turn, for `1 <= s <= N`.
pub fn min_gf(k: u32, z_order: i64, w_order: u32) -> Result<SeriesZW> {
    let g = Ingredients::new(k, z_order, w_order)?;
    let body = g
        .uhat_over_z
        .scale_int(g.kk())
        .mul_monomial(0, 1)
        .add(&g.tail)
        .sub(&g.ubar_over_z.scale_int(g.kk() + 1).mul_monomial(0, 1));
    g.finish(body, 2, z_order, w_order, "min_gf")
}

/// Cumulative max-turn levels:
/// `MAX(z,w) = [k w û/z - k w ū/z + w (ū-z)/(z^2 û^k) - w^2 ū/z] / (1-w)^2`.
pub fn max_gf(k: u32, z_order: i64, w_order: u32) -> Result<SeriesZW> {
    let g = Ingredients::new(k, z_order, w_order)?;
    let body = g
        .uhat_over_z
        .scale_int(g.kk())
        .mul_monomial(0, 1)
        .sub(&g.ubar_over_z.scale_int(g.kk()).mul_monomial(0, 1))
        .add(&g.tail.mul_monomial(0, 1))
        .sub(&g.ubar_over_z.mul_monomial(0, 2));
    g.finish(body, 2, z_order, w_order, "max_gf")
}

/// Cumulative down-run lengths between the s-th max- and min-turn:
/// `OSC(z,w) = [w ū/z - (ū-z)/(z^2 û^k)] / (1-w)`.
pub fn osc_gf(k: u32, z_order: i64, w_order: u32) -> Result<SeriesZW> {
    let g = Ingredients::new(k, z_order, w_order)?;
    let body = g.ubar_over_z.mul_monomial(0, 1).sub(&g.tail);
    g.finish(body, 1, z_order, w_order, "osc_gf")
}

/// Right part after a min-turn at level `h >= 1`: `(û - z) û^h / z`, the
/// paths that start with an up-step at level `h` and end on the axis.
pub fn min_right_part(k: u32, h: u32, z_order: i64) -> Result<SeriesZW> {
    check_params(k, z_order)?;
    let work = z_order + i64::from(h) + 2;
    let uh = uhat(k, work)?;
    let z = SeriesZW::monomial(k, work, 0, Coeff::from_integer(1.into()), 1, 0);
    let out = uh.sub(&z).mul(&uh.pow(h)).div_monomial(1, 0)?;
    Ok(out.truncate(z_order, 0))
}

/// Right part after a max-turn at level `h`: `û^(h+1) / z`, unrestricted
/// paths from level `h` down to the axis.
pub fn max_right_part(k: u32, h: u32, z_order: i64) -> Result<SeriesZW> {
    check_params(k, z_order)?;
    let work = z_order + i64::from(h) + 2;
    let out = uhat(k, work)?.pow(h + 1).div_monomial(1, 0)?;
    Ok(out.truncate(z_order, 0))
}

/// Coefficient of `z^((k+1)N) w^s` in a turn generating function, as an
/// integer.
pub fn turn_coeff(gf: &SeriesZW, n: u32, s: u32) -> Option<num_bigint::BigInt> {
    let exp = i64::from(gf.k() + 1) * i64::from(n);
    if exp > gf.z_order() || s > gf.w_order() {
        return None;
    }
    gf.int_coeff(exp, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn int(n: i64) -> Coeff {
        Coeff::from_integer(BigInt::from(n))
    }

    #[test]
    fn kernel_root_leading_terms() {
        for k in 1..=4 {
            let u = uhat(k, 12).unwrap();
            assert_eq!(u.coeff(1, 0), int(1));
            assert_eq!(u.coeff(0, 0), int(0));
        }
        // k=1 gives Catalan numbers at odd powers: z + z^3 + 2z^5 + 5z^7
        let u = uhat(1, 7).unwrap();
        assert_eq!(u.coeff(5, 0), int(2));
        assert_eq!(u.coeff(7, 0), int(5));
        let ub = ubar(2, 7, 3).unwrap();
        assert_eq!(ub.coeff(7, 2), int(3));
        assert_eq!(ub.coeff(4, 1), int(1));
    }

    #[test]
    fn kernel_rejects_bad_parameters() {
        assert!(solve_kernel(0, true, 5, 2).is_err());
        assert!(solve_kernel(1, true, 0, 2).is_err());
    }

    #[test]
    fn one_more_round_changes_nothing() {
        for k in 1..=3 {
            let z_order = 20;
            let u = ubar(k, z_order, 8).unwrap();
            let one = int(1);
            let z = SeriesZW::monomial(k, z_order, 8, one.clone(), 1, 0);
            let zw = SeriesZW::monomial(k, z_order, 8, one, 1, 1);
            let again = z.add(&zw.mul(&u.pow(k + 1))).truncate(z_order, 8);
            assert_eq!(u.first_difference(&again), None, "k={k}");
        }
    }

    #[test]
    fn uhat_neg_k_leading_terms() {
        let s = uhat_neg_k(1, 9).unwrap();
        assert_eq!(s.z_shift(), -1);
        assert_eq!(s.coeff(-1, 0), int(1));
        assert_eq!(s.coeff(1, 0), int(-1));
        let s2 = uhat_neg_k(2, 9).unwrap();
        assert_eq!(s2.coeff(4, 0), int(-3));
    }

    #[test]
    fn slice_step_from_one() {
        let f0 = UPolySeries::one(1, 6, 3, 4);
        let f1 = slice_step(&f0);
        assert_eq!(f1.coeff(1).coeff(1, 1), int(1));
        assert_eq!(f1.coeff(0).coeff(2, 1), int(1));
        assert_eq!(f1.degree(), Some(1));
        let g0 = UPolySeries::one(2, 6, 3, 5);
        let g1 = slice_step(&g0);
        assert_eq!(g1.coeff(2).coeff(1, 1), int(1));
        assert_eq!(g1.coeff(1).coeff(2, 1), int(1));
        assert_eq!(g1.coeff(0).coeff(3, 1), int(1));
        assert_eq!(g1.coeff(0).len() + g1.coeff(1).len() + g1.coeff(2).len(), 3);
    }

    #[test]
    fn f_at_z_small_coefficients() {
        let f = eval_f_at_z(1, 8, 3).unwrap();
        assert_eq!(f.coeff(0, 0), int(1));
        // F_1(u) = zw(u + z), so F_1(z) = 2 z^2 w
        assert_eq!(f.coeff(2, 1), int(2));
        let f2 = eval_f_at_z(2, 8, 3).unwrap();
        // F_1(u) = zw(u^2 + zu + z^2), so F_1(z) = 3 z^3 w
        assert_eq!(f2.coeff(3, 1), int(3));
    }

    #[test]
    fn gf_spot_values() {
        let min1 = min_gf(1, 6, 3).unwrap();
        assert_eq!(min1.coeff(4, 1), int(1));
        assert_eq!(min1.coeff(4, 2), int(0));
        let min2 = min_gf(2, 6, 2).unwrap();
        assert_eq!(min2.coeff(6, 1), int(3));
        let max1 = max_gf(1, 6, 3).unwrap();
        assert_eq!(max1.coeff(4, 1), int(2));
        assert_eq!(max1.coeff(6, 2), int(8));
        let max2 = max_gf(2, 6, 2).unwrap();
        assert_eq!(max2.coeff(6, 2), int(9));
        let osc1 = osc_gf(1, 6, 3).unwrap();
        assert_eq!(osc1.coeff(4, 1), int(1));
        let osc2 = osc_gf(2, 6, 2).unwrap();
        assert_eq!(osc2.coeff(6, 1), int(3));
    }

    #[test]
    fn gfs_are_supported_on_path_lengths() {
        for k in 1..=3u32 {
            let gf = max_gf(k, 16, 4).unwrap();
            for (n, _, _) in gf.terms() {
                assert_eq!(n % i64::from(k + 1), 0, "k={k} exponent {n}");
            }
        }
    }
}
