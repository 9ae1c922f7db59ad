//! Cross-checks between the series engine, the closed forms and the oracle.
//!
//! Each `check_*` function returns the number of cases it compared, or a
//! description of the first counterexample. [`run`] composes them into the
//! full sweep behind `kdyck verify`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::closedform::{self, StatRequest};
use crate::error::Result;
use crate::oracle::{self, turn_profile};
use crate::par;
use crate::series::{self, Coeff, SeriesZW, UPolySeries};
use crate::TurnKind;

pub type CheckResult = std::result::Result<usize, String>;

/// Deliberate faults that can be injected into the closed forms to show the
/// sweep detects them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// `min_sum`'s correction sum stops at `s - 1` instead of `s`.
    MinSumBound,
    /// `osc_sum`'s summand uses `1/(kN+1)` in place of `1/(ki+1)`.
    OscDenominator,
}

impl std::str::FromStr for Mutation {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Mutation::None),
            "min-sum-bound" => Ok(Mutation::MinSumBound),
            "osc-denominator" => Ok(Mutation::OscDenominator),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown mutation `{other}`"
            ))),
        }
    }
}

fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Closed-form value of a turn sum, optionally with an injected fault.
pub fn closed_value(kind: TurnKind, req: &StatRequest, mutation: Mutation) -> BigRational {
    let (k, n, s) = (req.k(), req.n(), req.s());
    match (kind, mutation) {
        (TurnKind::Min, Mutation::MinSumBound) => {
            let lead = int(closedform::fuss_catalan(k, n) * (u64::from(s) * u64::from(k)));
            let corr: BigUint = (1..s)
                .map(|i| {
                    closedform::fuss_catalan(k, i) * closedform::down_coeff(k, n - i) * (s + 1 - i)
                })
                .sum();
            lead - int(corr)
        }
        (TurnKind::Osc, Mutation::OscDenominator) => (1..=s)
            .map(|i| {
                let (kk, ii, nn) = (u64::from(k), u64::from(i), u64::from(n));
                BigRational::new(
                    BigInt::from(closedform::binomial((kk + 1) * ii, ii)),
                    BigInt::from(kk * nn + 1),
                ) * int(closedform::down_coeff(k, n - i))
            })
            .fold(BigRational::zero(), |a, b| a + b),
        _ => int(closedform::turn_sum(kind, req)),
    }
}

/// `u = z + z w u^(k+1)` holds on every retained coefficient of `ū`, and
/// likewise at `w = 1` for `û`.
pub fn check_kernel_fixed_point(k: u32, z_order: i64, w_order: u32) -> CheckResult {
    let mut cases = 0;
    for with_w in [true, false] {
        let u = series::solve_kernel(k, with_w, z_order, w_order).map_err(|e| e.to_string())?;
        let one = Coeff::one();
        let z = SeriesZW::monomial(k, z_order, w_order, one.clone(), 1, 0);
        let zw = SeriesZW::monomial(k, z_order, w_order, one, 1, u32::from(with_w));
        let rhs = z.add(&zw.mul(&u.pow(k + 1))).truncate(z_order, w_order);
        if let Some((n, s, a, b)) = u.first_difference(&rhs) {
            return Err(format!(
                "k={k} with_w={with_w}: z^{n} w^{s}: u has {a}, rhs has {b}"
            ));
        }
        cases += u.len();
    }
    Ok(cases)
}

/// `ū` coefficients are `fuss_catalan(k, N)` at `z^((k+1)N+1) w^N` and zero
/// elsewhere; `û` coefficients are `C((k+1)λ+1, λ)/((k+1)λ+1)` at
/// `z^((k+1)λ+1)` and zero elsewhere.
pub fn check_kernel_coefficients(k: u32, z_order: i64, w_order: u32) -> CheckResult {
    let width = i64::from(k) + 1;
    let ub = series::ubar(k, z_order, w_order).map_err(|e| e.to_string())?;
    let uh = series::uhat(k, z_order).map_err(|e| e.to_string())?;
    let mut expected_bar = Vec::new();
    let mut expected_hat = Vec::new();
    for lambda in 0.. {
        let n = width * lambda + 1;
        if n > z_order {
            break;
        }
        let l = lambda as u32;
        if l <= w_order {
            expected_bar.push((n, l, int(closedform::fuss_catalan(k, l))));
        }
        expected_hat.push((n, 0, closedform::fuss_catalan_alt(k, l)));
    }
    let want_bar = SeriesZW::from_terms(k, z_order, w_order, expected_bar);
    let want_hat = SeriesZW::from_terms(k, z_order, 0, expected_hat);
    if let Some((n, s, got, want)) = ub.first_difference(&want_bar) {
        return Err(format!(
            "k={k} ū: z^{n} w^{s}: series {got}, formula {want}"
        ));
    }
    if let Some((n, s, got, want)) = uh.first_difference(&want_hat) {
        return Err(format!(
            "k={k} û: z^{n} w^{s}: series {got}, formula {want}"
        ));
    }
    Ok(want_bar.len() + want_hat.len())
}

/// `û^(-k) = z^(-k) - Σ_λ down_coeff(k, λ) z^((k+1)λ+1)`, and `û^(-k) û^k = 1`.
pub fn check_uhat_neg_k(k: u32, z_order: i64) -> CheckResult {
    let inv = series::uhat_neg_k(k, z_order).map_err(|e| e.to_string())?;
    let kk = i64::from(k);
    let mut terms = vec![(-kk, 0, Coeff::one())];
    for lambda in 0u32.. {
        let n = (kk + 1) * i64::from(lambda) + 1;
        if n > z_order {
            break;
        }
        terms.push((n, 0, -int(closedform::down_coeff(k, lambda))));
    }
    let want = SeriesZW::from_terms(k, z_order, 0, terms);
    if let Some((n, _, got, want)) = inv.first_difference(&want) {
        return Err(format!("k={k} û^-k: z^{n}: series {got}, formula {want}"));
    }
    let uh = series::uhat(k, z_order + 2 * kk).map_err(|e| e.to_string())?;
    let prod = inv.mul(&uh.pow(k));
    let one = SeriesZW::one(k, prod.z_order(), 0);
    if let Some((n, _, got, want)) = prod.first_difference(&one) {
        return Err(format!("k={k} û^-k·û^k: z^{n}: {got}, expected {want}"));
    }
    Ok(want.len() + 1)
}

/// The two Fuss–Catalan expressions agree for `λ <= max_lambda`.
pub fn check_fuss_catalan_forms(k: u32, max_lambda: u32) -> CheckResult {
    for l in 0..=max_lambda {
        let a = int(closedform::fuss_catalan(k, l));
        let b = closedform::fuss_catalan_alt(k, l);
        if a != b {
            return Err(format!("k={k} λ={l}: {a} vs {b}"));
        }
    }
    Ok(max_lambda as usize + 1)
}

/// `(u - z - z w u^(k+1)) Σ_{m<=M} F_m(u) = u - ū` on every term of
/// w-degree `<= M`, where `M = w_order`.
pub fn check_slice_identity(k: u32, z_order: i64, w_order: u32) -> CheckResult {
    let f = series::slice_partial_sum(k, z_order, w_order).map_err(|e| e.to_string())?;
    let lhs = UPolySeries::kernel(k, z_order, w_order).mul(&f);
    let ub = series::ubar(k, z_order, w_order).map_err(|e| e.to_string())?;
    let mut rhs = UPolySeries::zero(k, z_order, w_order, 1);
    rhs.set_coeff(0, ub.neg());
    rhs.set_coeff(1, SeriesZW::one(k, z_order, w_order));
    let diff = lhs.sub(&rhs);
    let mut cases = 0;
    for j in 0..=diff.u_order() {
        let c = diff.coeff(j);
        if let Some((n, s, c)) = c.terms().next() {
            return Err(format!("k={k}: u^{j} z^{n} w^{s}: residue {c}"));
        }
        cases += lhs.coeff(j).len();
    }
    Ok(cases)
}

/// `(ū - z)/(w z^(k+2))` equals the slice partial sum evaluated at `u = z`.
pub fn check_f_at_z(k: u32, z_order: i64, w_order: u32) -> CheckResult {
    let closed = series::eval_f_at_z(k, z_order, w_order).map_err(|e| e.to_string())?;
    let f = series::slice_partial_sum(k, z_order, w_order).map_err(|e| e.to_string())?;
    let at_z = f.eval_at_z();
    if let Some((n, s, a, b)) = closed.first_difference(&at_z) {
        return Err(format!(
            "k={k}: z^{n} w^{s}: kernel form {a}, slice sum {b}"
        ));
    }
    Ok(closed.len())
}

/// `suffix_count` against `(û - z) û^h / z` (first step up, `h >= 1`) and
/// `û^(h+1) / z` (unrestricted, `h >= 0`).
pub fn check_right_parts(k: u32, h_max: u32, l_max: u32) -> CheckResult {
    let z_order = i64::from(l_max);
    let mut cases = 0;
    for h in 0..=h_max {
        let max_part = series::max_right_part(k, h, z_order).map_err(|e| e.to_string())?;
        let min_part = if h >= 1 {
            Some(series::min_right_part(k, h, z_order).map_err(|e| e.to_string())?)
        } else {
            None
        };
        for len in 0..=l_max {
            let n = i64::from(len);
            let got = int(oracle::suffix_count(k, h, len, false));
            if got != max_part.coeff(n, 0) {
                return Err(format!(
                    "k={k} h={h} L={len} unrestricted: DP {got}, series {}",
                    max_part.coeff(n, 0)
                ));
            }
            if let Some(part) = &min_part {
                let got = int(oracle::suffix_count(k, h, len, true));
                if got != part.coeff(n, 0) {
                    return Err(format!(
                        "k={k} h={h} L={len} first-up: DP {got}, series {}",
                        part.coeff(n, 0)
                    ));
                }
                cases += 1;
            }
            cases += 1;
        }
    }
    Ok(cases)
}

/// Enumeration is duplicate-free, has `fuss_catalan(k, n)` members, and
/// every turn profile satisfies its structural invariants.
pub fn check_paths(k: u32, n: u32) -> CheckResult {
    let mut seen = HashSet::new();
    for path in oracle::enumerate_paths(k, n).map_err(|e| e.to_string())? {
        turn_profile(&path)
            .check(k, n)
            .map_err(|e| format!("k={k} N={n} path {path}: {e}"))?;
        if !seen.insert(path.steps().to_vec()) {
            return Err(format!("k={k} N={n}: path {path} listed twice"));
        }
    }
    let want = closedform::fuss_catalan(k, n);
    if BigUint::from(seen.len()) != want {
        return Err(format!(
            "k={k} N={n}: {} paths, expected {want}",
            seen.len()
        ));
    }
    Ok(seen.len())
}

/// Triple agreement for one `(k, N)` cell: generating-function coefficient,
/// closed form and enumeration, for every `1 <= s <= N` and every kind.
/// Also checks `osc = max - min` and the boundary identities
/// `max_sum(k,N,1) = k FC(k,N)`, `min_sum(k,N,N) = 0`.
pub fn check_cell(gfs: &TurnGfs, n: u32, mutation: Mutation) -> CheckResult {
    let k = gfs.k;
    let sums = oracle::turn_sums(k, n);
    let count = closedform::fuss_catalan(k, n);
    if BigUint::from(sums.count) != count {
        return Err(format!(
            "k={k} N={n}: oracle counted {} paths, expected {count}",
            sums.count
        ));
    }
    let mut cases = 0;
    for s in 1..=n {
        let req = StatRequest::new(k, n, s).map_err(|e| e.to_string())?;
        let mut closed = Vec::with_capacity(3);
        for kind in TurnKind::ALL {
            let c = closed_value(kind, &req, mutation);
            let g = gfs.coeff(kind, n, s).ok_or_else(|| {
                format!("k={k} N={n} s={s} {kind}: coefficient outside truncation or fractional")
            })?;
            let o = int(sums.get(kind, s).expect("s in range"));
            if c != int(g.clone()) || c != o {
                return Err(format!(
                    "k={k} N={n} s={s} {kind}: closed={c} series={g} oracle={o}"
                ));
            }
            closed.push(c);
            cases += 1;
        }
        let (min, max, osc) = (&closed[0], &closed[1], &closed[2]);
        if &(max - min) != osc {
            return Err(format!(
                "k={k} N={n} s={s}: max-min={} but osc={osc}",
                max - min
            ));
        }
        if s == 1 && *max != int(&count * k) {
            return Err(format!("k={k} N={n}: max_sum(s=1)={max}, expected k·count"));
        }
        if s == n && !min.is_zero() {
            return Err(format!("k={k} N={n}: min_sum(s=N)={min}, expected 0"));
        }
        let (lo, hi) = (int(&count * k), int(&count * (k * n)));
        if min >= max || *max < lo || *max > hi {
            return Err(format!(
                "k={k} N={n} s={s}: bounds violated (min={min}, max={max})"
            ));
        }
    }
    Ok(cases)
}

/// The three turn generating functions for one `k`.
#[derive(Debug, Clone)]
pub struct TurnGfs {
    pub k: u32,
    pub min: SeriesZW,
    pub max: SeriesZW,
    pub osc: SeriesZW,
}

impl TurnGfs {
    /// Builds all three, exact through paths with `n_max` up-steps.
    pub fn new(k: u32, n_max: u32) -> Result<Self> {
        let z_order = (i64::from(k) + 1) * i64::from(n_max.max(1));
        let w_order = n_max.max(1);
        Ok(TurnGfs {
            k,
            min: series::min_gf(k, z_order, w_order)?,
            max: series::max_gf(k, z_order, w_order)?,
            osc: series::osc_gf(k, z_order, w_order)?,
        })
    }

    pub fn coeff(&self, kind: TurnKind, n: u32, s: u32) -> Option<BigInt> {
        let gf = match kind {
            TurnKind::Min => &self.min,
            TurnKind::Max => &self.max,
            TurnKind::Osc => &self.osc,
        };
        series::turn_coeff(gf, n, s)
    }

    /// `osc_gf = max_gf - min_gf` coefficientwise.
    pub fn check_difference(&self) -> CheckResult {
        let diff = self.max.sub(&self.min);
        match diff.first_difference(&self.osc) {
            Some((n, s, a, b)) => Err(format!("k={}: z^{n} w^{s}: max-min={a}, osc={b}", self.k)),
            None => Ok(self.osc.len()),
        }
    }
}

/// Triple agreement across every `N <= n_max` for one `k`, cells in
/// parallel. The reported counterexample is the one with the smallest `N`.
pub fn check_triple(k: u32, n_max: u32, mutation: Mutation) -> CheckResult {
    let gfs = TurnGfs::new(k, n_max).map_err(|e| format!("k={k}: {e}"))?;
    gfs.check_difference()?;
    let cells: Vec<u32> = (0..=n_max).collect();
    let results = par::map(&cells, |&n| check_cell(&gfs, n, mutation));
    results.into_iter().try_fold(0, |acc, r| r.map(|c| acc + c))
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub k_max: u32,
    pub n_max: u32,
    pub z_order: i64,
    pub w_order: u32,
    pub mutation: Mutation,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            k_max: 3,
            n_max: 6,
            z_order: 30,
            w_order: 6,
            mutation: Mutation::None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub result: CheckResult,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.result {
            Ok(cases) => write!(f, "PASS {} ({cases} cases)", self.name),
            Err(why) => write!(f, "FAIL {}: {why}", self.name),
        }
    }
}

fn per_k(ks: &[u32], f: impl Fn(u32) -> CheckResult + Sync + Send) -> CheckResult {
    par::map(ks, |&k| f(k))
        .into_iter()
        .try_fold(0, |acc, r| r.map(|c| acc + c))
}

/// Runs the whole suite. Outcomes come back in a fixed order regardless of
/// how the work was scheduled.
pub fn run(cfg: &VerifyConfig) -> Vec<CheckOutcome> {
    let ks: Vec<u32> = (1..=cfg.k_max).collect();
    let (zo, wo, n_max) = (cfg.z_order, cfg.w_order, cfg.n_max);
    let slice_z = zo.min(24);
    let slice_w = wo.min(6);
    let mut out = Vec::new();
    let mut push = |name: &str, result: CheckResult| {
        out.push(CheckOutcome {
            name: name.to_string(),
            result,
        })
    };
    push(
        "kernel_fixed_point",
        per_k(&ks, |k| check_kernel_fixed_point(k, zo, wo)),
    );
    push(
        "kernel_coefficients",
        per_k(&ks, |k| check_kernel_coefficients(k, zo, wo)),
    );
    push(
        "uhat_neg_k_coefficients",
        per_k(&ks, |k| check_uhat_neg_k(k, zo)),
    );
    push(
        "fuss_catalan_forms",
        per_k(&ks, |k| check_fuss_catalan_forms(k, zo.max(0) as u32)),
    );
    push(
        "slice_sum_kernel_identity",
        per_k(&ks, |k| check_slice_identity(k, slice_z, slice_w)),
    );
    push("f_at_z", per_k(&ks, |k| check_f_at_z(k, slice_z, slice_w)));
    push(
        "right_part_suffix_counts",
        per_k(&ks, |k| check_right_parts(k, 5, zo.clamp(0, 20) as u32)),
    );
    push(
        "path_enumeration_and_profiles",
        per_k(&ks, |k| {
            (0..=n_max).try_fold(0, |acc, n| check_paths(k, n).map(|c| acc + c))
        }),
    );
    // k in ascending order so the first reported failure has the smallest k
    let triple = ks
        .iter()
        .map(|&k| check_triple(k, n_max, cfg.mutation))
        .try_fold(0, |acc, r| r.map(|c| acc + c));
    push("triple_agreement", triple);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let cfg = VerifyConfig {
            k_max: 2,
            n_max: 4,
            z_order: 12,
            w_order: 4,
            mutation: Mutation::None,
        };
        for outcome in run(&cfg) {
            assert!(outcome.passed(), "{outcome}");
        }
    }

    #[test]
    fn min_bound_mutation_is_caught_at_smallest_cell() {
        let cfg = VerifyConfig {
            k_max: 2,
            n_max: 4,
            z_order: 12,
            w_order: 4,
            mutation: Mutation::MinSumBound,
        };
        let last = run(&cfg).pop().unwrap();
        let err = last.result.unwrap_err();
        assert!(err.starts_with("k=1 N=1 s=1 min"), "{err}");
    }

    #[test]
    fn mutation_names_parse() {
        assert_eq!(
            "osc-denominator".parse::<Mutation>().unwrap(),
            Mutation::OscDenominator
        );
        assert!("bogus".parse::<Mutation>().is_err());
    }
}
