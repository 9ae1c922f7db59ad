//! Truncated bivariate series in `z` (length) and `w` (turn marker).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact coefficient domain.
pub type Coeff = BigRational;

/// A truncated series `Σ c(n, s) z^n w^s` with exact rational coefficients.
///
/// Coefficients are exact for `z_shift <= n <= z_order` and `0 <= s <= w_order`;
/// anything outside that box is unknown and never stored. Zero coefficients
/// are never stored either. `z_shift` is `0` for power series and negative
/// only for the Laurent expansions needed around `û^(-k)`.
#[derive(Clone, PartialEq, Eq)]
pub struct SeriesZW {
    k: u32,
    z_order: i64,
    w_order: u32,
    z_shift: i64,
    coeffs: BTreeMap<(i64, u32), Coeff>,
}

impl fmt::Debug for SeriesZW {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SeriesZW(k={}, z<={}, w<={}, shift={}) ",
            self.k, self.z_order, self.w_order, self.z_shift
        )?;
        f.debug_map()
            .entries(
                self.coeffs
                    .iter()
                    .map(|((n, s), c)| (format!("z^{n} w^{s}"), c.to_string())),
            )
            .finish()
    }
}

impl SeriesZW {
    pub fn zero(k: u32, z_order: i64, w_order: u32) -> Self {
        SeriesZW {
            k,
            z_order,
            w_order,
            z_shift: 0,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(k: u32, z_order: i64, w_order: u32) -> Self {
        Self::monomial(k, z_order, w_order, Coeff::one(), 0, 0)
    }

    /// `c · z^n · w^s`, dropped if it lies outside the truncation box.
    pub fn monomial(k: u32, z_order: i64, w_order: u32, c: Coeff, n: i64, s: u32) -> Self {
        let mut out = Self::zero(k, z_order, w_order);
        out.z_shift = n.min(0);
        out.insert(n, s, c);
        out
    }

    /// Builds a series from `(z-exponent, w-exponent, coefficient)` triples,
    /// summing duplicates.
    pub fn from_terms<I>(k: u32, z_order: i64, w_order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, u32, Coeff)>,
    {
        let mut out = Self::zero(k, z_order, w_order);
        for (n, s, c) in terms {
            out.z_shift = out.z_shift.min(n);
            out.accumulate(n, s, &c);
        }
        out
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn z_order(&self) -> i64 {
        self.z_order
    }

    pub fn w_order(&self) -> u32 {
        self.w_order
    }

    pub fn z_shift(&self) -> i64 {
        self.z_shift
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^n w^s`; zero when absent.
    pub fn coeff(&self, n: i64, s: u32) -> Coeff {
        self.coeffs
            .get(&(n, s))
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    /// Coefficient of `z^n w^s` as an integer, `None` if it is fractional.
    pub fn int_coeff(&self, n: i64, s: u32) -> Option<BigInt> {
        let c = self.coeff(n, s);
        c.is_integer().then(|| c.to_integer())
    }

    /// Nonzero terms in `(z-exponent, w-exponent)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, u32, &Coeff)> + '_ {
        self.coeffs.iter().map(|(&(n, s), c)| (n, s, c))
    }

    /// Smallest z-exponent present; `z_order + 1` for the zero series.
    pub fn z_valuation(&self) -> i64 {
        self.coeffs
            .keys()
            .map(|&(n, _)| n)
            .min()
            .unwrap_or(self.z_order + 1)
    }

    /// Smallest w-exponent present; `w_order + 1` for the zero series.
    pub fn w_valuation(&self) -> u32 {
        self.coeffs
            .keys()
            .map(|&(_, s)| s)
            .min()
            .unwrap_or(self.w_order + 1)
    }

    fn in_box(&self, n: i64, s: u32) -> bool {
        n <= self.z_order && s <= self.w_order
    }

    fn insert(&mut self, n: i64, s: u32, c: Coeff) {
        if !c.is_zero() && self.in_box(n, s) {
            self.coeffs.insert((n, s), c);
        }
    }

    fn accumulate(&mut self, n: i64, s: u32, c: &Coeff) {
        if c.is_zero() || !self.in_box(n, s) {
            return;
        }
        let slot = self.coeffs.entry((n, s)).or_insert_with(Coeff::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(n, s));
        }
    }

    fn check_compatible(&self, other: &SeriesZW) {
        assert_eq!(self.k, other.k, "series built for different k");
    }

    /// Drops every term beyond the given bounds (which may only shrink the box).
    pub fn truncate(&self, z_order: i64, w_order: u32) -> SeriesZW {
        let z_order = z_order.min(self.z_order);
        let w_order = w_order.min(self.w_order);
        SeriesZW {
            k: self.k,
            z_order,
            w_order,
            z_shift: self.z_shift,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&(n, s), _)| n <= z_order && s <= w_order)
                .map(|(&key, c)| (key, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &SeriesZW) -> SeriesZW {
        self.check_compatible(other);
        let mut out = SeriesZW {
            k: self.k,
            z_order: self.z_order.min(other.z_order),
            w_order: self.w_order.min(other.w_order),
            z_shift: self.z_shift.min(other.z_shift),
            coeffs: BTreeMap::new(),
        };
        for (&(n, s), c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.accumulate(n, s, c);
        }
        out
    }

    pub fn neg(&self) -> SeriesZW {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &SeriesZW) -> SeriesZW {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> SeriesZW {
        let mut out = SeriesZW {
            coeffs: BTreeMap::new(),
            ..self.clone()
        };
        if c.is_zero() {
            return out;
        }
        for (&(n, s), v) in &self.coeffs {
            out.insert(n, s, v * c);
        }
        out
    }

    pub fn scale_int(&self, c: i64) -> SeriesZW {
        self.scale(&Coeff::from_integer(BigInt::from(c)))
    }

    /// Multiplies by `z^a w^b` (`a` may be negative).
    ///
    /// A negative `a` lowers `z_order` by `|a|`; a positive shift keeps the
    /// declared bounds and drops whatever moves past them.
    pub fn mul_monomial(&self, a: i64, b: u32) -> SeriesZW {
        let mut out = SeriesZW {
            k: self.k,
            z_order: if a < 0 {
                self.z_order + a
            } else {
                self.z_order
            },
            w_order: self.w_order,
            z_shift: (self.z_shift + a).min(0),
            coeffs: BTreeMap::new(),
        };
        for (&(n, s), c) in &self.coeffs {
            out.insert(n + a, s + b, c.clone());
        }
        out
    }

    /// Divides by `z^a w^b`. Fails if some term has w-exponent below `b`.
    pub fn div_monomial(&self, a: i64, b: u32) -> Result<SeriesZW> {
        if b > self.w_order {
            return Err(Error::NotDivisible(format!(
                "w^{b} exceeds w truncation order {}",
                self.w_order
            )));
        }
        if let Some(&(n, s)) = self.coeffs.keys().find(|&&(_, s)| s < b) {
            return Err(Error::NotDivisible(format!(
                "term z^{n} w^{s} is not divisible by w^{b}"
            )));
        }
        let mut out = SeriesZW {
            k: self.k,
            z_order: self.z_order - a,
            w_order: self.w_order - b,
            z_shift: (self.z_shift - a).min(0),
            coeffs: BTreeMap::new(),
        };
        for (&(n, s), c) in &self.coeffs {
            out.insert(n - a, s - b, c.clone());
        }
        Ok(out)
    }

    /// Truncated product.
    ///
    /// The result is exact up to `z_order(A) + val(B)` and `z_order(B) + val(A)`
    /// (whichever is smaller), likewise in `w`, and never beyond the larger of
    /// the two input bounds.
    pub fn mul(&self, other: &SeriesZW) -> SeriesZW {
        self.check_compatible(other);
        let z_order = (self.z_order + other.z_valuation())
            .min(other.z_order + self.z_valuation())
            .min(self.z_order.max(other.z_order));
        let w_order = (self.w_order + other.w_valuation())
            .min(other.w_order + self.w_valuation())
            .min(self.w_order.max(other.w_order));
        let mut out = SeriesZW {
            k: self.k,
            z_order,
            w_order,
            z_shift: (self.z_shift + other.z_shift).min(0),
            coeffs: BTreeMap::new(),
        };
        for (&(n1, s1), c1) in &self.coeffs {
            if n1 + other.z_shift > z_order {
                break;
            }
            for (&(n2, s2), c2) in &other.coeffs {
                let n = n1 + n2;
                if n > z_order {
                    break;
                }
                let s = s1 + s2;
                if s <= w_order {
                    out.accumulate(n, s, &(c1 * c2));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> SeriesZW {
        let mut result = SeriesZW::one(self.k, self.z_order, self.w_order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Reciprocal of a unit power series (nonzero constant term, no negative
    /// exponents), solved coefficient by coefficient in lexicographic
    /// `(n, s)` order.
    pub fn reciprocal_unit(&self) -> Result<SeriesZW> {
        if self.coeffs.keys().any(|&(n, _)| n < 0) {
            return Err(Error::NotDivisible(
                "unit series has negative z-exponents".into(),
            ));
        }
        let c0 = self.coeff(0, 0);
        if c0.is_zero() {
            return Err(Error::NotDivisible("constant term is zero".into()));
        }
        let inv_c0 = c0.recip();
        let zo = self.z_order.max(0);
        let wo = self.w_order;
        let width = wo as usize + 1;
        let mut grid = vec![Coeff::zero(); (zo as usize + 1) * width];
        let rest: Vec<_> = self
            .coeffs
            .iter()
            .filter(|(&key, _)| key != (0, 0))
            .map(|(&(n, s), c)| (n, s, c))
            .collect();
        for n in 0..=zo {
            for s in 0..=wo {
                let mut acc = if n == 0 && s == 0 {
                    Coeff::one()
                } else {
                    Coeff::zero()
                };
                for &(i, j, c) in &rest {
                    if i > n {
                        break;
                    }
                    if j <= s {
                        let prev = &grid[(n - i) as usize * width + (s - j) as usize];
                        if !prev.is_zero() {
                            acc -= c * prev;
                        }
                    }
                }
                grid[n as usize * width + s as usize] = acc * &inv_c0;
            }
        }
        let mut out = SeriesZW::zero(self.k, zo, wo);
        for n in 0..=zo {
            for s in 0..=wo {
                let c = std::mem::take(&mut grid[n as usize * width + s as usize]);
                out.insert(n, s, c);
            }
        }
        Ok(out)
    }

    /// `self / divisor`, where the divisor's lowest term is a monomial
    /// `c z^a w^b` dividing every other term.
    pub fn div(&self, divisor: &SeriesZW) -> Result<SeriesZW> {
        self.check_compatible(divisor);
        if divisor.is_zero() {
            return Err(Error::NotDivisible("division by the zero series".into()));
        }
        let a = divisor.z_valuation();
        let b = divisor.w_valuation();
        if divisor.coeff(a, b).is_zero() {
            return Err(Error::NotDivisible(format!(
                "lowest term of divisor is not the monomial z^{a} w^{b}"
            )));
        }
        let unit = divisor.div_monomial(a, b)?;
        let unit = SeriesZW { z_shift: 0, ..unit };
        let inv = unit.reciprocal_unit()?;
        Ok(self.div_monomial(a, b)?.mul(&inv))
    }

    /// Ensures the series has no negative z-exponents and only integer
    /// coefficients, returning it with `z_shift` reset to zero.
    pub fn into_integral_power_series(self, what: &str) -> Result<SeriesZW> {
        if let Some(((n, s), c)) = self.coeffs.iter().find(|(&(n, _), _)| n < 0) {
            return Err(Error::InternalInconsistency(format!(
                "{what}: residue {c} at negative exponent z^{n} w^{s}"
            )));
        }
        if let Some(((n, s), c)) = self.coeffs.iter().find(|(_, c)| !c.is_integer()) {
            return Err(Error::InternalInconsistency(format!(
                "{what}: fractional coefficient {c} at z^{n} w^{s}"
            )));
        }
        Ok(SeriesZW { z_shift: 0, ..self })
    }

    /// First term (in lexicographic order) where the two series differ
    /// inside the common truncation box.
    pub fn first_difference(&self, other: &SeriesZW) -> Option<(i64, u32, Coeff, Coeff)> {
        let zo = self.z_order.min(other.z_order);
        let wo = self.w_order.min(other.w_order);
        let keys: std::collections::BTreeSet<_> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .filter(|&&(n, s)| n <= zo && s <= wo)
            .copied()
            .collect();
        keys.into_iter().find_map(|(n, s)| {
            let (x, y) = (self.coeff(n, s), other.coeff(n, s));
            (x != y).then_some((n, s, x, y))
        })
    }

    pub fn has_negative_coeffs(&self) -> bool {
        self.coeffs.values().any(|c| c.is_negative())
    }
}
