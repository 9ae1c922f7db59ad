use super::zw::{Coeff, SeriesZW};

/// Polynomial in the catalytic variable `u` whose coefficients are
/// [`SeriesZW`] values sharing one truncation box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPolySeries {
    k: u32,
    z_order: i64,
    w_order: u32,
    coeffs: Vec<SeriesZW>,
}

impl UPolySeries {
    pub fn zero(k: u32, z_order: i64, w_order: u32, u_order: usize) -> Self {
        UPolySeries {
            k,
            z_order,
            w_order,
            coeffs: vec![SeriesZW::zero(k, z_order, w_order); u_order + 1],
        }
    }

    /// The constant polynomial `1`, i.e. the empty-path generating function.
    pub fn one(k: u32, z_order: i64, w_order: u32, u_order: usize) -> Self {
        let mut out = Self::zero(k, z_order, w_order, u_order);
        out.coeffs[0] = SeriesZW::one(k, z_order, w_order);
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

    pub fn u_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `u^j` (the zero series beyond `u_order`).
    pub fn coeff(&self, j: usize) -> SeriesZW {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| SeriesZW::zero(self.k, self.z_order, self.w_order))
    }

    /// Highest `u`-degree with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Sets the coefficient of `u^j`, clipped to this polynomial's box.
    /// Degrees beyond `u_order` are dropped.
    pub fn set_coeff(&mut self, j: usize, c: SeriesZW) {
        if j < self.coeffs.len() {
            self.coeffs[j] = c.truncate(self.z_order, self.w_order);
        }
    }

    pub fn add(&self, other: &UPolySeries) -> UPolySeries {
        assert_eq!(self.k, other.k, "polynomials built for different k");
        let u_order = self.u_order().max(other.u_order());
        let mut out = UPolySeries::zero(
            self.k,
            self.z_order.min(other.z_order),
            self.w_order.min(other.w_order),
            u_order,
        );
        for j in 0..=u_order {
            out.coeffs[j] = self
                .coeff(j)
                .add(&other.coeff(j))
                .truncate(out.z_order, out.w_order);
        }
        out
    }

    pub fn sub(&self, other: &UPolySeries) -> UPolySeries {
        let mut neg = other.clone();
        for c in &mut neg.coeffs {
            *c = c.neg();
        }
        self.add(&neg)
    }

    /// Full product; the result's `u_order` is the sum of both.
    pub fn mul(&self, other: &UPolySeries) -> UPolySeries {
        assert_eq!(self.k, other.k, "polynomials built for different k");
        let mut out = UPolySeries::zero(
            self.k,
            self.z_order.min(other.z_order),
            self.w_order.min(other.w_order),
            self.u_order() + other.u_order(),
        );
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, b)| !b.is_zero())
            {
                let prod = a.mul(b).truncate(out.z_order, out.w_order);
                out.coeffs[i + j] = out.coeffs[i + j].add(&prod);
            }
        }
        out
    }

    /// Substitutes `u := z`, giving `Σ_j c_j z^j`.
    pub fn eval_at_z(&self) -> SeriesZW {
        self.coeffs.iter().enumerate().fold(
            SeriesZW::zero(self.k, self.z_order, self.w_order),
            |acc, (j, c)| acc.add(&c.mul_monomial(j as i64, 0)),
        )
    }

    /// Substitutes `u := 1`, summing over all levels.
    pub fn eval_at_one(&self) -> SeriesZW {
        self.coeffs.iter().fold(
            SeriesZW::zero(self.k, self.z_order, self.w_order),
            |acc, c| acc.add(c),
        )
    }

    /// The kernel `u - z - z w u^(k+1)`.
    pub fn kernel(k: u32, z_order: i64, w_order: u32) -> UPolySeries {
        let mut out = UPolySeries::zero(k, z_order, w_order, k as usize + 1);
        out.coeffs[0] =
            SeriesZW::monomial(k, z_order, w_order, -Coeff::from_integer(1.into()), 1, 0);
        out.coeffs[1] = SeriesZW::one(k, z_order, w_order);
        let zw = SeriesZW::monomial(k, z_order, w_order, -Coeff::from_integer(1.into()), 1, 1);
        out.coeffs[k as usize + 1] = out.coeffs[k as usize + 1].add(&zw);
        out
    }
}
