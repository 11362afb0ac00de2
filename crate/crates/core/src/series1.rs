//! Truncated univariate power series.

use std::fmt;

use crate::coeff::{Coeff, Rational};
use crate::error::{GermError, Result};

/// Series `sum_{n <= N} c_n x^n`; coefficients above `N` are unknown.
#[derive(Clone, PartialEq)]
pub struct Series1<C = Rational> {
    coeffs: Vec<C>,
}

impl<C: Coeff> Series1<C> {
    /// Series whose truncation order is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// On an empty coefficient list.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series carries at least its constant term");
        Series1 { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series1 { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = C::one();
        s
    }

    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = C::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series1 {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Index of the first nonzero coefficient; `None` if zero up to the order.
    pub fn x_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Series1 {
            coeffs: (0..=n).map(|i| self.coeffs[i].add(&other.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Series1 {
            coeffs: (0..=n).map(|i| self.coeffs[i].sub(&other.coeffs[i])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Series1 { coeffs: self.coeffs.iter().map(C::neg).collect() }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Series1 { coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j].add_mul(a, b);
            }
        }
        Series1 { coeffs: out }
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Series1 {
            coeffs: (1..=self.order())
                .map(|n| self.coeffs[n].scale(&Rational::from_integer(n.into())))
                .collect(),
        }
    }

    pub fn invert_unit(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or(GermError::NonUnit)?;
        let n = self.order();
        let mut v = vec![C::zero(); n + 1];
        v[0] = inv0.clone();
        for d in 1..=n {
            let mut acc = C::zero();
            for i in 1..=d {
                acc.add_mul(&self.coeffs[i], &v[d - i]);
            }
            v[d] = acc.mul(&inv0).neg();
        }
        Ok(Series1 { coeffs: v })
    }

    /// `g(h(x))` for `h(0) = 0`, by Horner's rule; order `min(Ng, Nh)`.
    pub fn compose(&self, h: &Self) -> Result<Self> {
        if !h.coeffs[0].is_zero() {
            return Err(GermError::IllFormedComposition);
        }
        let n = self.order().min(h.order());
        let h = h.truncate(n);
        let mut acc = Self::zero(n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = acc.mul(&h);
            acc.coeffs[0].add_assign(c);
        }
        Ok(acc)
    }

    /// Compositional inverse of `f` with `f(0) = 0`, `f'(0)` invertible, by
    /// Lagrange inversion: `[x^n] g = (1/n) [t^(n-1)] (t / f(t))^n`.
    pub fn revert(&self) -> Result<Self> {
        let valuation = self.x_valuation();
        if valuation != Some(1) {
            return Err(GermError::NotReversible { valuation });
        }
        let n = self.order();
        if self.coeffs[1].inverse().is_none() {
            return Err(GermError::NotReversible { valuation });
        }
        // f(t)/t is known to order n - 1.
        let f_over_t = Series1 { coeffs: self.coeffs[1..].to_vec() };
        let p = f_over_t.invert_unit()?;
        let mut out = Self::zero(n);
        let mut p_pow = Self::one(n - 1);
        for m in 1..=n {
            p_pow = p_pow.mul(&p);
            out.coeffs[m] = p_pow.coeffs[m - 1].scale(&Rational::new(1.into(), (m as i64).into()));
        }
        Ok(out)
    }
}

/// Compositional inverse; see [`Series1::revert`].
pub fn revert1<C: Coeff>(f: &Series1<C>) -> Result<Series1<C>> {
    f.revert()
}

impl<C: Coeff> fmt::Debug for Series1<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(x^{})", crate::format::render1(self, "x"), self.order() + 1)
    }
}

impl<C: Coeff> fmt::Display for Series1<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::render1(self, "x"))
    }
}
