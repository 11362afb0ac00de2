//! Truncated bivariate power series over a [`Coeff`] ring.
//!
//! A `Series2` of truncation order `N` stores every coefficient of
//! `x^j y^k` with `j + k <= N` in a dense triangular array laid out by
//! total degree, and within a degree by descending power of `x`. Terms of
//! total degree above `N` are unknown, not zero.

use std::fmt;

use crate::coeff::{Coeff, LambdaPoly, Rational};
use crate::error::{GermError, Result};
use crate::series1::Series1;

#[inline]
pub(crate) fn tri(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Position of `x^j y^k` in the triangular layout.
#[inline]
pub(crate) fn idx(j: usize, k: usize) -> usize {
    tri(j + k) + k
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

#[derive(Clone, PartialEq)]
pub struct Series2<C = Rational> {
    order: usize,
    coeffs: Vec<C>,
}

pub type LambdaSeries2 = Series2<LambdaPoly>;

impl<C: Coeff> Series2<C> {
    pub fn zero(order: usize) -> Self {
        Series2 {
            order,
            coeffs: vec![C::zero(); tri(order + 1)],
        }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// `c * x^j * y^k`, or zero when the monomial lies beyond `order`.
    pub fn monomial(c: C, j: usize, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if j + k <= order {
            s.coeffs[idx(j, k)] = c;
        }
        s
    }

    pub fn x(order: usize) -> Self {
        Self::monomial(C::one(), 1, 0, order)
    }

    pub fn y(order: usize) -> Self {
        Self::monomial(C::one(), 0, 1, order)
    }

    /// `y(y - x)`, the defining equation of the fixed set of the family.
    pub fn fixed_curve(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 2 {
            s.coeffs[idx(0, 2)] = C::one();
            s.coeffs[idx(1, 1)] = C::one().neg();
        }
        s
    }

    /// Builds a series from `(xk, yk, c)` triples; repeated bidegrees add up
    /// and terms beyond `order` are dropped.
    pub fn from_terms<I>(terms: I, order: usize) -> Self
    where
        I: IntoIterator<Item = (usize, usize, C)>,
    {
        let mut s = Self::zero(order);
        for (j, k, c) in terms {
            if j + k <= order {
                s.coeffs[idx(j, k)].add_assign(&c);
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `x^j y^k`, or `None` if it lies beyond the truncation order.
    pub fn get(&self, j: usize, k: usize) -> Option<&C> {
        (j + k <= self.order).then(|| &self.coeffs[idx(j, k)])
    }

    /// Coefficient of `x^j y^k`; zero beyond the truncation order.
    pub fn coeff(&self, j: usize, k: usize) -> C {
        self.get(j, k).cloned().unwrap_or_else(C::zero)
    }

    pub fn set(&mut self, j: usize, k: usize, c: C) {
        assert!(j + k <= self.order, "x^{j}*y^{k} beyond order {}", self.order);
        self.coeffs[idx(j, k)] = c;
    }

    pub fn constant_term(&self) -> &C {
        &self.coeffs[0]
    }

    /// Nonzero terms as `(xk, yk, &c)`, by total degree then descending `xk`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &C)> + '_ {
        (0..=self.order).flat_map(move |d| {
            (0..=d).filter_map(move |k| {
                let c = &self.coeffs[idx(d - k, k)];
                (!c.is_zero()).then_some((d - k, k, c))
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    /// Drops every term above `order`; no-op when `order >= self.order()`.
    pub fn truncate(&self, order: usize) -> Self {
        if order >= self.order {
            return self.clone();
        }
        Series2 {
            order,
            coeffs: self.coeffs[..tri(order + 1)].to_vec(),
        }
    }

    /// Reinterprets the stored data as a polynomial known to a higher order.
    ///
    /// Only sound when the caller knows the terms above `self.order()` vanish,
    /// e.g. for exact polynomial input data.
    pub fn as_polynomial_to(&self, order: usize) -> Self {
        let mut s = Self::zero(order);
        let n = tri(self.order.min(order) + 1);
        s.coeffs[..n].clone_from_slice(&self.coeffs[..n]);
        s
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        (0..=self.order)
            .rev()
            .find(|&d| (0..=d).any(|k| !self.coeffs[idx(d - k, k)].is_zero()))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series2<D> {
        Series2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Least total degree with a nonzero coefficient; `None` stands for
    /// "zero up to the truncation order" (valuation at least `N + 1`).
    pub fn krull_valuation(&self) -> Option<usize> {
        (0..=self.order).find(|&d| (0..=d).any(|k| !self.coeffs[idx(d - k, k)].is_zero()))
    }

    /// Valuation with the infinity marker replaced by `order + 1`.
    pub fn valuation_or_order(&self) -> usize {
        self.krull_valuation().unwrap_or(self.order + 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let n = tri(order + 1);
        Series2 {
            order,
            coeffs: self.coeffs[..n]
                .iter()
                .zip(&other.coeffs[..n])
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let n = tri(order + 1);
        Series2 {
            order,
            coeffs: self.coeffs[..n]
                .iter()
                .zip(&other.coeffs[..n])
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(C::neg)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scale(r))
    }

    pub fn scale_by(&self, c: &C) -> Self {
        self.map(|a| a.mul(c))
    }

    /// Cauchy product truncated at `min(Na, Nb)`.
    pub fn mul(&self, other: &Self) -> Self {
        mul_to(self, other, self.order.min(other.order))
    }

    /// Product with the truncation order both operands actually determine:
    /// `min(Na + val(b), Nb + val(a))`. Use when one factor has high valuation,
    /// e.g. `y(y-x) * Δ`.
    pub fn mul_precise(&self, other: &Self) -> Self {
        let order = (self.order + other.valuation_or_order())
            .min(other.order + self.valuation_or_order());
        mul_to(self, other, order)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse of a unit, solved degree by degree: `v_0 = 1/u_0`,
    /// `v_d = -u_0^{-1} * sum_{i>=1} u_i v_{d-i}` on homogeneous layers.
    pub fn invert_unit(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse().ok_or(GermError::NonUnit)?;
        let n = self.order;
        let mut v = Self::zero(n);
        v.coeffs[0] = inv0.clone();
        for d in 1..=n {
            for k in 0..=d {
                let j = d - k;
                let mut acc = C::zero();
                // sum over u-terms (ja, ka) of degree >= 1 with (j - ja, k - ka) of degree d - da
                for da in 1..=d {
                    for ka in 0..=da.min(k) {
                        let ja = da - ka;
                        if ja > j {
                            continue;
                        }
                        acc.add_mul(&self.coeffs[idx(ja, ka)], &v.coeffs[idx(j - ja, k - ka)]);
                    }
                }
                v.coeffs[idx(j, k)] = acc.mul(&inv0).neg();
            }
        }
        Ok(v)
    }

    /// Formal partial derivative; the result is known to order `N - 1`.
    ///
    /// # Panics
    /// If the truncation order is 0 (no coefficient of the derivative is known).
    pub fn partial(&self, var: Var) -> Self {
        assert!(self.order >= 1, "derivative of an order-0 series carries no information");
        let n = self.order - 1;
        let mut out = Self::zero(n);
        for d in 0..=n {
            for k in 0..=d {
                let j = d - k;
                let (src, factor) = match var {
                    Var::X => (idx(j + 1, k), j + 1),
                    Var::Y => (idx(j, k + 1), k + 1),
                };
                let c = &self.coeffs[src];
                if !c.is_zero() {
                    out.coeffs[idx(j, k)] = c.scale(&Rational::from_integer(factor.into()));
                }
            }
        }
        out
    }

    /// `∫_0^y self dy`, the unique y-antiderivative vanishing on `y = 0`.
    /// Known to order `N + 1`.
    pub fn antiderivative_y(&self) -> Self {
        let mut out = Self::zero(self.order + 1);
        for (j, k, c) in self.terms() {
            out.coeffs[idx(j, k + 1)] = c.scale(&Rational::new(1.into(), (k as i64 + 1).into()));
        }
        out
    }

    /// Restriction to the line `y = 0`, as a series in `x`.
    pub fn restrict_y0(&self) -> Series1<C> {
        Series1::from_coeffs((0..=self.order).map(|j| self.coeffs[idx(j, 0)].clone()).collect())
    }

    /// Restriction to the line `x = 0`, as a series in `y`.
    pub fn restrict_x0(&self) -> Series1<C> {
        Series1::from_coeffs((0..=self.order).map(|k| self.coeffs[idx(0, k)].clone()).collect())
    }

    /// Restriction to the diagonal `y = x`, parametrized by `x`.
    pub fn restrict_diagonal(&self) -> Series1<C> {
        Series1::from_coeffs(
            (0..=self.order)
                .map(|d| {
                    let mut acc = C::zero();
                    for k in 0..=d {
                        acc.add_assign(&self.coeffs[idx(d - k, k)]);
                    }
                    acc
                })
                .collect(),
        )
    }

    /// Embeds a series in `x` as a series in `(x, y)` independent of `y`.
    pub fn from_series1_x(s: &Series1<C>) -> Self {
        Self::from_terms(
            s.coeffs().iter().enumerate().map(|(j, c)| (j, 0, c.clone())),
            s.order(),
        )
    }

    /// Exact division by `q`: returns `b` with `self = q * b` up to the
    /// truncation order. `b` is known to order `min(Na, Nq) - val(q)`.
    ///
    /// Division runs layer by layer in total degree; within a layer it is a
    /// synthetic division led by the term of `q`'s lowest layer with the
    /// highest power of `x`. The first nonzero remainder term is reported.
    pub fn divide_ideal(&self, q: &Self) -> Result<Self> {
        let v = q
            .krull_valuation()
            .ok_or_else(|| GermError::InvariantBreach("division by zero series".into()))?;
        let top = self.order.min(q.order);
        if top < v {
            return Err(GermError::OutOfRange(format!(
                "dividend known to order {top}, divisor has valuation {v}"
            )));
        }
        // Lead term of q's lowest layer: highest x-power.
        let k_lead = (0..=v)
            .find(|&k| !q.coeffs[idx(v - k, k)].is_zero())
            .expect("valuation layer is nonzero");
        let j_lead = v - k_lead;
        let lead_inv = q.coeffs[idx(j_lead, k_lead)].inverse().ok_or(GermError::NonUnit)?;

        let out_order = top - v;
        let mut b = Self::zero(out_order);
        for d in 0..=top {
            let mut r: Vec<C> = (0..=d).map(|k| self.coeffs[idx(d - k, k)].clone()).collect();
            if d >= v {
                // Remove contributions of q's higher layers times known quotient layers.
                for qi in (v + 1)..=d.min(q.order) {
                    let bd = d - qi;
                    for kq in 0..=qi {
                        let cq = &q.coeffs[idx(qi - kq, kq)];
                        if cq.is_zero() {
                            continue;
                        }
                        for kb in 0..=bd {
                            let cb = &b.coeffs[idx(bd - kb, kb)];
                            if !cb.is_zero() {
                                r[kq + kb].sub_assign(&cq.mul(cb));
                            }
                        }
                    }
                }
            }
            for k in 0..=d {
                let j = d - k;
                if d >= v && j >= j_lead && k >= k_lead {
                    if r[k].is_zero() {
                        continue;
                    }
                    let c = r[k].mul(&lead_inv);
                    let (bj, bk) = (j - j_lead, k - k_lead);
                    for kq in k_lead..=v {
                        let cq = &q.coeffs[idx(v - kq, kq)];
                        if !cq.is_zero() {
                            r[bk + kq].sub_assign(&c.mul(cq));
                        }
                    }
                    b.coeffs[idx(bj, bk)] = c;
                } else if !r[k].is_zero() {
                    return Err(GermError::NotDivisible { xk: j, yk: k });
                }
            }
        }
        Ok(b)
    }

    /// Builds a reusable substitution `g ↦ g(sx, sy)`; see [`Composer`].
    pub fn composer(sx: &Self, sy: &Self) -> Result<Composer<C>> {
        Composer::new(sx, sy)
    }
}

impl Series2<LambdaPoly> {
    /// Specializes λ to a rational value.
    pub fn eval_lambda(&self, at: &Rational) -> Series2<Rational> {
        self.map(|p| p.eval(at))
    }

    /// Coefficientwise λ^i-coefficient.
    pub fn lambda_coeff(&self, i: usize) -> Series2<Rational> {
        self.map(|p| p.coeff(i))
    }

    /// Lifts a rational series to λ-polynomial coefficients (all of λ-degree 0).
    pub fn from_rational(s: &Series2<Rational>) -> Self {
        s.map(|c| LambdaPoly::constant(c.clone()))
    }
}

/// Cauchy product computed up to total degree `order`, reading coefficients
/// beyond either operand's truncation as zero. The caller is responsible for
/// `order` being justified by the operands' precision.
pub(crate) fn mul_to<C: Coeff>(a: &Series2<C>, b: &Series2<C>, order: usize) -> Series2<C> {
    let mut out = Series2::<C>::zero(order);
    let da_max = a.order.min(order);
    for da in 0..=da_max {
        for ka in 0..=da {
            let ca = &a.coeffs[idx(da - ka, ka)];
            if ca.is_zero() {
                continue;
            }
            let db_max = (order - da).min(b.order);
            for db in 0..=db_max {
                let base = tri(da + db);
                for kb in 0..=db {
                    let cb = &b.coeffs[tri(db) + kb];
                    if !cb.is_zero() {
                        out.coeffs[base + ka + kb].add_mul(ca, cb);
                    }
                }
            }
        }
    }
    out
}

/// Horner-style composition `g(sx, sy)`.
///
/// `sx` and `sy` must have zero constant term; the result is known to order
/// `min(Ng, Nsx, Nsy)`.
pub fn compose2<C: Coeff>(g: &Series2<C>, sx: &Series2<C>, sy: &Series2<C>) -> Result<Series2<C>> {
    if !sx.constant_term().is_zero() || !sy.constant_term().is_zero() {
        return Err(GermError::IllFormedComposition);
    }
    let n = g.order.min(sx.order).min(sy.order);
    let sx = sx.truncate(n);
    let sy = sy.truncate(n);
    let mut sy_pows = Vec::with_capacity(n + 1);
    sy_pows.push(Series2::one(n));
    for k in 1..=n {
        let next = sy_pows[k - 1].mul(&sy);
        sy_pows.push(next);
    }
    // g = sum_j sx^j * h_j(sy), evaluated from the top x-power down.
    let mut acc = Series2::zero(n);
    for j in (0..=n).rev() {
        acc = acc.mul(&sx);
        for (k, p) in sy_pows.iter().enumerate().take(n - j + 1) {
            let c = &g.coeffs[idx(j, k)];
            if c.is_zero() {
                continue;
            }
            // acc += c * sy^k; sy^k has valuation >= k, skip the vanishing head.
            for d in k..=n {
                for kk in 0..=d {
                    let pc = &p.coeffs[idx(d - kk, kk)];
                    if !pc.is_zero() {
                        acc.coeffs[idx(d - kk, kk)].add_mul(c, pc);
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// Precomputed images `sx^j sy^k` of all monomials up to the truncation
/// order, so that repeated substitutions into the same pair reduce to
/// linear combinations. This is what makes iterating `g ↦ g∘φ - g` cheap.
pub struct Composer<C: Coeff = Rational> {
    order: usize,
    images: Vec<Series2<C>>,
}

impl<C: Coeff> Composer<C> {
    pub fn new(sx: &Series2<C>, sy: &Series2<C>) -> Result<Self> {
        if !sx.constant_term().is_zero() || !sy.constant_term().is_zero() {
            return Err(GermError::IllFormedComposition);
        }
        let n = sx.order.min(sy.order);
        let sx = sx.truncate(n);
        let sy = sy.truncate(n);
        let mut images: Vec<Series2<C>> = vec![Series2::zero(n); tri(n + 1)];
        images[0] = Series2::one(n);
        for d in 1..=n {
            for k in 0..=d {
                let j = d - k;
                images[idx(j, k)] = if k == 0 {
                    images[idx(j - 1, 0)].mul(&sx)
                } else {
                    images[idx(j, k - 1)].mul(&sy)
                };
            }
        }
        Ok(Composer { order: n, images })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `g(sx, sy)` at order `min(Ng, N)`.
    pub fn apply(&self, g: &Series2<C>) -> Series2<C> {
        let n = g.order.min(self.order);
        let mut out = Series2::<C>::zero(n);
        for (j, k, c) in g.terms() {
            if j + k > n {
                break;
            }
            let img = &self.images[idx(j, k)];
            for d in (j + k)..=n {
                for kk in 0..=d {
                    let ic = &img.coeffs[idx(d - kk, kk)];
                    if !ic.is_zero() {
                        out.coeffs[idx(d - kk, kk)].add_mul(c, ic);
                    }
                }
            }
        }
        out
    }
}

impl<C: Coeff> fmt::Debug for Series2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", crate::format::render2(self), self.order + 1)
    }
}

impl<C: Coeff> fmt::Display for Series2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::render2(self))
    }
}
