//! Independent sparse polynomial arithmetic used as a test oracle.
#![allow(dead_code)]

use std::collections::BTreeMap;

use germ_core::{Rational, Series1, Series2};
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Sparse bivariate polynomial truncated at total degree `cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub terms: BTreeMap<(usize, usize), Rational>,
    pub cap: usize,
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

impl Poly {
    pub fn zero(cap: usize) -> Self {
        Poly { terms: BTreeMap::new(), cap }
    }

    pub fn monomial(c: Rational, j: usize, k: usize, cap: usize) -> Self {
        let mut p = Poly::zero(cap);
        p.add_term(j, k, c);
        p
    }

    pub fn from_series(s: &Series2, cap: usize) -> Self {
        let mut p = Poly::zero(cap);
        for (j, k, c) in s.terms() {
            p.add_term(j, k, c.clone());
        }
        p
    }

    pub fn to_series(&self, order: usize) -> Series2 {
        Series2::from_terms(self.terms.iter().filter(|((j, k), _)| j + k <= order).map(|(&(j, k), c)| (j, k, c.clone())), order)
    }

    pub fn add_term(&mut self, j: usize, k: usize, c: Rational) {
        if j + k > self.cap || c.is_zero() {
            return;
        }
        let e = self.terms.entry((j, k)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(j, k));
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (&(j, k), c) in &o.terms {
            p.add_term(j, k, c.clone());
        }
        p
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        let mut p = Poly::zero(self.cap);
        for (&(j, k), c) in &self.terms {
            p.add_term(j, k, c * s);
        }
        p
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero(self.cap.min(o.cap));
        for (&(a, b), c) in &self.terms {
            for (&(d, e), f) in &o.terms {
                p.add_term(a + d, b + e, c * f);
            }
        }
        p
    }

    /// `self(sx, sy)` for `sx, sy` without constant term.
    pub fn compose(&self, sx: &Poly, sy: &Poly) -> Poly {
        let cap = self.cap;
        let mut out = Poly::zero(cap);
        for (&(j, k), c) in &self.terms {
            let mut m = Poly::monomial(c.clone(), 0, 0, cap);
            for _ in 0..j {
                m = m.mul(sx);
            }
            for _ in 0..k {
                m = m.mul(sy);
            }
            out = out.add(&m);
        }
        out
    }

    pub fn coeff(&self, j: usize, k: usize) -> Rational {
        self.terms.get(&(j, k)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn homogeneous(&self, d: usize) -> Poly {
        let mut p = Poly::zero(self.cap);
        for (&(j, k), c) in &self.terms {
            if j + k == d {
                p.add_term(j, k, c.clone());
            }
        }
        p
    }
}

/// `(x + y(y-x)Δ, y + y(y-x)w)` with everything truncated at `cap`.
pub fn phi(delta: &Poly, w: &Poly, cap: usize) -> (Poly, Poly) {
    let q = Poly::monomial(r(1, 1), 0, 2, cap).add(&Poly::monomial(r(-1, 1), 1, 1, cap));
    (Poly::monomial(r(1, 1), 1, 0, cap).add(&q.mul(delta)), Poly::monomial(r(1, 1), 0, 1, cap).add(&q.mul(w)))
}

/// Solves `A c = b` by Gaussian elimination; `None` if inconsistent or not unique.
pub fn solve_unique(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    let mut row = 0;
    for col in 0..n {
        let p = (row..a.len()).find(|&i| !a[i][col].is_zero())?;
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v = &*v * &inv;
        }
        b[row] = &b[row] * &inv;
        for i in 0..a.len() {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pivot_row = a[row].clone();
                for (v, p) in a[i].iter_mut().zip(&pivot_row) {
                    *v -= p * &f;
                }
                let v = &b[row] * &f;
                b[i] -= v;
            }
        }
        row += 1;
    }
    if b[row..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(b[..n].to_vec())
}

/// First integral with `f(x,0) = x`, found degree by degree from the linear
/// equations `f∘φ = f` on the next homogeneous component.
pub fn first_integral_oracle(delta: &Poly, w: &Poly, order: usize) -> Poly {
    let cap = order + 1;
    let (px, py) = phi(delta, w, cap);
    let mut f = Poly::monomial(r(1, 1), 1, 0, cap);
    for d in 2..=order {
        let unknowns: Vec<(usize, usize)> = (1..=d).map(|k| (d - k, k)).collect();
        let base = f.compose(&px, &py).sub(&f).homogeneous(d + 1);
        let cols: Vec<Poly> = unknowns
            .iter()
            .map(|&(j, k)| {
                let m = Poly::monomial(r(1, 1), j, k, cap);
                m.compose(&px, &py).sub(&m).homogeneous(d + 1)
            })
            .collect();
        let rows: Vec<(usize, usize)> = (0..=d + 1).map(|k| (d + 1 - k, k)).collect();
        let a = rows.iter().map(|&(j, k)| cols.iter().map(|c| c.coeff(j, k)).collect()).collect();
        let b = rows.iter().map(|&(j, k)| -base.coeff(j, k)).collect();
        let sol = solve_unique(a, b).expect("degree step has a unique solution");
        for (&(j, k), c) in unknowns.iter().zip(sol) {
            f.add_term(j, k, c);
        }
    }
    f
}

/// One-variable composition `f(g)` truncated at the order of `g`.
pub fn compose1(f: &Series1, g: &Series1) -> Vec<Rational> {
    let n = g.order();
    let mut out = vec![Rational::zero(); n + 1];
    let mut power = vec![Rational::zero(); n + 1];
    power[0] = Rational::one();
    for (i, c) in f.coeffs().iter().enumerate().take(n + 1) {
        if i > 0 {
            let mut next = vec![Rational::zero(); n + 1];
            for (a, pa) in power.iter().enumerate() {
                for (b, gb) in g.coeffs().iter().enumerate() {
                    if a + b <= n {
                        next[a + b] += pa * gb;
                    }
                }
            }
            power = next;
        }
        for (o, p) in out.iter_mut().zip(&power) {
            *o += c * p;
        }
    }
    out
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| r(n, d))
}

/// Polynomial with terms of total degree in `lo..=hi`, stored at `order`.
pub fn series(lo: usize, hi: usize, order: usize) -> impl Strategy<Value = Series2> {
    let slots: Vec<(usize, usize)> = (lo..=hi.min(order)).flat_map(|d| (0..=d).map(move |k| (d - k, k))).collect();
    let len = slots.len();
    proptest::collection::vec(prop_oneof![Just(r(0, 1)), rational()], len)
        .prop_map(move |cs| Series2::from_terms(slots.iter().zip(cs).map(|(&(j, k), c)| (j, k, c)), order))
}
