//! The operator `D_v(H) = ε(x,x) - ε(x,0)` with `∂ε/∂y = vH`, `ε(x,0) = 0`.

use num_traits::Zero;

use crate::coeff::Rational;
use crate::error::{GermError, Result};
use crate::homological::diagonal_minus_axis;
use crate::series::Series2;
use crate::series1::Series1;

/// `D_v(H)` through the y-antiderivative of `vH`, at order `min(Nv, NH) + 1`.
pub fn d_v(v: &Series2, h: &Series2) -> Series1 {
    diagonal_minus_axis(&v.mul(h).antiderivative_y())
}

/// `D_v(H)` from the explicit sum `Σ v_{a,b} H_{k,l} / (b+l+1) x^{a+k+b+l+1}`.
pub fn d_v_formula(v: &Series2, h: &Series2) -> Series1 {
    let n = v.order().min(h.order()) + 1;
    let mut out = vec![Rational::zero(); n + 1];
    for (a, b, cv) in v.terms() {
        for (k, l, ch) in h.terms() {
            let e = a + k + b + l + 1;
            if e <= n {
                out[e] += cv * ch / Rational::from_integer((b + l + 1).into());
            }
        }
    }
    Series1::from_coeffs(out)
}

/// `D_v^j(H)`, the coefficient of `x^j` in `D_v(H)`, by the finite sum over
/// `k + l < j`.
///
/// Needs `H` to degree `j - 1` and `v` to degree `j - 1 - ν(H)`.
pub fn d_v_coeff(v: &Series2, j: usize, h: &Series2) -> Result<Rational> {
    if j == 0 {
        return Err(GermError::OutOfRange("D_v^j is defined for j >= 1".into()));
    }
    let top = j - 1;
    if h.order() < top {
        return Err(GermError::OutOfRange(format!("H known to order {}, need {top}", h.order())));
    }
    if let Some(val) = h.krull_valuation().filter(|&val| val <= top) {
        if v.order() + val < top {
            return Err(GermError::OutOfRange(format!("v known to order {}, need {}", v.order(), top - val)));
        }
    }
    let mut acc = Rational::zero();
    for (k, l, ch) in h.terms() {
        if k + l > top {
            break;
        }
        let d = top - k - l;
        for b in 0..=d {
            let cv = v.coeff(d - b, b);
            if !cv.is_zero() {
                acc += ch * cv / Rational::from_integer((b + l + 1).into());
            }
        }
    }
    Ok(acc)
}

/// The samples `D_v^{k+r}(y^{r-1})`, `r = 1..=k+1`, which determine the
/// antidiagonal `(v_{k,0}, ..., v_{0,k})` through the Hilbert matrix.
pub fn antidiagonal_samples(v: &Series2, k: usize) -> Result<Vec<Rational>> {
    (1..=k + 1)
        .map(|r| {
            let h = Series2::monomial(crate::coeff::int(1), 0, r - 1, k + r - 1);
            d_v_coeff(v, k + r, &h)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    fn s(terms: &[(usize, usize, i64)], order: usize) -> Series2 {
        Series2::from_terms(terms.iter().map(|&(j, k, c)| (j, k, int(c))), order)
    }

    #[test]
    fn d_v_examples() {
        let n = 5;
        assert_eq!(d_v(&Series2::one(n), &Series2::one(n)), Series1::x(n + 1));
        let half_sq = d_v(&Series2::y(n), &Series2::one(n));
        assert_eq!(half_sq.coeff(2), rat(1, 2));
        assert_eq!(half_sq.coeffs().iter().filter(|c| !c.is_zero()).count(), 1);
        let v = s(&[(1, 0, 1), (0, 2, 1)], n);
        let h = s(&[(0, 0, 1), (1, 0, -1)], n);
        assert_eq!(d_v(&v, &h), d_v_formula(&v, &h));
    }

    #[test]
    fn d_v_coeff_examples() {
        let n = 6;
        assert_eq!(d_v_coeff(&Series2::one(n), 1, &Series2::one(n)).unwrap(), int(1));
        assert_eq!(d_v_coeff(&Series2::y(n), 3, &Series2::y(n)).unwrap(), rat(1, 3));
        assert!(d_v_coeff(&Series2::y(n), 0, &Series2::y(n)).is_err());
        assert!(d_v_coeff(&Series2::y(n), 9, &Series2::y(n)).is_err());
        // D_v^{k+r}(y^{r-1}) = Σ_b v_{k-b,b} / (b+r)
        let v = s(&[(2, 0, 3), (1, 1, -2), (0, 2, 5)], n);
        let (k, r) = (2usize, 3usize);
        let expected: Rational = (0..=k).map(|b| v.coeff(k - b, b) / int((b + r) as i64)).sum();
        let h = Series2::monomial(int(1), 0, r - 1, n);
        assert_eq!(d_v_coeff(&v, k + r, &h).unwrap(), expected);
        let full = d_v(&v, &h);
        assert_eq!(full.coeff(k + r), expected);
    }
}
