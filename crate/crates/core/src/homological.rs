//! The homological equation `ε - ε∘φ_{0,w} = y(y-x)Δ` and the functional
//! `S_w(Δ) = ε(x,x) - ε(x,0)`.
//!
//! `log φ_{0,w} = ŵ y(y-x) ∂/∂y`, so every linearized solve reduces to a
//! y-antiderivative against `ŵ`. Solutions are normalized by `ε(x,0) = 0`.
//! `w` and `Δ` are read as exact polynomials.

use crate::coeff::{Coeff, Rational};
use crate::diffeo::{apply_field, log_diffeo, VectorField2};
use crate::error::{GermError, Result};
use crate::germ::phi_from;
use crate::series::Series2;
use crate::series1::Series1;

#[derive(Clone, Debug, PartialEq)]
pub struct HomologicalSolution {
    pub epsilon: Series2,
    /// Order up to which the defining equation holds.
    pub residual_order: usize,
    /// Number of correction rounds until the remainder vanished.
    pub iterations: usize,
}

/// Everything about `φ_{0,w}` the solvers need at a given order: the
/// generator two orders deeper and the series `ŵ`.
#[derive(Clone, Debug)]
pub struct HomologicalContext {
    order: usize,
    w: Series2,
    log: VectorField2,
    what: Series2,
}

impl HomologicalContext {
    pub fn new(w: &Series2, order: usize) -> Result<Self> {
        if w.constant_term().is_zero() {
            return Err(GermError::InvalidSpec("w(0,0) must be nonzero".into()));
        }
        let deep = order + 2;
        let w = w.as_polynomial_to(deep);
        let phi = phi_from(&Series2::zero(deep), &w, deep);
        let log = log_diffeo(&phi)?;
        if !log.ax().is_zero() {
            return Err(GermError::InvariantBreach("log φ_{0,w} has a nonzero x-component".into()));
        }
        let what = log
            .ay()
            .divide_ideal(&Series2::fixed_curve(deep))
            .map_err(|e| GermError::InvariantBreach(format!("log φ_{{0,w}} not divisible: {e}")))?;
        Ok(HomologicalContext { order, w, log, what })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `ŵ` with `log φ_{0,w} = ŵ y(y-x) ∂/∂y`, at order `N`.
    pub fn what(&self) -> &Series2 {
        &self.what
    }

    /// `log φ_{0,w}` at order `N + 2`.
    pub fn generator(&self) -> &VectorField2 {
        &self.log
    }

    /// `L_{0,w} = ŵ ∂/∂y` at order `N`.
    pub fn l_field(&self) -> VectorField2 {
        VectorField2::new(Series2::zero(self.order), self.what.clone())
    }

    /// `Γ = -∫_0^y Δ/ŵ dy`, the solution of `(log φ_{0,w})(Γ) = -y(y-x)Δ`
    /// vanishing on `y = 0`, at order `N + 1`.
    fn antiderivative_solve(&self, delta: &Series2, inv_what: &Series2) -> Series2 {
        delta.mul(inv_what).neg().antiderivative_y()
    }

    fn inv_what(&self) -> Series2 {
        self.what.invert_unit().expect("ŵ(0,0) = w(0,0) is nonzero")
    }

    pub fn solve_difference(&self, delta: &Series2) -> Result<HomologicalSolution> {
        let n = self.order;
        let deep = n + 2;
        let q = Series2::fixed_curve(deep);
        let inv_what = self.inv_what();
        let mut remainder = delta.as_polynomial_to(n);
        let mut epsilon = Series2::zero(n + 1);
        let mut iterations = 0;
        while !remainder.is_zero() {
            if iterations > n {
                return Err(GermError::InvariantBreach(
                    "homological iteration did not terminate within N+1 rounds".into(),
                ));
            }
            iterations += 1;
            epsilon = epsilon.add(&self.antiderivative_solve(&remainder, &inv_what));
            // y(y-x)Δ_{j+1} = Σ_{k≥2} X^{k-1}(-y(y-x)Δ_j) / k!
            let mut term = q.mul_precise(&remainder).neg();
            let mut tail = Series2::zero(deep);
            for k in 2.. {
                term = apply_field(&self.log, &term);
                if term.is_zero() {
                    break;
                }
                term = term.scale(&Rational::new(1.into(), (k as i64).into()));
                tail = tail.add(&term);
            }
            remainder = tail
                .divide_ideal(&q)
                .map_err(|e| GermError::InvariantBreach(format!("correction not divisible: {e}")))?;
        }
        Ok(HomologicalSolution { epsilon: epsilon.truncate(n), residual_order: n, iterations })
    }

    /// `ε - ε∘φ_{0,w} - y(y-x)Δ` at order `N`.
    pub fn residual(&self, epsilon: &Series2, delta: &Series2) -> Series2 {
        let n = self.order.min(epsilon.order());
        let phi = phi_from(&Series2::zero(n), &self.w.truncate(n), n);
        let rhs = Series2::fixed_curve(n).mul(&delta.as_polynomial_to(n));
        epsilon.truncate(n).sub(&phi.pullback(&epsilon.truncate(n))).sub(&rhs)
    }

    pub fn s_w(&self, delta: &Series2) -> Result<Series1> {
        Ok(diagonal_minus_axis(&self.solve_difference(delta)?.epsilon))
    }

    /// `Γ(x,x) - Γ(x,0)` for the solution of `(log φ_{0,w})(Γ) = -y(y-x)Δ`.
    pub fn solve_differential(&self, delta: &Series2) -> Series1 {
        let gamma = self.antiderivative_solve(&delta.as_polynomial_to(self.order), &self.inv_what());
        diagonal_minus_axis(&gamma.truncate(self.order))
    }

    /// `S_w(L_{0,w}[y(y-x)Δ])`, which vanishes identically.
    pub fn check_izs(&self, delta: &Series2) -> Result<Series1> {
        let deep = self.order + 2;
        let lifted = Series2::fixed_curve(deep).mul_precise(&delta.as_polynomial_to(self.order));
        let transformed = apply_field(&self.l_field(), &lifted);
        self.s_w(&transformed)
    }
}

/// `ε(x,x) - ε(x,0)`.
pub fn diagonal_minus_axis<C: Coeff>(epsilon: &Series2<C>) -> Series1<C> {
    epsilon.restrict_diagonal().sub(&epsilon.restrict_y0())
}

/// `ŵ` at order `N`.
pub fn what_series(w: &Series2, order: usize) -> Result<Series2> {
    Ok(HomologicalContext::new(w, order)?.what)
}

pub fn solve_difference(w: &Series2, delta: &Series2, order: usize) -> Result<HomologicalSolution> {
    HomologicalContext::new(w, order)?.solve_difference(delta)
}

pub fn s_w(w: &Series2, delta: &Series2, order: usize) -> Result<Series1> {
    HomologicalContext::new(w, order)?.s_w(delta)
}

pub fn solve_differential(w: &Series2, delta: &Series2, order: usize) -> Result<Series1> {
    Ok(HomologicalContext::new(w, order)?.solve_differential(delta))
}

pub fn check_izs(w: &Series2, delta: &Series2, order: usize) -> Result<Series1> {
    HomologicalContext::new(w, order)?.check_izs(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;

    fn s(terms: &[(usize, usize, i64)], order: usize) -> Series2 {
        Series2::from_terms(terms.iter().map(|&(j, k, c)| (j, k, int(c))), order)
    }

    #[test]
    fn zero_delta() {
        let ctx = HomologicalContext::new(&s(&[(0, 0, 1)], 6), 6).unwrap();
        let sol = ctx.solve_difference(&Series2::zero(6)).unwrap();
        assert!(sol.epsilon.is_zero());
        assert_eq!(sol.iterations, 0);
        assert!(ctx.s_w(&Series2::zero(6)).unwrap().is_zero());
        assert!(ctx.solve_differential(&Series2::zero(6)).is_zero());
        assert!(ctx.check_izs(&Series2::zero(6)).unwrap().is_zero());
    }

    #[test]
    fn residual_vanishes_for_delta_x() {
        let n = 8;
        let ctx = HomologicalContext::new(&s(&[(0, 0, 1)], n), n).unwrap();
        let delta = Series2::x(n);
        let sol = ctx.solve_difference(&delta).unwrap();
        assert!(ctx.residual(&sol.epsilon, &delta).is_zero());
        assert!(sol.iterations <= n + 1);
        assert_eq!(ctx.s_w(&delta).unwrap(), ctx.solve_differential(&delta));
    }

    #[test]
    fn unit_delta_terminates() {
        let n = 6;
        let ctx = HomologicalContext::new(&s(&[(0, 0, 1)], n), n).unwrap();
        let one = Series2::one(n);
        let sol = ctx.solve_difference(&one).unwrap();
        assert!(sol.iterations <= n + 1);
        assert!(ctx.residual(&sol.epsilon, &one).is_zero());
    }

    #[test]
    fn differential_route_cancels_against_what() {
        let n = 7;
        let ctx = HomologicalContext::new(&s(&[(0, 0, 1)], n), n).unwrap();
        let what = ctx.what().clone();
        let mut expected = Series1::zero(n);
        expected = expected.sub(&Series1::x(n));
        assert_eq!(ctx.solve_differential(&what), expected);
    }

    #[test]
    fn izs_examples() {
        let n = 8;
        let one = s(&[(0, 0, 1)], n);
        assert!(check_izs(&one, &one, n).unwrap().is_zero());
        let w = s(&[(0, 0, 1), (1, 0, 1)], n);
        let delta = s(&[(1, 0, 1), (0, 1, 1)], n);
        assert!(check_izs(&w, &delta, n).unwrap().is_zero());
    }

    #[test]
    fn rejects_singular_w() {
        assert!(matches!(what_series(&s(&[(1, 0, 1)], 4), 4), Err(GermError::InvalidSpec(_))));
    }
}
