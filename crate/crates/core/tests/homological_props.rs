mod common;

use common::{r, rational, series, Poly};
use germ_core::homological::HomologicalContext;
use germ_core::{diagonal_minus_axis, epsilon_from_family, parametric_first_integral, GermSpec, Series1, Series2};
use proptest::prelude::*;

const N: usize = 6;

fn w_strategy() -> impl Strategy<Value = Series2> {
    (series(1, 2, N), rational()).prop_filter_map("w(0,0) = 0", |(mut w, c)| {
        (c != r(0, 1)).then(|| {
            w.set(0, 0, c);
            w
        })
    })
}

/// `ε - ε∘φ_{0,w} - y(y-x)Δ` in oracle arithmetic.
fn oracle_residual(w: &Series2, eps: &Series2, delta: &Series2) -> Series2 {
    let cap = N;
    let (px, py) = common::phi(&Poly::zero(cap), &Poly::from_series(w, cap), cap);
    let e = Poly::from_series(eps, cap);
    let q = Poly::monomial(r(1, 1), 0, 2, cap).add(&Poly::monomial(r(-1, 1), 1, 1, cap));
    e.sub(&e.compose(&px, &py)).sub(&q.mul(&Poly::from_series(delta, cap))).to_series(N)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn difference_solution_checks_out(w in w_strategy(), delta in series(0, 3, N)) {
        let ctx = HomologicalContext::new(&w, N).unwrap();
        let sol = ctx.solve_difference(&delta).unwrap();
        prop_assert!(sol.iterations <= N + 1);
        prop_assert!(oracle_residual(&w, &sol.epsilon, &delta).is_zero());
        prop_assert!(sol.epsilon.restrict_y0().is_zero());
        prop_assert_eq!(diagonal_minus_axis(&sol.epsilon), ctx.solve_differential(&delta));
    }

    #[test]
    fn izs_vanishes(w in w_strategy(), delta in series(0, 3, N)) {
        let ctx = HomologicalContext::new(&w, N).unwrap();
        prop_assert!(ctx.check_izs(&delta).unwrap().is_zero());
    }

    #[test]
    fn s_w_is_linear(w in w_strategy(), d1 in series(0, 3, N), d2 in series(0, 3, N), a in rational()) {
        let ctx = HomologicalContext::new(&w, N).unwrap();
        let lhs = ctx.s_w(&d1.scale(&a).add(&d2)).unwrap();
        prop_assert_eq!(lhs, ctx.s_w(&d1).unwrap().scale(&a).add(&ctx.s_w(&d2).unwrap()));
    }

    #[test]
    fn family_derivative_solves_the_equation(w in w_strategy(), delta in series(1, 3, N)) {
        let spec = GermSpec::new(delta.clone(), w.clone(), N).unwrap();
        let eps = epsilon_from_family(&parametric_first_integral(&spec).unwrap());
        prop_assert!(oracle_residual(&w, &eps, &delta).is_zero());
        let ctx = HomologicalContext::new(&w, N).unwrap();
        prop_assert_eq!(diagonal_minus_axis(&eps), ctx.s_w(&delta).unwrap());
    }
}

#[test]
fn x_component_of_flat_generator_vanishes() {
    let w = Series2::one(N).add(&Series2::x(N));
    let ctx = HomologicalContext::new(&w, N).unwrap();
    assert!(ctx.generator().ax().is_zero());
    assert_eq!(ctx.what().coeff(0, 0), r(1, 1));
}

#[test]
fn s_w_of_what_is_minus_x() {
    // Δ = ŵ gives Γ = -y, so Γ(x,x) - Γ(x,0) = -x.
    let ctx = HomologicalContext::new(&Series2::one(N), N).unwrap();
    let what = ctx.what().clone();
    assert_eq!(ctx.solve_differential(&what), Series1::x(N).neg());
}
