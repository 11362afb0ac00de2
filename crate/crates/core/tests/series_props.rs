mod common;

use common::{r, rational, series, Poly};
use germ_core::format::{parse_series2, render2};
use germ_core::{compose2, GermError, Series1, Series2, Var};
use proptest::prelude::*;

const N: usize = 6;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in series(0, N, N), b in series(0, N, N), c in series(0, N, N)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&Series2::one(N)), a.clone());
        prop_assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn product_matches_oracle(a in series(0, N, N), b in series(0, N, N)) {
        let want = Poly::from_series(&a, N).mul(&Poly::from_series(&b, N));
        prop_assert_eq!(a.mul(&b), want.to_series(N));
    }

    #[test]
    fn unit_inverse(a in series(1, N, N), c in rational()) {
        prop_assume!(c != r(0, 1));
        let mut u = a;
        u.set(0, 0, c);
        let inv = u.invert_unit().unwrap();
        prop_assert_eq!(u.mul(&inv), Series2::one(N));
    }

    #[test]
    fn non_unit_has_no_inverse(a in series(1, N, N)) {
        prop_assert!(matches!(a.invert_unit(), Err(GermError::NonUnit)));
    }

    #[test]
    fn ideal_division_round_trip(b in series(0, N, N)) {
        let q = Series2::fixed_curve(N + 2);
        let prod = q.mul_precise(&b);
        let back = prod.divide_ideal(&q).unwrap();
        prop_assert_eq!(back.truncate(N), b);
    }

    #[test]
    fn valuation_is_additive(a in series(0, N, 2 * N), b in series(0, N, 2 * N)) {
        if let (Some(va), Some(vb)) = (a.krull_valuation(), b.krull_valuation()) {
            prop_assert_eq!(a.mul(&b).krull_valuation(), Some(va + vb));
        }
    }

    #[test]
    fn composition_is_associative(
        g in series(0, N, N),
        s1 in series(1, N, N), s2 in series(1, N, N),
        t1 in series(1, N, N), t2 in series(1, N, N),
    ) {
        let inner = (compose2(&s1, &t1, &t2).unwrap(), compose2(&s2, &t1, &t2).unwrap());
        let left = compose2(&g, &inner.0, &inner.1).unwrap();
        let right = compose2(&compose2(&g, &s1, &s2).unwrap(), &t1, &t2).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn composition_matches_oracle(g in series(0, N, N), s1 in series(1, N, N), s2 in series(1, N, N)) {
        let want = Poly::from_series(&g, N).compose(&Poly::from_series(&s1, N), &Poly::from_series(&s2, N));
        prop_assert_eq!(compose2(&g, &s1, &s2).unwrap(), want.to_series(N));
    }

    #[test]
    fn product_rule(a in series(0, N, N), b in series(0, N, N)) {
        for var in [Var::X, Var::Y] {
            let lhs = a.mul(&b).partial(var);
            let rhs = a.partial(var).mul(&b).add(&a.mul(&b.partial(var)));
            prop_assert_eq!(lhs.truncate(N - 1), rhs.truncate(N - 1));
        }
    }

    #[test]
    fn antiderivative_inverts_partial_y(a in series(0, N, N)) {
        let back = a.antiderivative_y().partial(Var::Y);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn reversion(cs in proptest::collection::vec(rational(), N - 1), lead in rational()) {
        prop_assume!(lead != r(0, 1));
        let mut coeffs = vec![r(0, 1), lead];
        coeffs.extend(cs);
        let f = Series1::from_coeffs(coeffs);
        let g = f.revert().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), Series1::x(N));
        prop_assert_eq!(g.compose(&f).unwrap(), Series1::x(N));
        prop_assert_eq!(common::compose1(&f, &g), Series1::x(N).coeffs().to_vec());
    }

    #[test]
    fn text_round_trip(a in series(0, N, N)) {
        let text = render2(&a);
        prop_assert_eq!(parse_series2::<germ_core::Rational>(&text, N).unwrap(), a);
    }

    #[test]
    fn restrictions_commute_with_products(a in series(0, N, N), b in series(0, N, N)) {
        prop_assert_eq!(a.mul(&b).restrict_diagonal(), a.restrict_diagonal().mul(&b.restrict_diagonal()));
        prop_assert_eq!(a.mul(&b).restrict_y0(), a.restrict_y0().mul(&b.restrict_y0()));
    }
}

#[test]
fn non_divisible_reports_failure() {
    let q: Series2 = Series2::fixed_curve(6);
    assert!(matches!(Series2::x(6).divide_ideal(&q), Err(GermError::NotDivisible { .. })));
}

#[test]
fn reversion_requires_tangent_term() {
    let f = Series1::from_coeffs(vec![r(0, 1), r(0, 1), r(1, 1)]);
    assert!(matches!(f.revert(), Err(GermError::NotReversible { .. })));
}

#[test]
fn composition_rejects_constant_terms() {
    let one: Series2 = Series2::one(3);
    assert!(matches!(compose2(&Series2::x(3), &one, &Series2::y(3)), Err(GermError::IllFormedComposition)));
}
