mod common;

use common::{r, rational, series};
use germ_core::diagnostics::{
    antidiagonal_samples, axis_generator_w1, d_v, d_v_coeff, d_v_formula, growth_report, hilbert_inverse_norm,
    hilbert_matrix, invert_exact, reconstruct_antidiagonal, GrowthClass,
};
use germ_core::{what_series, GermError, Rational, Series2};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn choose(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Closed form of the inverse Hilbert matrix of size `n`.
fn inverse_hilbert(n: i64) -> Vec<Vec<Rational>> {
    (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    let c = choose(i + j - 2, i - 1);
                    let v = BigInt::from(sign * (i + j - 1)) * choose(n + i - 1, n - j) * choose(n + j - 1, n - i) * &c * &c;
                    Rational::from_integer(v)
                })
                .collect()
        })
        .collect()
}

/// `ŵ(0,y)` for `w = 1`: find `v` with `exp(v d/dy)(y) = y + y²` one coefficient at a time.
fn axis_oracle(order: usize) -> Vec<Rational> {
    let top = order + 2;
    let mut v = vec![Rational::zero(); top + 1];
    let flow = |v: &[Rational]| {
        let mut term = vec![Rational::zero(); top + 1];
        term[1] = Rational::one();
        let mut acc = term.clone();
        for j in 1..=top {
            let d: Vec<Rational> = (0..=top).map(|n| if n < top { &term[n + 1] * Rational::from_integer((n as i64 + 1).into()) } else { Rational::zero() }).collect();
            let mut next = vec![Rational::zero(); top + 1];
            for (a, va) in v.iter().enumerate() {
                for (b, db) in d.iter().enumerate() {
                    if a + b <= top && !va.is_zero() {
                        next[a + b] += va * db;
                    }
                }
            }
            term = next.into_iter().map(|c| c / Rational::from_integer((j as i64).into())).collect();
            for (s, t) in acc.iter_mut().zip(&term) {
                *s += t;
            }
        }
        acc
    };
    for n in 2..=top {
        let target = if n == 2 { Rational::one() } else { Rational::zero() };
        let got = flow(&v)[n].clone();
        v[n] += target - got;
    }
    v[2..].to_vec()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn d_v_routes_agree_and_are_bilinear(v1 in series(0, 5, 8), v2 in series(0, 5, 8), h1 in series(0, 5, 8), h2 in series(0, 5, 8), a in rational()) {
        prop_assert_eq!(d_v(&v1, &h1), d_v_formula(&v1, &h1));
        prop_assert_eq!(d_v(&v1, &h1.scale(&a).add(&h2)), d_v(&v1, &h1).scale(&a).add(&d_v(&v1, &h2)));
        prop_assert_eq!(d_v(&v1.scale(&a).add(&v2), &h1), d_v(&v1, &h1).scale(&a).add(&d_v(&v2, &h1)));
    }

    #[test]
    fn coefficients_match_series(v in series(0, 5, 8), h in series(0, 5, 8)) {
        let full = d_v(&v, &h);
        for j in 1..=8 {
            prop_assert_eq!(d_v_coeff(&v, j, &h).unwrap(), full.coeff(j));
        }
    }

    #[test]
    fn antidiagonals_reconstruct(v in series(0, 6, 6)) {
        for k in 0..=6 {
            let got = reconstruct_antidiagonal(&antidiagonal_samples(&v, k).unwrap(), k).unwrap();
            let want: Vec<Rational> = (0..=k).map(|b| v.coeff(k - b, b)).collect();
            prop_assert_eq!(got, want);
        }
    }
}

#[test]
fn d_v_coeff_ranges() {
    let v: Series2 = Series2::one(3);
    assert!(matches!(d_v_coeff(&v, 0, &v), Err(GermError::OutOfRange(_))));
    assert!(matches!(d_v_coeff(&v, 9, &v), Err(GermError::OutOfRange(_))));
}

#[test]
fn exact_inverse_matches_closed_form() {
    for k in 0..=14 {
        assert_eq!(invert_exact(&hilbert_matrix(k)).unwrap(), inverse_hilbert(k as i64 + 1), "k = {k}");
    }
}

#[test]
fn hilbert_norms() {
    let r1 = hilbert_inverse_norm(1, 14).unwrap();
    assert!((r1.inverse_spectral_norm - (8.0 + 2.0 * 13f64.sqrt())).abs() < 1e-9);
    assert_eq!(r1.inverse, vec![vec![r(4, 1), r(-6, 1)], vec![r(-6, 1), r(12, 1)]]);
    assert!(matches!(hilbert_inverse_norm(15, 14), Err(GermError::OutOfRange(_))));
    assert!(matches!(hilbert_inverse_norm(0, 14), Err(GermError::OutOfRange(_))));
}

#[test]
fn axis_generator_against_flow_oracle() {
    let n = 14;
    let fast = axis_generator_w1(n);
    assert_eq!(fast.coeffs().to_vec(), axis_oracle(n));
    assert_eq!(&fast.coeffs()[..3], &[r(1, 1), r(-1, 1), r(3, 2)]);
    let two_var = what_series(&Series2::one(n), n).unwrap();
    assert_eq!(two_var.restrict_x0(), fast);
}

#[test]
fn growth_classes() {
    let fact: Vec<Rational> = (1..=30i64).scan(Rational::one(), |acc, n| {
        *acc *= Rational::from_integer(n.into());
        Some(acc.clone())
    }).collect();
    assert_eq!(growth_report(&fact, 5, 10).classification, GrowthClass::SuperGeometricTrend);
    let geo: Vec<Rational> = (1..=30u32).map(|n| Rational::from_integer(BigInt::from(3).pow(n))).collect();
    assert_eq!(growth_report(&geo, 5, 10).classification, GrowthClass::GeometricBounded);
}
