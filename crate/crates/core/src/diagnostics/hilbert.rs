//! Hilbert matrices: exact inversion, antidiagonal reconstruction and the
//! spectral norm of the inverse against its asymptotic growth.

use num_traits::{One, Zero};

use crate::coeff::{rational_to_f64, Rational};
use crate::error::{GermError, Result};

pub type Matrix = Vec<Vec<Rational>>;

pub const DEFAULT_MAX_K: usize = 14;

/// `Hilb^k`, the `(k+1) × (k+1)` matrix with entries `1/(a+b-1)`.
pub fn hilbert_matrix(k: usize) -> Matrix {
    (1..=k + 1)
        .map(|a| (1..=k + 1).map(|b| Rational::new(1.into(), ((a + b - 1) as i64).into())).collect())
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// Gauss-Jordan elimination of `[a | rhs]` over the rationals.
fn gauss_jordan(a: &Matrix, rhs: &Matrix) -> Result<Matrix> {
    let n = a.len();
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().chain(b).cloned().collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !rows[r][col].is_zero()).ok_or(GermError::SingularMatrix)?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
    }
    Ok(rows.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn invert_exact(a: &Matrix) -> Result<Matrix> {
    gauss_jordan(a, &identity(a.len()))
}

pub fn solve_exact(a: &Matrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let rhs: Matrix = b.iter().map(|x| vec![x.clone()]).collect();
    Ok(gauss_jordan(a, &rhs)?.into_iter().map(|mut r| r.remove(0)).collect())
}

/// Recovers `(v_{k,0}, v_{k-1,1}, ..., v_{0,k})` from the samples
/// `D_v^{k+r}(y^{r-1})`, `r = 1..=k+1`.
pub fn reconstruct_antidiagonal(samples: &[Rational], k: usize) -> Result<Vec<Rational>> {
    if samples.len() != k + 1 {
        return Err(GermError::OutOfRange(format!("expected {} samples, got {}", k + 1, samples.len())));
    }
    solve_exact(&hilbert_matrix(k), samples).map_err(|_| GermError::InvariantBreach("Hilbert matrix reported singular".into()))
}

/// Largest eigenvalue of a symmetric positive definite matrix by power
/// iteration, refined by the Rayleigh quotient.
pub fn spd_spectral_norm(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut v: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } * (1.0 + i as f64 / n as f64)).collect();
    let apply = |v: &[f64]| -> Vec<f64> { m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect() };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut estimate = 0.0;
    for _ in 0..10_000 {
        let s = norm(&v);
        v.iter_mut().for_each(|x| *x /= s);
        let w = apply(&v);
        let rayleigh: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let converged = (rayleigh - estimate).abs() <= 1e-15 * rayleigh.abs();
        estimate = rayleigh;
        v = w;
        if converged {
            break;
        }
    }
    estimate
}

/// `ρ = 1 + √2`.
pub fn rho() -> f64 {
    1.0 + 2f64.sqrt()
}

/// `K = 8 π^{3/2} 2^{3/4} / ρ^4`.
pub fn k_constant() -> f64 {
    8.0 * std::f64::consts::PI.powf(1.5) * 2f64.powf(0.75) / rho().powi(4)
}

/// `ρ^{4k} / (K √k)`.
pub fn asymptotic_prediction(k: usize) -> f64 {
    rho().powi(4 * k as i32) / (k_constant() * (k as f64).sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct HilbertReport {
    pub k: usize,
    pub inverse: Matrix,
    pub inverse_spectral_norm: f64,
    pub asymptotic_prediction: f64,
    pub ratio: f64,
}

/// `||(Hilb^k)^{-1}||_2`; `k = 0` gives 1.
pub fn inverse_spectral_norm(k: usize) -> Result<(Matrix, f64)> {
    let inverse = invert_exact(&hilbert_matrix(k))?;
    let floats: Vec<Vec<f64>> = inverse.iter().map(|r| r.iter().map(rational_to_f64).collect()).collect();
    Ok((inverse, spd_spectral_norm(&floats)))
}

pub fn hilbert_inverse_norm(k: usize, max_k: usize) -> Result<HilbertReport> {
    if k == 0 || k > max_k {
        return Err(GermError::OutOfRange(format!("k must lie in 1..={max_k}, got {k}")));
    }
    let (inverse, norm) = inverse_spectral_norm(k)?;
    let prediction = asymptotic_prediction(k);
    Ok(HilbertReport { k, inverse, inverse_spectral_norm: norm, asymptotic_prediction: prediction, ratio: norm / prediction })
}
