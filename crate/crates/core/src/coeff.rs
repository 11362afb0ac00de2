//! Coefficient rings: exact rationals and dense polynomials in a parameter λ.

use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a log-scale estimate for magnitudes beyond f64 range.
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        let bits = r.numer().bits() as f64 - r.denom().bits() as f64;
        sign * 2f64.powf(bits)
    })
}

/// Operations a series coefficient must support.
///
/// Implemented for [`Rational`] and [`LambdaPoly`]; every algorithm in the
/// crate is generic over this trait so that the λ-parametric family runs
/// through exactly the same code as the numeric one.
pub trait Coeff: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(r: Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// Multiplicative inverse, when it exists in the ring.
    fn inverse(&self) -> Option<Self>;
    /// The value as a rational, when it is a constant.
    fn to_rational(&self) -> Option<Rational>;
    /// Conversion from a λ-polynomial, when representable.
    fn from_lambda_poly(p: &LambdaPoly) -> Option<Self>;
    fn to_lambda_poly(&self) -> LambdaPoly;

    fn add_assign(&mut self, other: &Self) {
        *self = Coeff::add(self, other);
    }

    fn sub_assign(&mut self, other: &Self) {
        *self = Coeff::sub(self, other);
    }

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = Coeff::add(self, &Coeff::mul(a, b));
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn from_lambda_poly(p: &LambdaPoly) -> Option<Self> {
        match p.degree() {
            None => Some(Zero::zero()),
            Some(0) => Some(p.coeff(0)),
            Some(_) => None,
        }
    }

    fn to_lambda_poly(&self) -> LambdaPoly {
        LambdaPoly::constant(self.clone())
    }

    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    fn sub_assign(&mut self, other: &Self) {
        *self -= other;
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        if Zero::is_zero(a) || Zero::is_zero(b) {
            return;
        }
        *self += a * b;
    }
}

/// Dense univariate polynomial in λ with rational coefficients.
///
/// `coeffs[i]` is the coefficient of λ^i; trailing zeros are never stored,
/// so the zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LambdaPoly {
    coeffs: Vec<Rational>,
}

impl LambdaPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        LambdaPoly { coeffs }
    }

    pub fn constant(r: Rational) -> Self {
        Self::new(vec![r])
    }

    /// The polynomial `λ`.
    pub fn lambda() -> Self {
        Self::new(vec![Zero::zero(), One::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of λ^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Zero::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc: Rational = Zero::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }
}

impl Debug for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, One::is_one(&mag)) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "lambda")?,
                (1, false) => write!(f, "{mag}*lambda")?,
                (_, true) => write!(f, "lambda^{i}")?,
                (_, false) => write!(f, "{mag}*lambda^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Coeff for LambdaPoly {
    fn zero() -> Self {
        LambdaPoly { coeffs: Vec::new() }
    }

    fn one() -> Self {
        Self::constant(One::one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn from_rational(r: Rational) -> Self {
        Self::constant(r)
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        Coeff::add_assign(&mut out, other);
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        Coeff::sub_assign(&mut out, other);
        out
    }

    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![<Rational as Zero>::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !Zero::is_zero(b) {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out)
    }

    fn neg(&self) -> Self {
        LambdaPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn scale(&self, r: &Rational) -> Self {
        if Zero::is_zero(r) {
            return Self::zero();
        }
        LambdaPoly {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    fn inverse(&self) -> Option<Self> {
        // Only nonzero constants are units of Q[λ].
        match self.coeffs.as_slice() {
            [c] => Some(Self::constant(c.recip())),
            _ => None,
        }
    }

    fn to_rational(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Zero::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn from_lambda_poly(p: &LambdaPoly) -> Option<Self> {
        Some(p.clone())
    }

    fn to_lambda_poly(&self) -> LambdaPoly {
        self.clone()
    }

    fn add_assign(&mut self, other: &Self) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Zero::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        self.normalize();
    }

    fn sub_assign(&mut self, other: &Self) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Zero::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        self.normalize();
    }

    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return;
        }
        let len = a.coeffs.len() + b.coeffs.len() - 1;
        if self.coeffs.len() < len {
            self.coeffs.resize(len, Zero::zero());
        }
        for (i, x) in a.coeffs.iter().enumerate() {
            if Zero::is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !Zero::is_zero(y) {
                    self.coeffs[i + j] += x * y;
                }
            }
        }
        self.normalize();
    }
}

impl LambdaPoly {
    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced() {
        let r = rat(6, -4);
        assert_eq!(r, rat(-3, 2));
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn poly_has_canonical_degree() {
        let p = LambdaPoly::new(vec![int(1), int(2), int(0), int(0)]);
        assert_eq!(p.degree(), Some(1));
        let q = Coeff::sub(&p, &p);
        assert_eq!(q.degree(), None);
        assert!(q.coeffs().is_empty());
    }

    #[test]
    fn poly_arithmetic() {
        let l = LambdaPoly::lambda();
        let one = <LambdaPoly as Coeff>::one();
        let p = Coeff::add(&one, &l); // 1 + λ
        let sq = Coeff::mul(&p, &p);
        assert_eq!(sq, LambdaPoly::new(vec![int(1), int(2), int(1)]));
        assert_eq!(sq.eval(&rat(1, 2)), rat(9, 4));
        assert!(p.inverse().is_none());
        assert_eq!(LambdaPoly::constant(int(4)).inverse(), Some(LambdaPoly::constant(rat(1, 4))));
        assert_eq!(format!("{}", Coeff::neg(&sq)), "-1 - 2*lambda - lambda^2");
    }

    #[test]
    fn huge_rationals_convert_to_finite_floats_when_possible() {
        assert_eq!(rational_to_f64(&rat(-3, 4)), -0.75);
    }
}
