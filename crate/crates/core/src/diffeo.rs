//! Formal diffeomorphisms and vector fields of the plane, and the exp/log
//! correspondence between unipotent diffeomorphisms and nilpotent fields.

use crate::coeff::{Coeff, LambdaPoly, Rational};
use crate::error::{GermError, Result};
use crate::series::{compose2, mul_to, Composer, Series2, Var};

/// A formal diffeomorphism `φ`, stored as the images `(x∘φ, y∘φ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Diffeo2<C: Coeff = Rational> {
    sx: Series2<C>,
    sy: Series2<C>,
}

impl<C: Coeff> Diffeo2<C> {
    /// Both components are truncated to the smaller of their orders.
    pub fn new(sx: Series2<C>, sy: Series2<C>) -> Result<Self> {
        if !sx.constant_term().is_zero() || !sy.constant_term().is_zero() {
            return Err(GermError::IllFormedComposition);
        }
        let n = sx.order().min(sy.order());
        let d = Diffeo2 { sx: sx.truncate(n), sy: sy.truncate(n) };
        if n >= 1 {
            let [[a, b], [c, e]] = d.linear_part();
            if a.mul(&e).sub(&b.mul(&c)).inverse().is_none() {
                return Err(GermError::InvalidSpec("linear part is not invertible".into()));
            }
        }
        Ok(d)
    }

    pub fn identity(order: usize) -> Self {
        Diffeo2 { sx: Series2::x(order), sy: Series2::y(order) }
    }

    pub fn order(&self) -> usize {
        self.sx.order()
    }

    pub fn sx(&self) -> &Series2<C> {
        &self.sx
    }

    pub fn sy(&self) -> &Series2<C> {
        &self.sy
    }

    /// `[[∂x(sx), ∂y(sx)], [∂x(sy), ∂y(sy)]]` at the origin.
    pub fn linear_part(&self) -> [[C; 2]; 2] {
        [
            [self.sx.coeff(1, 0), self.sx.coeff(0, 1)],
            [self.sy.coeff(1, 0), self.sy.coeff(0, 1)],
        ]
    }

    /// `j¹φ = Id`.
    pub fn is_tangent_to_identity(&self) -> bool {
        let [[a, b], [c, d]] = self.linear_part();
        (self.order() == 0) || (a.is_one() && b.is_zero() && c.is_zero() && d.is_one())
    }

    /// `g∘φ`.
    pub fn pullback(&self, g: &Series2<C>) -> Series2<C> {
        compose2(g, &self.sx, &self.sy).expect("components have no constant term")
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        Diffeo2 { sx: inner.pullback(&self.sx), sy: inner.pullback(&self.sy) }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Diffeo2 { sx: self.sx.truncate(order), sy: self.sy.truncate(order) }
    }

    pub(crate) fn composer(&self) -> Composer<C> {
        Composer::new(&self.sx, &self.sy).expect("components have no constant term")
    }
}

impl Diffeo2<LambdaPoly> {
    pub fn eval_lambda(&self, at: &Rational) -> Diffeo2<Rational> {
        Diffeo2 { sx: self.sx.eval_lambda(at), sy: self.sy.eval_lambda(at) }
    }
}

/// A formal vector field `ax ∂/∂x + ay ∂/∂y`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField2<C: Coeff = Rational> {
    ax: Series2<C>,
    ay: Series2<C>,
}

impl<C: Coeff> VectorField2<C> {
    /// Both components are truncated to the smaller of their orders.
    pub fn new(ax: Series2<C>, ay: Series2<C>) -> Self {
        let n = ax.order().min(ay.order());
        VectorField2 { ax: ax.truncate(n), ay: ay.truncate(n) }
    }

    pub fn zero(order: usize) -> Self {
        VectorField2 { ax: Series2::zero(order), ay: Series2::zero(order) }
    }

    pub fn order(&self) -> usize {
        self.ax.order()
    }

    pub fn ax(&self) -> &Series2<C> {
        &self.ax
    }

    pub fn ay(&self) -> &Series2<C> {
        &self.ay
    }

    /// Least valuation of the two components; `None` for the zero field.
    pub fn valuation(&self) -> Option<usize> {
        match (self.ax.krull_valuation(), self.ay.krull_valuation()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Both components vanish to order 2 at the origin.
    pub fn is_nilpotent(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 2)
    }

    pub fn truncate(&self, order: usize) -> Self {
        VectorField2 { ax: self.ax.truncate(order), ay: self.ay.truncate(order) }
    }

    pub fn map_components(&self, f: impl Fn(&Series2<C>) -> Result<Series2<C>>) -> Result<Self> {
        Ok(VectorField2::new(f(&self.ax)?, f(&self.ay)?))
    }

    pub fn apply(&self, g: &Series2<C>) -> Series2<C> {
        apply_field(self, g)
    }
}

impl VectorField2<LambdaPoly> {
    pub fn eval_lambda(&self, at: &Rational) -> VectorField2<Rational> {
        VectorField2 { ax: self.ax.eval_lambda(at), ay: self.ay.eval_lambda(at) }
    }
}

/// `X(g) = ax ∂g/∂x + ay ∂g/∂y`.
///
/// The result is known to order `min(N_X, N_g - 1 + v)` where `v` is the
/// valuation of `X`, so nilpotent fields lose no precision.
pub fn apply_field<C: Coeff>(field: &VectorField2<C>, g: &Series2<C>) -> Series2<C> {
    let n_x = field.order();
    let Some(v) = field.valuation() else {
        return Series2::zero(n_x);
    };
    if g.order() == 0 {
        return Series2::zero(n_x.min(v.saturating_sub(1)));
    }
    let order = n_x.min(g.order() - 1 + v);
    let gx = g.partial(Var::X);
    let gy = g.partial(Var::Y);
    mul_to(&field.ax, &gx, order).add(&mul_to(&field.ay, &gy, order))
}

/// `Θ(g) = g∘φ - g`.
pub fn theta_apply<C: Coeff>(phi: &Diffeo2<C>, g: &Series2<C>) -> Series2<C> {
    phi.pullback(g).sub(g)
}

/// Infinitesimal generator `log φ = Σ_{j≥1} (-1)^{j+1} Θ^j / j` of a
/// diffeomorphism tangent to the identity, at the order of `φ`.
pub fn log_diffeo<C: Coeff>(phi: &Diffeo2<C>) -> Result<VectorField2<C>> {
    if !phi.is_tangent_to_identity() {
        return Err(GermError::NotUnipotent);
    }
    let n = phi.order();
    let composer = phi.composer();
    let component = |g: Series2<C>| {
        let mut acc = Series2::zero(n);
        let mut iterate = g;
        for j in 1.. {
            iterate = composer.apply(&iterate).sub(&iterate);
            if iterate.is_zero() {
                break;
            }
            let w = Rational::new(if j % 2 == 1 { 1 } else { -1 }.into(), (j as i64).into());
            acc = acc.add(&iterate.scale(&w));
        }
        acc
    };
    Ok(VectorField2::new(component(Series2::x(n)), component(Series2::y(n))))
}

/// `Σ_j X^j(g)/j!`, computed until the iterates vanish to the truncation order.
pub fn exp_apply<C: Coeff>(field: &VectorField2<C>, g: &Series2<C>) -> Result<Series2<C>> {
    if !field.is_nilpotent() {
        return Err(GermError::NotNilpotent);
    }
    let mut acc = g.truncate(g.order().min(field.order()));
    let mut iterate = acc.clone();
    for j in 1.. {
        iterate = field.apply(&iterate).scale(&Rational::new(1.into(), (j as i64).into()));
        if iterate.is_zero() {
            break;
        }
        acc = acc.add(&iterate);
    }
    Ok(acc)
}

/// The time-one map `exp(X)` as a diffeomorphism.
pub fn exp_diffeo<C: Coeff>(field: &VectorField2<C>) -> Result<Diffeo2<C>> {
    let n = field.order();
    Diffeo2::new(exp_apply(field, &Series2::x(n))?, exp_apply(field, &Series2::y(n))?)
}

/// `exp(tX)(g) = Σ_j t^j X^j(g)/j!` with the time `t` carried as the λ
/// variable of [`LambdaPoly`] coefficients.
pub fn flow_poly_t(field: &VectorField2<Rational>, g: &Series2<Rational>) -> Result<Series2<LambdaPoly>> {
    if !field.is_nilpotent() {
        return Err(GermError::NotNilpotent);
    }
    let n = g.order().min(field.order());
    let mut acc = Series2::<LambdaPoly>::from_rational(&g.truncate(n));
    let mut iterate = g.truncate(n);
    let mut t_pow = LambdaPoly::one();
    for j in 1.. {
        iterate = field.apply(&iterate).scale(&Rational::new(1.into(), (j as i64).into()));
        if iterate.is_zero() {
            break;
        }
        t_pow = t_pow.mul(&LambdaPoly::lambda());
        acc = acc.add(&iterate.map(|c| t_pow.scale(c)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};
    use crate::series1::Series1;

    fn poly(terms: &[(usize, usize, i64, i64)], order: usize) -> Series2 {
        Series2::from_terms(terms.iter().map(|&(j, k, p, q)| (j, k, rat(p, q))), order)
    }

    /// `φ_{0,1} = (x, y + y(y - x))`.
    fn phi01(n: usize) -> Diffeo2 {
        Diffeo2::new(Series2::x(n), poly(&[(0, 1, 1, 1), (0, 2, 1, 1), (1, 1, -1, 1)], n)).unwrap()
    }

    #[test]
    fn theta_examples() {
        let n = 6;
        assert!(theta_apply(&phi01(n), &Series2::x(n)).is_zero());
        let g = poly(&[(2, 1, 3, 1), (0, 1, 1, 1)], n);
        assert!(theta_apply(&Diffeo2::identity(n), &g).is_zero());
        assert_eq!(theta_apply(&phi01(n), &Series2::y(n)), Series2::fixed_curve(n));
    }

    #[test]
    fn log_of_identity_is_zero() {
        assert_eq!(log_diffeo(&Diffeo2::<Rational>::identity(7)).unwrap(), VectorField2::zero(7));
    }

    #[test]
    fn log_rejects_non_tangent_maps() {
        let d = Diffeo2::new(Series2::<Rational>::x(4).scale(&int(2)), Series2::y(4)).unwrap();
        assert_eq!(log_diffeo(&d), Err(GermError::NotUnipotent));
    }

    #[test]
    fn log_phi01_on_the_axis() {
        // Oracle: the generator v(y) d/dy of y -> y + y^2 satisfies
        // exp(v d/dy)(y) = y + y^2; solve for v order by order in one variable.
        let n = 8;
        let v = one_variable_generator(n);
        let x = log_diffeo(&phi01(n)).unwrap();
        assert!(x.ax().is_zero());
        assert_eq!(x.ay().restrict_x0(), v);
        assert_eq!(v.coeffs()[2..5], [int(1), int(-1), rat(3, 2)]);
    }

    /// Generator of `y ↦ y + y²` by undetermined coefficients: at step `m`,
    /// `v = v_known + c y^m` and the `y^m` coefficient of `exp(v d/dy)(y)` is
    /// affine in `c` with slope 1.
    fn one_variable_generator(n: usize) -> Series1 {
        let target = Series1::from_coeffs((0..=n).map(|i| if i == 1 || i == 2 { int(1) } else { int(0) }).collect());
        let mut v = vec![int(0); n + 1];
        for m in 2..=n {
            let got = exp1(&v, n);
            v[m] = &target.coeffs()[m] - &got.coeffs()[m];
        }
        Series1::from_coeffs(v)
    }

    fn exp1(v: &[Rational], n: usize) -> Series1 {
        let mut acc: Vec<Rational> = (0..=n).map(|i| int((i == 1) as i64)).collect();
        let mut it = acc.clone();
        for j in 1..=n {
            let d: Vec<Rational> = (0..=n).map(|i| it.get(i + 1).map_or(int(0), |c| c * int(i as i64 + 1))).collect();
            it = (0..=n)
                .map(|m| (0..=m).map(|a| &v[a] * &d[m - a]).sum::<Rational>() * rat(1, j as i64))
                .collect();
            for (a, b) in acc.iter_mut().zip(&it) {
                *a += b;
            }
        }
        Series1::from_coeffs(acc)
    }

    #[test]
    fn exp_examples() {
        let n = 9;
        let g = poly(&[(1, 2, 1, 2), (0, 1, 1, 1)], n);
        assert_eq!(exp_apply(&VectorField2::zero(n), &g).unwrap(), g);
        // Time-one flow of y^2 d/dy is y / (1 - y).
        let f = VectorField2::new(Series2::zero(n), poly(&[(0, 2, 1, 1)], n));
        let e = exp_apply(&f, &Series2::y(n)).unwrap();
        let expected = Series2::from_terms((1..=n).map(|k| (0, k, int(1))), n);
        assert_eq!(e, expected);
        let linear = VectorField2::new(Series2::y(n), Series2::zero(n));
        assert_eq!(exp_apply(&linear, &g), Err(GermError::NotNilpotent));
    }

    #[test]
    fn exp_log_round_trip_on_phi01() {
        let n = 10;
        let phi = phi01(n);
        let x = log_diffeo(&phi).unwrap();
        assert_eq!(exp_diffeo(&x).unwrap(), phi);
    }

    #[test]
    fn apply_field_examples() {
        let n = 6;
        let f = VectorField2::new(Series2::zero(n), poly(&[(0, 2, 1, 1)], n));
        assert!(f.apply(&Series2::constant(int(5), n)).is_zero());
        assert_eq!(f.apply(&Series2::y(n)), poly(&[(0, 2, 1, 1)], n));
        assert_eq!(f.apply(&Series2::y(n)).order(), n);
        let l = log_diffeo(&phi01(n)).unwrap();
        assert!(l.apply(&Series2::x(n)).is_zero());
    }

    #[test]
    fn flow_examples() {
        let n = 7;
        let g = poly(&[(0, 1, 1, 1), (1, 1, 2, 1)], n);
        let zero_flow = flow_poly_t(&VectorField2::zero(n), &g).unwrap();
        assert!(zero_flow.terms().all(|(_, _, c)| c.degree() == Some(0)));
        let x = log_diffeo(&phi01(n)).unwrap();
        let flow = flow_poly_t(&x, &g).unwrap();
        let once = exp_apply(&x, &g).unwrap();
        assert_eq!(flow.eval_lambda(&int(1)), once);
        assert_eq!(flow.eval_lambda(&int(2)), exp_apply(&x, &once).unwrap());
    }
}
