//! The family `φ_{Δ,w}(x, y) = (x + y(y-x)Δ, y + y(y-x)w)`: construction,
//! generator structure, first integrals and the transport mapping.
//!
//! `Δ` and `w` are taken as exact polynomials. Quantities reported at order
//! `N` are computed from `φ` at order `N + 2`, because dividing by `y(y-x)`
//! costs two degrees of precision.

use crate::coeff::{Coeff, LambdaPoly, Rational};
use crate::diffeo::{apply_field, log_diffeo, Diffeo2, VectorField2};
use crate::error::{GermError, Result};
use crate::format::{series_from_terms, series_to_terms, SpecFile};
use crate::series::{mul_to, Series2, Var};
use crate::series1::Series1;

/// Defining data `(Δ, w)` of a family member, with the truncation order `N`
/// at which invariants are reported.
#[derive(Clone, Debug, PartialEq)]
pub struct GermSpec {
    delta: Series2,
    w: Series2,
    order: usize,
}

impl GermSpec {
    /// Requires `Δ(0,0) = 0`, `w(0,0) ≠ 0` and `order ≥ 1`.
    pub fn new(delta: Series2, w: Series2, order: usize) -> Result<Self> {
        if !delta.constant_term().is_zero() {
            return Err(GermError::InvalidSpec("delta(0,0) must vanish".into()));
        }
        if w.constant_term().is_zero() {
            return Err(GermError::InvalidSpec("w(0,0) must be nonzero".into()));
        }
        if order == 0 {
            return Err(GermError::InvalidSpec("truncation order must be at least 1".into()));
        }
        Ok(GermSpec { delta, w, order })
    }

    pub fn from_file(file: &SpecFile) -> Result<Self> {
        let top = file
            .delta
            .iter()
            .chain(&file.w)
            .map(|t| t.xk + t.yk)
            .max()
            .unwrap_or(0)
            .max(file.order);
        Self::new(series_from_terms(&file.delta, top)?, series_from_terms(&file.w, top)?, file.order)
    }

    pub fn to_file(&self) -> SpecFile {
        SpecFile { delta: series_to_terms(&self.delta), w: series_to_terms(&self.w), order: self.order }
    }

    pub fn delta(&self) -> &Series2 {
        &self.delta
    }

    pub fn w(&self) -> &Series2 {
        &self.w
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn w00(&self) -> &Rational {
        self.w.constant_term()
    }

    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::new(self.delta.clone(), self.w.clone(), order)
    }

    /// The member `φ_{λΔ, w}` for a fixed rational `λ`.
    pub fn scaled(&self, lambda: &Rational) -> Self {
        GermSpec { delta: self.delta.scale(lambda), w: self.w.clone(), order: self.order }
    }

    pub(crate) fn delta_to(&self, order: usize) -> Series2 {
        self.delta.as_polynomial_to(order)
    }

    pub(crate) fn w_to(&self, order: usize) -> Series2 {
        self.w.as_polynomial_to(order)
    }
}

pub(crate) fn phi_from<C: Coeff>(delta: &Series2<C>, w: &Series2<C>, order: usize) -> Diffeo2<C> {
    let q = Series2::fixed_curve(order);
    let sx = Series2::x(order).add(&mul_to(&q, delta, order));
    let sy = Series2::y(order).add(&mul_to(&q, w, order));
    Diffeo2::new(sx, sy).expect("family members are tangent to the identity")
}

/// `φ_{Δ,w}` at order `N`, or `φ_{λΔ,w}` when `lambda_scale` is given.
pub fn build_phi(spec: &GermSpec, lambda_scale: Option<&Rational>) -> Diffeo2 {
    build_phi_to(spec, lambda_scale, spec.order)
}

pub(crate) fn build_phi_to(spec: &GermSpec, lambda_scale: Option<&Rational>, order: usize) -> Diffeo2 {
    let delta = spec.delta_to(order);
    let delta = match lambda_scale {
        Some(l) => delta.scale(l),
        None => delta,
    };
    phi_from(&delta, &spec.w_to(order), order)
}

/// `φ_{λΔ,w}` with `λ` kept symbolic.
pub fn build_phi_symbolic(spec: &GermSpec) -> Diffeo2<LambdaPoly> {
    build_phi_symbolic_to(spec, spec.order)
}

fn build_phi_symbolic_to(spec: &GermSpec, order: usize) -> Diffeo2<LambdaPoly> {
    let delta = spec.delta_to(order).map(|c| LambdaPoly::lambda().scale(c));
    let w = Series2::<LambdaPoly>::from_rational(&spec.w_to(order));
    phi_from(&delta, &w, order)
}

fn divide_field<C: Coeff>(field: &VectorField2<C>) -> Result<VectorField2<C>> {
    let q = Series2::fixed_curve(field.order());
    field
        .map_components(|c| c.divide_ideal(&q))
        .map_err(|e| GermError::InvariantBreach(format!("generator not divisible by y(y-x): {e}")))
}

/// `L = log φ / (y(y-x))` from a diffeomorphism known two orders beyond the
/// wanted output, with the structural checks at the origin.
fn l_field_of<C: Coeff>(phi: &Diffeo2<C>, w00: &Rational) -> Result<VectorField2<C>> {
    let l = divide_field(&log_diffeo(phi)?)?;
    if !l.ax().constant_term().is_zero() {
        return Err(GermError::InvariantBreach("L(x)(0,0) is nonzero".into()));
    }
    if l.ay().constant_term() != &C::from_rational(w00.clone()) {
        return Err(GermError::InvariantBreach("L(y)(0,0) differs from w(0,0)".into()));
    }
    Ok(l)
}

/// The generator `log φ_{Δ,w}` at order `N`.
pub fn generator(spec: &GermSpec) -> Result<VectorField2> {
    log_diffeo(&build_phi(spec, None))
}

/// `L_{Δ,w} = log φ_{Δ,w} / (y(y-x))` at order `N`.
pub fn l_field(spec: &GermSpec) -> Result<VectorField2> {
    l_field_of(&build_phi_to(spec, None, spec.order + 2), spec.w00())
}

/// `L_{λΔ,w}` with symbolic `λ`, at order `N`.
pub fn l_field_symbolic(spec: &GermSpec) -> Result<VectorField2<LambdaPoly>> {
    l_field_of(&build_phi_symbolic_to(spec, spec.order + 2), spec.w00())
}

/// Outcome of testing whether `φ` fixes the curve `y(y-x) = 0` pointwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixSetCheck {
    pub holds: bool,
    /// First bidegree `(xk, yk)` of `φ - Id` obstructing divisibility.
    pub witness: Option<(usize, usize)>,
}

pub fn fix_set_check<C: Coeff>(phi: &Diffeo2<C>) -> FixSetCheck {
    let n = phi.order();
    let dx = phi.sx().sub(&Series2::x(n));
    let dy = phi.sy().sub(&Series2::y(n));
    let q = Series2::fixed_curve(n);
    for d in [dx, dy] {
        let witness = if n < 2 {
            d.terms().next().map(|(j, k, _)| (j, k))
        } else {
            match d.divide_ideal(&q) {
                Ok(_) => None,
                Err(GermError::NotDivisible { xk, yk }) => Some((xk, yk)),
                Err(e) => unreachable!("divisor has valuation 2: {e}"),
            }
        };
        if witness.is_some() {
            return FixSetCheck { holds: false, witness };
        }
    }
    FixSetCheck { holds: true, witness: None }
}

/// Jacobian determinant of `φ` restricted to `y = 0` and to `y = x`, both
/// as series in `x`, at order `N - 1`.
pub fn jacobian_restrictions<C: Coeff>(phi: &Diffeo2<C>) -> (Series1<C>, Series1<C>) {
    let (sx, sy) = (phi.sx(), phi.sy());
    let det = sx
        .partial(Var::X)
        .mul(&sy.partial(Var::Y))
        .sub(&sx.partial(Var::Y).mul(&sy.partial(Var::X)));
    (det.restrict_y0(), det.restrict_diagonal())
}

/// First integral `f` of `a ∂/∂x + b ∂/∂y` with `f(x,0) = x`, for `b` a unit,
/// solved by powers of `y`: with `c = -a/b` and `f = Σ f_k(x) y^k`,
/// `(k+1) f_{k+1} = Σ_{i≤k} c_i ∂f_{k-i}/∂x`. Known to the field's order plus one.
pub fn first_integral_of_field<C: Coeff>(field: &VectorField2<C>) -> Result<Series2<C>> {
    let n = field.order();
    let c = field.ax().mul(&field.ay().invert_unit()?).neg();
    let mut f = Series2::zero(n + 1);
    f.set(1, 0, C::one());
    for k in 0..=n {
        let inv = Rational::new(1.into(), (k as i64 + 1).into());
        for j in 0..=(n - k) {
            let mut acc = C::zero();
            for i in 0..=k {
                for a in 0..=j {
                    if a + i > n {
                        break;
                    }
                    let ca = c.get(a, i).expect("within order");
                    if ca.is_zero() {
                        continue;
                    }
                    let src = f.coeff(j - a + 1, k - i);
                    if !src.is_zero() {
                        acc.add_mul(ca, &src.scale(&Rational::from_integer((j - a + 1).into())));
                    }
                }
            }
            if !acc.is_zero() {
                f.set(j, k + 1, acc.scale(&inv));
            }
        }
    }
    Ok(f)
}

/// The first integral `f̂` of `log φ_{Δ,w}` normalized by `f̂(x,0) = x`, at order `N`.
pub fn first_integral(spec: &GermSpec) -> Result<Series2> {
    Ok(first_integral_of_field(&l_field(spec)?)?.truncate(spec.order))
}

/// `â` with `Tr_{Δ,w}(x, 0) = (â(x), â(x))`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransportMap {
    pub a: Series1,
}

impl TransportMap {
    pub fn order(&self) -> usize {
        self.a.order()
    }

    /// `f(â(x), â(x)) - f(x, 0)`, which vanishes for the first integral `f`
    /// the map was built from.
    pub fn defect(&self, f: &Series2) -> Series1 {
        let on_diagonal = f.restrict_diagonal().compose(&self.a).expect("â(0) = 0");
        on_diagonal.sub(&f.restrict_y0())
    }
}

/// `â = (f̂(x,x))^{-1} ∘ f̂(x,0)` at order `N`.
pub fn transport_from_first_integral(f: &Series2) -> Result<TransportMap> {
    let inverse = f
        .restrict_diagonal()
        .revert()
        .map_err(|e| GermError::InvariantBreach(format!("f(x,x) not reversible: {e}")))?;
    Ok(TransportMap { a: inverse.compose(&f.restrict_y0())? })
}

pub fn transport(spec: &GermSpec) -> Result<TransportMap> {
    transport_from_first_integral(&first_integral(spec)?)
}

/// First integral of `log φ_{λΔ,w}` with symbolic `λ`:
/// `f̂_λ = x + y Σ f_{j,k}(λ) x^j y^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamFirstIntegral {
    f: Series2<LambdaPoly>,
}

impl ParamFirstIntegral {
    /// Wraps `f̂_λ`, enforcing `deg_λ f_{j,k} ≤ j + k`.
    pub fn new(f: Series2<LambdaPoly>) -> Result<Self> {
        let pfi = ParamFirstIntegral { f };
        for (j, k, p) in pfi.entries() {
            if let Some(degree) = p.degree() {
                if degree > j + k {
                    return Err(GermError::DegreeBoundViolated { j, k, degree });
                }
            }
        }
        Ok(pfi)
    }

    pub fn order(&self) -> usize {
        self.f.order()
    }

    pub fn series(&self) -> &Series2<LambdaPoly> {
        &self.f
    }

    /// `f_{j,k}`, the coefficient of `x^j y^{k+1}`.
    pub fn entry(&self, j: usize, k: usize) -> LambdaPoly {
        self.f.coeff(j, k + 1)
    }

    /// All `(j, k, f_{j,k})` with `1 ≤ j + k ≤ N - 1`, by total degree.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, LambdaPoly)> + '_ {
        let n = self.order();
        (1..n).flat_map(move |d| (0..=d).rev().map(move |j| (j, d - j, self.entry(j, d - j))))
    }

    pub fn specialize(&self, lambda: &Rational) -> Series2 {
        self.f.eval_lambda(lambda)
    }
}

pub fn parametric_first_integral(spec: &GermSpec) -> Result<ParamFirstIntegral> {
    let f = first_integral_of_field(&l_field_symbolic(spec)?)?.truncate(spec.order);
    ParamFirstIntegral::new(f)
}

/// `ε̂ = ∂f̂_λ/∂λ` at `λ = 0`.
pub fn epsilon_from_family(pfi: &ParamFirstIntegral) -> Series2 {
    pfi.series().lambda_coeff(1)
}

/// Checks `L(f) = 0` to order `N - 1`; used by the verification suites.
pub fn annihilates(field: &VectorField2, f: &Series2) -> bool {
    apply_field(field, f).truncate(f.order().saturating_sub(1)).is_zero()
}
