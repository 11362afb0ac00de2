//! Exact formal invariants of unipotent plane germs
//! `φ(x, y) = (x + y(y-x)Δ, y + y(y-x)w)`.
//!
//! Everything is computed over exact rationals (or polynomials in a
//! parameter λ) on truncated power series; no floating point enters an
//! algebraic result.

pub mod coeff;
pub mod diagnostics;
pub mod diffeo;
pub mod error;
pub mod format;
pub mod germ;
pub mod homological;
pub mod series;
pub mod series1;
pub mod verify;

pub use coeff::{int, rat, Coeff, LambdaPoly, Rational};
pub use diffeo::{apply_field, exp_apply, exp_diffeo, flow_poly_t, log_diffeo, theta_apply, Diffeo2, VectorField2};
pub use error::{GermError, Result};
pub use germ::{
    build_phi, build_phi_symbolic, epsilon_from_family, first_integral, fix_set_check, generator,
    jacobian_restrictions, l_field, parametric_first_integral, transport, FixSetCheck, GermSpec,
    ParamFirstIntegral, TransportMap,
};
pub use homological::{
    check_izs, diagonal_minus_axis, s_w, solve_difference, solve_differential, what_series,
    HomologicalContext, HomologicalSolution,
};
pub use series::{compose2, Composer, LambdaSeries2, Series2, Var};
pub use series1::{revert1, Series1};
