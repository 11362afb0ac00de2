//! Functional-analytic identities and divergence evidence.

pub mod dv;
pub mod growth;
pub mod hilbert;

pub use dv::{antidiagonal_samples, d_v, d_v_coeff, d_v_formula};
pub use growth::{
    axis_generator_w1, default_from_degree, degree_maxima, growth_report, series1_maxima, GrowthClass, GrowthReport,
    GrowthRow, Restriction, DEFAULT_WINDOW,
};
pub use hilbert::{
    hilbert_inverse_norm, hilbert_matrix, invert_exact, inverse_spectral_norm, reconstruct_antidiagonal, HilbertReport,
    DEFAULT_MAX_K,
};

/// Float rendering used by every report: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}
