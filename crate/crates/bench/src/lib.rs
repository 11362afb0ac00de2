//! Fixed inputs shared by the benchmarks.

use germ_core::verify::{random_polynomial, random_spec, rng_for};
use germ_core::{GermSpec, Series2};

pub const SEED: u64 = 7;

pub fn spec(order: usize) -> GermSpec {
    random_spec(&mut rng_for(SEED, 0), order, 3)
}

/// Two dense series without constant term.
pub fn pair(order: usize) -> (Series2, Series2) {
    let mut rng = rng_for(SEED, 1);
    (random_polynomial(&mut rng, 1, order, order), random_polynomial(&mut rng, 1, order, order))
}
