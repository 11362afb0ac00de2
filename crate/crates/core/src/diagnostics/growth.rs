//! Coefficient-growth reports: per-degree magnitudes, root test, and block
//! maxima of the root test as evidence of (super-)geometric growth.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::coeff::{int, Coeff, Rational};
use crate::series::Series2;
use crate::series1::Series1;

pub const DEFAULT_WINDOW: usize = 5;

/// Elasticity of the block maxima above which growth is called super-geometric.
pub const SUPER_GEOMETRIC_ELASTICITY: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    None,
    X0,
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    GeometricBounded,
    IncreasingRootTest,
    SuperGeometricTrend,
}

impl GrowthClass {
    pub fn label(self) -> &'static str {
        match self {
            GrowthClass::GeometricBounded => "geometric-bounded",
            GrowthClass::IncreasingRootTest => "increasing root-test",
            GrowthClass::SuperGeometricTrend => "super-geometric trend",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    /// Largest `|c|` among the coefficients of degree `n`.
    pub value: f64,
    /// `value^{1/n}`.
    pub root_test: f64,
    /// Maximum of the root test over the block containing `n`, when `n`
    /// lies in a complete block.
    pub window_max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub start: usize,
    pub end: usize,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub window: usize,
    pub from_degree: usize,
    pub blocks: Vec<Block>,
    pub strictly_increasing: bool,
    /// Least-squares slope of `ln(block max)` against `ln(block centre)`.
    pub elasticity: Option<f64>,
    pub classification: GrowthClass,
}

impl GrowthReport {
    pub fn row(&self, n: usize) -> Option<&GrowthRow> {
        self.rows.iter().find(|r| r.n == n)
    }
}

fn bigint_ln(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |r|`, finite for every nonzero rational regardless of size.
pub fn ln_abs(r: &Rational) -> f64 {
    if Zero::is_zero(r) {
        return f64::NEG_INFINITY;
    }
    bigint_ln(&r.numer().abs()) - bigint_ln(r.denom())
}

/// Per-degree magnitudes `max |c|` for degrees `1..=N`.
pub fn degree_maxima<C: Coeff>(series: &Series2<C>, restriction: Restriction) -> Vec<Rational> {
    let max_abs = |it: &mut dyn Iterator<Item = Rational>| it.map(|c| c.abs()).max().unwrap_or_else(|| int(0));
    match restriction {
        Restriction::None => (1..=series.order())
            .map(|d| max_abs(&mut (0..=d).map(|k| rational_part(&series.coeff(d - k, k)))))
            .collect(),
        Restriction::X0 => series1_maxima(&series.restrict_x0()),
        Restriction::Diagonal => series1_maxima(&series.restrict_diagonal()),
    }
}

pub fn series1_maxima<C: Coeff>(series: &Series1<C>) -> Vec<Rational> {
    series.coeffs().iter().skip(1).map(|c| rational_part(c).abs()).collect()
}

fn rational_part<C: Coeff>(c: &C) -> Rational {
    c.to_rational().expect("growth reports need rational coefficients")
}

/// Builds the report from the magnitudes of degrees `1..=N` (`maxima[0]` is
/// degree 1). Blocks of `window` degrees are aligned to end at `N` and only
/// those lying entirely in `from_degree..=N` are summarized.
pub fn growth_report(maxima: &[Rational], window: usize, from_degree: usize) -> GrowthReport {
    let window = window.max(1);
    let top = maxima.len();
    let mut rows: Vec<GrowthRow> = maxima
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = i + 1;
            let ln = ln_abs(c);
            GrowthRow {
                n,
                value: ln.exp(),
                root_test: if Zero::is_zero(c) { 0.0 } else { (ln / n as f64).exp() },
                window_max: None,
            }
        })
        .collect();
    let mut blocks = Vec::new();
    let mut end = top;
    while end >= window && end + 1 - window >= from_degree.max(1) {
        let start = end + 1 - window;
        let max = rows[start - 1..end].iter().map(|r| r.root_test).fold(f64::MIN, f64::max);
        blocks.push(Block { start, end, max });
        end -= window;
    }
    blocks.reverse();
    for b in &blocks {
        for r in &mut rows[b.start - 1..b.end] {
            r.window_max = Some(b.max);
        }
    }
    let strictly_increasing = blocks.len() >= 2 && blocks.windows(2).all(|p| p[1].max > p[0].max);
    let elasticity = (blocks.len() >= 2 && blocks.iter().all(|b| b.max > 0.0)).then(|| {
        let pts: Vec<(f64, f64)> =
            blocks.iter().map(|b| (((b.start + b.end) as f64 / 2.0).ln(), b.max.ln())).collect();
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / m, sy / m);
        let cov: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let var: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        cov / var
    });
    let classification = match (strictly_increasing, elasticity) {
        (true, Some(e)) if e >= SUPER_GEOMETRIC_ELASTICITY => GrowthClass::SuperGeometricTrend,
        (true, _) => GrowthClass::IncreasingRootTest,
        _ => GrowthClass::GeometricBounded,
    };
    GrowthReport { rows, window, from_degree, blocks, strictly_increasing, elasticity, classification }
}

/// Default summary range: the top two thirds of the degrees.
pub fn default_from_degree(order: usize) -> usize {
    (order / 3).max(1)
}

/// `ŵ(0, y)` for `w = 1`, i.e. `v(y)/y²` where `v d/dy` generates
/// `y ↦ y + y²`. From `v(y + y²) = (1 + 2y) v(y)`:
/// `(n-2) a_n = -Σ_{m=2}^{n-1} a_m C(m, n+1-m)` with `a_2 = 1`.
pub fn axis_generator_w1(order: usize) -> Series1 {
    let top = order + 2;
    let mut a = vec![<Rational as Zero>::zero(); top + 1];
    a[2] = int(1);
    for n in 3..=top {
        let mut acc = <Rational as Zero>::zero();
        for (m, am) in a.iter().enumerate().take(n).skip(2) {
            let choose = binomial(m, n + 1 - m);
            if !choose.is_zero() {
                acc += am * Rational::from_integer(choose);
            }
        }
        a[n] = -acc / int((n - 2) as i64);
    }
    Series1::from_coeffs(a[2..].to_vec())
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}
