//! Series literals: the JSON term-list format and the canonical text rendering.
//!
//! JSON terms look like `{"xk": 1, "yk": 0, "c": "1/2"}`; a λ-polynomial
//! coefficient is a list of rationals indexed by λ-power,
//! `{"xk": 0, "yk": 2, "c": ["0", "1"]}`. Rationals are always strings.
//!
//! Canonical text orders terms by total degree, then by descending power of
//! `x`: `1 - 1/2*x*y + y^2`. Non-constant λ-polynomial coefficients are
//! parenthesized: `(1 + 2*lambda)*x*y`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, LambdaPoly, Rational};
use crate::error::{GermError, Result};
use crate::series::Series2;
use crate::series1::Series1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffLiteral {
    Rational(String),
    Poly(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermLiteral {
    pub xk: usize,
    pub yk: usize,
    pub c: CoeffLiteral,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Term1Literal {
    pub xk: usize,
    pub c: CoeffLiteral,
}

/// On-disk germ description: `{"delta": [terms], "w": [terms], "order": N}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub delta: Vec<TermLiteral>,
    pub w: Vec<TermLiteral>,
    pub order: usize,
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || GermError::Parse(format!("malformed rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(GermError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

pub fn rational_literal(r: &Rational) -> String {
    r.to_string()
}

fn coeff_literal<C: Coeff>(c: &C) -> CoeffLiteral {
    match c.to_rational() {
        Some(r) => CoeffLiteral::Rational(rational_literal(&r)),
        None => CoeffLiteral::Poly(c.to_lambda_poly().coeffs().iter().map(rational_literal).collect()),
    }
}

fn coeff_from_literal<C: Coeff>(lit: &CoeffLiteral) -> Result<C> {
    let poly = match lit {
        CoeffLiteral::Rational(s) => LambdaPoly::constant(parse_rational(s)?),
        CoeffLiteral::Poly(v) => {
            LambdaPoly::new(v.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)
        }
    };
    C::from_lambda_poly(&poly)
        .ok_or_else(|| GermError::Parse("λ-polynomial coefficient where a rational was expected".into()))
}

pub fn series_to_terms<C: Coeff>(s: &Series2<C>) -> Vec<TermLiteral> {
    s.terms()
        .map(|(xk, yk, c)| TermLiteral { xk, yk, c: coeff_literal(c) })
        .collect()
}

pub fn series_from_terms<C: Coeff>(terms: &[TermLiteral], order: usize) -> Result<Series2<C>> {
    let parsed = terms
        .iter()
        .map(|t| Ok((t.xk, t.yk, coeff_from_literal::<C>(&t.c)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Series2::from_terms(parsed, order))
}

pub fn series1_to_terms<C: Coeff>(s: &Series1<C>) -> Vec<Term1Literal> {
    s.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(xk, c)| Term1Literal { xk, c: coeff_literal(c) })
        .collect()
}

pub fn series1_from_terms<C: Coeff>(terms: &[Term1Literal], order: usize) -> Result<Series1<C>> {
    let mut coeffs = vec![C::zero(); order + 1];
    for t in terms {
        if t.xk <= order {
            coeffs[t.xk].add_assign(&coeff_from_literal::<C>(&t.c)?);
        }
    }
    Ok(Series1::from_coeffs(coeffs))
}

fn monomial_text(powers: &[(&str, usize)]) -> String {
    powers
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| if *e == 1 { (*v).to_string() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

fn render_terms<'a, C: Coeff>(terms: impl Iterator<Item = (String, &'a C)>) -> String {
    let mut out = String::new();
    for (mono, c) in terms {
        let (negative, body) = match c.to_rational() {
            Some(r) => {
                let mag = r.abs();
                let body = match (mono.is_empty(), One::is_one(&mag)) {
                    (true, _) => mag.to_string(),
                    (false, true) => mono.clone(),
                    (false, false) => format!("{mag}*{mono}"),
                };
                (r.is_negative(), body)
            }
            None if mono.is_empty() => (false, format!("({c})")),
            None => (false, format!("({c})*{mono}")),
        };
        match (out.is_empty(), negative) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Canonical text of a bivariate series (truncation order not included).
pub fn render2<C: Coeff>(s: &Series2<C>) -> String {
    render_terms(s.terms().map(|(j, k, c)| (monomial_text(&[("x", j), ("y", k)]), c)))
}

/// Canonical text of a univariate series in the variable `var`.
pub fn render1<C: Coeff>(s: &Series1<C>, var: &str) -> String {
    render_terms(
        s.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (monomial_text(&[(var, n)]), c)),
    )
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(w.as_bytes()) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> GermError {
        GermError::Parse(format!("{what} at byte {}", self.pos))
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn unsigned_rational(&mut self) -> Result<Option<Rational>> {
        let Some(num) = self.digits() else { return Ok(None) };
        let num = BigInt::from_str(num).unwrap();
        let save = self.pos;
        if self.eat(b'/') {
            match self.digits() {
                Some(den) => {
                    let den = BigInt::from_str(den).unwrap();
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    return Ok(Some(Rational::new(num, den)));
                }
                None => self.pos = save,
            }
        }
        Ok(Some(Rational::from_integer(num)))
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.eat(b'^') {
            self.digits()
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| self.err("expected exponent"))
        } else {
            Ok(1)
        }
    }

    fn done(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses a λ-polynomial such as `1 - 2*lambda + 1/3*lambda^2`.
pub fn parse_lambda_poly(text: &str) -> Result<LambdaPoly> {
    let mut cur = Cursor::new(text);
    let p = lambda_poly(&mut cur)?;
    if !cur.done() {
        return Err(cur.err("trailing input"));
    }
    Ok(p)
}

fn lambda_poly(cur: &mut Cursor<'_>) -> Result<LambdaPoly> {
    let mut acc = <LambdaPoly as Coeff>::zero();
    let mut first = true;
    loop {
        let negative = if cur.eat(b'-') {
            true
        } else if cur.eat(b'+') || first {
            false
        } else {
            break;
        };
        first = false;
        let mut c = cur.unsigned_rational()?;
        let mut power = 0;
        if c.is_some() && cur.eat(b'*') || c.is_none() {
            if !cur.eat_word("lambda") {
                return Err(cur.err("expected 'lambda'"));
            }
            power = cur.exponent()?;
        }
        let mut coeffs = vec![<Rational as Zero>::zero(); power + 1];
        let c = c.take().unwrap_or_else(<Rational as One>::one);
        coeffs[power] = if negative { -c } else { c };
        acc.add_assign(&LambdaPoly::new(coeffs));
        if matches!(cur.peek(), Some(b')') | None) {
            break;
        }
    }
    Ok(acc)
}

fn parse_terms(text: &str, vars: &[char]) -> Result<Vec<(Vec<usize>, LambdaPoly)>> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    let mut first = true;
    while !cur.done() {
        let negative = if cur.eat(b'-') {
            true
        } else if cur.eat(b'+') || first {
            false
        } else {
            return Err(cur.err("expected '+' or '-'"));
        };
        first = false;
        let mut coeff = if cur.eat(b'(') {
            let p = lambda_poly(&mut cur)?;
            if !cur.eat(b')') {
                return Err(cur.err("expected ')'"));
            }
            Some(p)
        } else {
            cur.unsigned_rational()?.map(LambdaPoly::constant)
        };
        let mut powers = vec![0usize; vars.len()];
        let expect_monomial = match coeff {
            Some(_) => cur.eat(b'*'),
            None => true,
        };
        if expect_monomial {
            loop {
                let Some(b) = cur.peek() else { return Err(cur.err("expected variable")) };
                let Some(v) = vars.iter().position(|&c| c as u8 == b) else {
                    return Err(cur.err("unknown variable"));
                };
                cur.pos += 1;
                powers[v] += cur.exponent()?;
                if !cur.eat(b'*') {
                    break;
                }
            }
        }
        let mut c = coeff.take().unwrap_or_else(<LambdaPoly as Coeff>::one);
        if negative {
            c = Coeff::neg(&c);
        }
        out.push((powers, c));
    }
    if first {
        return Err(GermError::Parse("empty series text".into()));
    }
    Ok(out)
}

/// Parses canonical (or any equivalent) text of a bivariate series at `order`.
pub fn parse_series2<C: Coeff>(text: &str, order: usize) -> Result<Series2<C>> {
    let terms = parse_terms(text, &['x', 'y'])?
        .into_iter()
        .map(|(p, c)| {
            let c = C::from_lambda_poly(&c)
                .ok_or_else(|| GermError::Parse("unexpected λ-polynomial coefficient".into()))?;
            Ok((p[0], p[1], c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Series2::from_terms(terms, order))
}

/// Parses a polynomial in `x, y`, sized to its own degree.
pub fn parse_polynomial2<C: Coeff>(text: &str) -> Result<Series2<C>> {
    let terms = parse_terms(text, &['x', 'y'])?;
    let degree = terms.iter().map(|(p, _)| p[0] + p[1]).max().unwrap_or(0);
    parse_series2(text, degree)
}

/// Term list sized to its own degree.
pub fn polynomial_from_terms<C: Coeff>(terms: &[TermLiteral]) -> Result<Series2<C>> {
    series_from_terms(terms, terms.iter().map(|t| t.xk + t.yk).max().unwrap_or(0))
}

/// Parses text of a univariate series in `x` at `order`.
pub fn parse_series1<C: Coeff>(text: &str, order: usize) -> Result<Series1<C>> {
    let mut coeffs = vec![C::zero(); order + 1];
    for (p, c) in parse_terms(text, &['x'])? {
        let c = C::from_lambda_poly(&c)
            .ok_or_else(|| GermError::Parse("unexpected λ-polynomial coefficient".into()))?;
        if p[0] <= order {
            coeffs[p[0]].add_assign(&c);
        }
    }
    Ok(Series1::from_coeffs(coeffs))
}
