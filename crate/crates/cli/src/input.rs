use std::fs;
use std::path::Path;

use germ_core::format::{parse_polynomial2, polynomial_from_terms, SpecFile, TermLiteral};
use germ_core::{GermError, GermSpec, Rational, Series2};

use crate::CliError;

fn json_error(what: &str, e: serde_json::Error) -> CliError {
    CliError::Core(GermError::Parse(format!("{what}: {e} (line {}, column {})", e.line(), e.column())))
}

/// A polynomial given either as canonical text or as a JSON term list.
pub fn polynomial(text: &str, field: &str) -> Result<Series2, CliError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let terms: Vec<TermLiteral> = serde_json::from_str(trimmed).map_err(|e| json_error(field, e))?;
        Ok(polynomial_from_terms(&terms).map_err(|e| tag(field, e))?)
    } else {
        Ok(parse_polynomial2(text).map_err(|e| tag(field, e))?)
    }
}

fn tag(field: &str, e: GermError) -> CliError {
    match e {
        GermError::Parse(m) => CliError::Core(GermError::Parse(format!("{field}: {m}"))),
        other => CliError::Core(other),
    }
}

pub fn rational(text: &str) -> Result<Rational, CliError> {
    Ok(germ_core::format::parse_rational(text)?)
}

pub fn spec_file(path: Option<&Path>, inline: Option<&str>) -> Result<Option<SpecFile>, CliError> {
    let (what, text) = match (path, inline) {
        (Some(p), _) => (p.display().to_string(), fs::read_to_string(p).map_err(CliError::Io)?),
        (None, Some(s)) => ("--spec-json".to_string(), s.to_string()),
        (None, None) => return Ok(None),
    };
    serde_json::from_str(&text).map(Some).map_err(|e| json_error(&what, e))
}

/// Raw `(Δ, w)` and the order, before family validation.
pub struct RawSpec {
    pub delta: Series2,
    pub w: Series2,
    pub file_order: Option<usize>,
}

pub fn raw_spec(
    path: Option<&Path>,
    inline: Option<&str>,
    delta: Option<&str>,
    w: Option<&str>,
) -> Result<RawSpec, CliError> {
    let file = spec_file(path, inline)?;
    let (mut d, mut ww, order) = match &file {
        Some(f) => (Some(polynomial_from_terms(&f.delta)?), Some(polynomial_from_terms(&f.w)?), Some(f.order)),
        None => (None, None, None),
    };
    if let Some(t) = delta {
        d = Some(polynomial(t, "delta")?);
    }
    if let Some(t) = w {
        ww = Some(polynomial(t, "w")?);
    }
    Ok(RawSpec {
        delta: d.unwrap_or_else(|| Series2::zero(0)),
        w: ww.ok_or_else(|| CliError::Core(GermError::InvalidSpec("no w given (use --w, --spec or --spec-json)".into())))?,
        file_order: order,
    })
}

pub fn germ_spec(raw: &RawSpec, order: usize) -> Result<GermSpec, CliError> {
    let top = |s: &Series2| s.order().max(order);
    Ok(GermSpec::new(raw.delta.as_polynomial_to(top(&raw.delta)), raw.w.as_polynomial_to(top(&raw.w)), order)?)
}
