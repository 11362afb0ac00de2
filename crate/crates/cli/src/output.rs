use std::str::FromStr;

use germ_core::diagnostics::{fmt_float, GrowthReport, HilbertReport};
use germ_core::format::{render1, render2, series1_to_terms, series_to_terms};
use germ_core::{Coeff, Rational, Series1, Series2, VectorField2};
use serde_json::{json, Number, Value};

/// Float as a JSON number with 17 significant digits; non-finite values become null.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt_float(x)).expect("exponent notation is a JSON number"))
    } else {
        Value::Null
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn series2<C: Coeff>(s: &Series2<C>) -> Value {
    json!({ "order": s.order(), "text": render2(s), "terms": series_to_terms(s) })
}

pub fn series1<C: Coeff>(s: &Series1<C>) -> Value {
    json!({ "order": s.order(), "text": render1(s, "x"), "terms": series1_to_terms(s) })
}

pub fn field(f: &VectorField2) -> Value {
    json!({ "x_component": series2(f.ax()), "y_component": series2(f.ay()) })
}

pub fn field_text(f: &VectorField2) -> String {
    format!("x: {}\ny: {}\n", render2(f.ax()), render2(f.ay()))
}

pub fn series2_csv<C: Coeff>(rows: &mut String, name: &str, s: &Series2<C>) {
    for t in series_to_terms(s) {
        rows.push_str(&format!("{name},{},{},{}\n", t.xk, t.yk, csv_coeff(&t.c)));
    }
}

pub fn series1_csv<C: Coeff>(rows: &mut String, name: &str, s: &Series1<C>) {
    for t in series1_to_terms(s) {
        rows.push_str(&format!("{name},{},0,{}\n", t.xk, csv_coeff(&t.c)));
    }
}

fn csv_coeff(c: &germ_core::format::CoeffLiteral) -> String {
    match c {
        germ_core::format::CoeffLiteral::Rational(s) => s.clone(),
        germ_core::format::CoeffLiteral::Poly(v) => v.join(" "),
    }
}

pub const SERIES_CSV_HEADER: &str = "component,xk,yk,c\n";

pub fn hilbert_json(r: &HilbertReport) -> Value {
    let inverse: Vec<Vec<Value>> = r.inverse.iter().map(|row| row.iter().map(rational).collect()).collect();
    json!({
        "k": r.k,
        "inverse": inverse,
        "inverse_spectral_norm": float(r.inverse_spectral_norm),
        "asymptotic_prediction": float(r.asymptotic_prediction),
        "ratio": float(r.ratio),
    })
}

pub fn growth_json(r: &GrowthReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "n": row.n,
                "value": float(row.value),
                "root_test": float(row.root_test),
                "window_max": row.window_max.map_or(Value::Null, float),
            })
        })
        .collect();
    let blocks: Vec<Value> =
        r.blocks.iter().map(|b| json!({ "start": b.start, "end": b.end, "max": float(b.max) })).collect();
    json!({
        "window": r.window,
        "from_degree": r.from_degree,
        "blocks": blocks,
        "strictly_increasing": r.strictly_increasing,
        "elasticity": r.elasticity.map_or(Value::Null, float),
        "classification": r.classification.label(),
        "rows": rows,
    })
}

pub fn growth_text(r: &GrowthReport) -> String {
    let mut out = format!(
        "classification: {}\nstrictly increasing block maxima: {}\nelasticity: {}\n",
        r.classification.label(),
        r.strictly_increasing,
        r.elasticity.map_or("n/a".into(), fmt_float)
    );
    for b in &r.blocks {
        out.push_str(&format!("block {}..{}: max root test {}\n", b.start, b.end, fmt_float(b.max)));
    }
    out.push_str("n value root_test window_max\n");
    for row in &r.rows {
        out.push_str(&format!(
            "{} {} {} {}\n",
            row.n,
            fmt_float(row.value),
            fmt_float(row.root_test),
            row.window_max.map_or("-".into(), fmt_float)
        ));
    }
    out
}

pub fn growth_csv_rows(out: &mut String, prefix: Option<&str>, r: &GrowthReport) {
    for row in &r.rows {
        if let Some(p) = prefix {
            out.push_str(p);
            out.push(',');
        }
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            fmt_float(row.value),
            fmt_float(row.root_test),
            row.window_max.map_or(String::new(), fmt_float)
        ));
    }
}
