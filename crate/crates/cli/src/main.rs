//! `germ`: command-line front end for the germ invariant engine.

mod input;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use germ_core::diagnostics::{
    axis_generator_w1, d_v, d_v_coeff, d_v_formula, default_from_degree, degree_maxima, fmt_float, growth_report,
    hilbert_inverse_norm, series1_maxima, GrowthReport, Restriction, DEFAULT_MAX_K, DEFAULT_WINDOW,
};
use germ_core::format::{render1, render2};
use germ_core::homological::HomologicalContext;
use germ_core::verify::{self, VerifyConfig};
use germ_core::{
    first_integral, generator, l_field, parametric_first_integral, transport, GermError, Rational, Series2,
};
use rayon::prelude::*;
use serde_json::{json, Value};

const DEFAULT_ORDER: usize = 10;
const DEFAULT_MAX_ORDER: usize = 64;

const EXIT_CODES: &str = "\
Exit status:
  0  success
  1  I/O or other failure
  2  command-line usage error
  3  parse error (malformed series text or spec JSON)
  4  invalid germ data (delta(0,0) != 0 or w(0,0) = 0)
  5  value out of range (order, k, coefficient index)
  6  arithmetic invariant breached (a computed identity failed)
  7  verify found a failing invariant suite

Failures print one JSON record {\"error\", \"exit_code\", \"message\"} on stderr.
GERM_MAX_ORDER caps the truncation order (default 64).";

#[derive(Parser)]
#[command(name = "germ", version, about = "Exact formal invariants of unipotent plane germs", after_help = EXIT_CODES)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct SpecArgs {
    /// Spec file: {"delta": [terms], "w": [terms], "order": N}.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Inline spec JSON, same schema as --spec.
    #[arg(long, conflicts_with = "spec")]
    spec_json: Option<String>,
    /// Delta as text (e.g. "x - 1/2*y^2") or a JSON term list; overrides the spec.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<String>,
    /// w as text or a JSON term list; overrides the spec.
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    /// Truncation order N (default: the spec's order, else 10).
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// y-component of the generator log φ.
    Generator,
    /// The transport map â.
    Transport,
    /// ŵ, with log φ_{0,w} = ŵ y(y-x) ∂/∂y.
    WhatSeries,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RestrictArg {
    None,
    X0,
    Diag,
}

#[derive(Subcommand)]
enum Command {
    /// Infinitesimal generator log φ.
    Log(SpecArgs),
    /// L = log φ / (y(y-x)).
    Lfield(SpecArgs),
    /// First integral f with f(x,0) = x.
    FirstIntegral(SpecArgs),
    /// Transport map â.
    Transport(SpecArgs),
    /// Table of f_{j,k}(λ) for the family φ_{λΔ,w}, with the degree bound checked.
    ParamFamily(SpecArgs),
    /// Solution of ε - ε∘φ_{0,w} = y(y-x)Δ and S_w(Δ) by both routes.
    Homological(SpecArgs),
    /// S_w(L_{0,w}[y(y-x)Δ]), which must vanish.
    IzsCheck(SpecArgs),
    /// D_v(H), by both evaluation routes.
    Dv {
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// Also report the single coefficient D_v^j(H).
        #[arg(long)]
        j: Option<usize>,
    },
    /// Spectral norm of the inverse Hilbert matrix against its asymptotic.
    Hilbert {
        #[arg(long, conflicts_with = "k_range")]
        k: Option<usize>,
        /// Inclusive range "A..B".
        #[arg(long)]
        k_range: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_K)]
        max_k: usize,
    },
    /// Coefficient growth report.
    Growth {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum)]
        target: Target,
        /// Restriction of two-variable targets; ignored for transport.
        #[arg(long, value_enum, default_value_t = RestrictArg::X0)]
        restrict: RestrictArg,
        /// λ samples (rationals) for the family φ_{λΔ,w}; one report each.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        lambda: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: usize,
        /// First degree of the block summary (default N/3).
        #[arg(long)]
        from_degree: Option<usize>,
    },
    /// Run the seeded invariant suites.
    Verify {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        samples: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Core(GermError),
    Io(io::Error),
    VerifyFailed,
}

impl From<GermError> for CliError {
    fn from(e: GermError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn kind_and_code(&self) -> (&'static str, u8) {
        match self {
            CliError::Io(_) => ("IoError", 1),
            CliError::VerifyFailed => ("VerifyFailed", 7),
            CliError::Core(e) => match e {
                GermError::Parse(_) => ("ParseError", 3),
                GermError::InvalidSpec(_) => ("InvalidSpec", 4),
                GermError::OutOfRange(_) => ("OutOfRange", 5),
                GermError::NonUnit => ("NonUnit", 6),
                GermError::IllFormedComposition => ("IllFormedComposition", 6),
                GermError::NotDivisible { .. } => ("NotDivisible", 6),
                GermError::NotReversible { .. } => ("NotReversible", 6),
                GermError::NotUnipotent => ("NotUnipotent", 6),
                GermError::NotNilpotent => ("NotNilpotent", 6),
                GermError::DegreeBoundViolated { .. } => ("DegreeBoundViolated", 6),
                GermError::SingularMatrix => ("SingularMatrix", 6),
                GermError::InvariantBreach(_) => ("InvariantBreach", 6),
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
            CliError::VerifyFailed => "one or more invariant suites failed".into(),
        }
    }
}

/// Rendered result of a command in all three formats.
struct Output {
    text: String,
    json: Value,
    csv: String,
}

/// A command may succeed in producing output and still report a breach.
struct Outcome {
    output: Output,
    failure: Option<CliError>,
}

impl From<Output> for Outcome {
    fn from(output: Output) -> Self {
        Outcome { output, failure: None }
    }
}

fn max_order() -> Result<usize, CliError> {
    match std::env::var("GERM_MAX_ORDER") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| GermError::OutOfRange(format!("GERM_MAX_ORDER={v:?} is not a non-negative integer")).into()),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn check_order(order: usize) -> Result<usize, CliError> {
    let cap = max_order()?;
    if order < 2 || order > cap {
        return Err(GermError::OutOfRange(format!("order {order} outside 2..={cap}")).into());
    }
    Ok(order)
}

fn resolve(args: &SpecArgs) -> Result<(input::RawSpec, usize), CliError> {
    let raw = input::raw_spec(args.spec.as_deref(), args.spec_json.as_deref(), args.delta.as_deref(), args.w.as_deref())?;
    let order = check_order(args.order.or(raw.file_order).unwrap_or(DEFAULT_ORDER))?;
    Ok((raw, order))
}

fn header(command: &str, order: usize) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("order".into(), json!(order));
    m
}

fn with(mut m: serde_json::Map<String, Value>, extra: Value) -> Value {
    if let Value::Object(e) = extra {
        m.extend(e);
    }
    Value::Object(m)
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Log(args) => {
            let (raw, n) = resolve(args)?;
            let x = generator(&input::germ_spec(&raw, n)?)?;
            let mut csv = output::SERIES_CSV_HEADER.to_string();
            output::series2_csv(&mut csv, "x", x.ax());
            output::series2_csv(&mut csv, "y", x.ay());
            Ok(Output { text: output::field_text(&x), json: with(header("log", n), output::field(&x)), csv }.into())
        }
        Command::Lfield(args) => {
            let (raw, n) = resolve(args)?;
            let l = l_field(&input::germ_spec(&raw, n)?)?;
            let mut csv = output::SERIES_CSV_HEADER.to_string();
            output::series2_csv(&mut csv, "x", l.ax());
            output::series2_csv(&mut csv, "y", l.ay());
            Ok(Output { text: output::field_text(&l), json: with(header("lfield", n), output::field(&l)), csv }.into())
        }
        Command::FirstIntegral(args) => {
            let (raw, n) = resolve(args)?;
            let f = first_integral(&input::germ_spec(&raw, n)?)?;
            let mut csv = output::SERIES_CSV_HEADER.to_string();
            output::series2_csv(&mut csv, "f", &f);
            Ok(Output {
                text: format!("{}\n", render2(&f)),
                json: with(header("first-integral", n), json!({ "first_integral": output::series2(&f) })),
                csv,
            }
            .into())
        }
        Command::Transport(args) => {
            let (raw, n) = resolve(args)?;
            let tr = transport(&input::germ_spec(&raw, n)?)?;
            let mut csv = output::SERIES_CSV_HEADER.to_string();
            output::series1_csv(&mut csv, "a", &tr.a);
            Ok(Output {
                text: format!("{}\n", render1(&tr.a, "x")),
                json: with(header("transport", n), json!({ "a": output::series1(&tr.a) })),
                csv,
            }
            .into())
        }
        Command::ParamFamily(args) => {
            let (raw, n) = resolve(args)?;
            let pfi = parametric_first_integral(&input::germ_spec(&raw, n)?)?;
            let mut text = String::new();
            let mut csv = String::from("j,k,degree,lambda_power,c\n");
            let mut entries = Vec::new();
            for (j, k, p) in pfi.entries() {
                let degree = p.degree().map_or(Value::Null, |d| json!(d));
                text.push_str(&format!("f[{j},{k}] = {p}\n"));
                for (i, c) in p.coeffs().iter().enumerate() {
                    csv.push_str(&format!("{j},{k},{},{i},{c}\n", p.degree().unwrap_or(0)));
                }
                entries.push(json!({
                    "j": j, "k": k, "degree": degree,
                    "c": p.coeffs().iter().map(output::rational).collect::<Vec<_>>(),
                }));
            }
            text.push_str("degree bound deg f[j,k] <= j+k: holds\n");
            Ok(Output {
                text,
                json: with(header("param-family", n), json!({ "entries": entries, "degree_bound_holds": true })),
                csv,
            }
            .into())
        }
        Command::Homological(args) => {
            let (raw, n) = resolve(args)?;
            let ctx = HomologicalContext::new(&raw.w, n)?;
            let delta = raw.delta.as_polynomial_to(raw.delta.order().max(n));
            let sol = ctx.solve_difference(&delta)?;
            let residual_zero = ctx.residual(&sol.epsilon, &delta).is_zero();
            let by_difference = germ_core::diagonal_minus_axis(&sol.epsilon);
            let by_differential = ctx.solve_differential(&delta);
            let agree = by_difference == by_differential;
            let mut csv = output::SERIES_CSV_HEADER.to_string();
            output::series2_csv(&mut csv, "epsilon", &sol.epsilon);
            output::series1_csv(&mut csv, "s_w_difference", &by_difference);
            output::series1_csv(&mut csv, "s_w_differential", &by_differential);
            let out = Output {
                text: format!(
                    "epsilon: {}\niterations: {}\nresidual vanishes to order {n}: {residual_zero}\nS_w (difference): {}\nS_w (differential): {}\nroutes agree: {agree}\n",
                    render2(&sol.epsilon),
                    sol.iterations,
                    render1(&by_difference, "x"),
                    render1(&by_differential, "x"),
                ),
                json: with(
                    header("homological", n),
                    json!({
                        "epsilon": output::series2(&sol.epsilon),
                        "iterations": sol.iterations,
                        "residual_vanishes": residual_zero,
                        "s_w_difference": output::series1(&by_difference),
                        "s_w_differential": output::series1(&by_differential),
                        "routes_agree": agree,
                    }),
                ),
                csv,
            };
            let failure = (!agree || !residual_zero)
                .then(|| GermError::InvariantBreach("homological routes disagree or residual nonzero".into()).into());
            Ok(Outcome { output: out, failure })
        }
        Command::IzsCheck(args) => {
            let (raw, n) = resolve(args)?;
            let ctx = HomologicalContext::new(&raw.w, n)?;
            let s = ctx.check_izs(&raw.delta.as_polynomial_to(raw.delta.order().max(n)))?;
            let vanishes = s.is_zero();
            let mut csv = output::SERIES_CSV_HEADER.to_string();
            output::series1_csv(&mut csv, "s_w", &s);
            let out = Output {
                text: format!("S_w(L[y(y-x)delta]) = {}\nvanishes: {vanishes}\n", render1(&s, "x")),
                json: with(header("izs-check", n), json!({ "value": output::series1(&s), "vanishes": vanishes })),
                csv,
            };
            let failure = (!vanishes).then(|| GermError::InvariantBreach("S_w(L[y(y-x)delta]) is nonzero".into()).into());
            Ok(Outcome { output: out, failure })
        }
        Command::Dv { v, h, order, j } => {
            let n = check_order(*order)?;
            let v = input::polynomial(v, "v")?;
            let h = input::polynomial(h, "h")?;
            let (v, h) = (v.as_polynomial_to(v.order().max(n)).truncate(n), h.as_polynomial_to(h.order().max(n)).truncate(n));
            let by_antiderivative = d_v(&v, &h);
            let by_formula = d_v_formula(&v, &h);
            let agree = by_antiderivative == by_formula;
            let coeff = j.map(|j| d_v_coeff(&v, j, &h)).transpose()?;
            let mut csv = output::SERIES_CSV_HEADER.to_string();
            output::series1_csv(&mut csv, "d_v", &by_antiderivative);
            let mut text = format!("D_v(H) = {}\nroutes agree: {agree}\n", render1(&by_antiderivative, "x"));
            if let (Some(j), Some(c)) = (j, &coeff) {
                text.push_str(&format!("D_v^{j}(H) = {c}\n"));
            }
            let out = Output {
                text,
                json: with(
                    header("dv", n),
                    json!({
                        "d_v": output::series1(&by_antiderivative),
                        "routes_agree": agree,
                        "j": j,
                        "coefficient": coeff.as_ref().map_or(Value::Null, output::rational),
                    }),
                ),
                csv,
            };
            let failure = (!agree).then(|| GermError::InvariantBreach("D_v routes disagree".into()).into());
            Ok(Outcome { output: out, failure })
        }
        Command::Hilbert { k, k_range, max_k } => {
            let ks: Vec<usize> = match (k, k_range) {
                (Some(k), _) => vec![*k],
                (None, Some(r)) => parse_range(r)?,
                (None, None) => (1..=*max_k).collect(),
            };
            let reports = ks
                .par_iter()
                .map(|&k| hilbert_inverse_norm(k, *max_k))
                .collect::<Result<Vec<_>, _>>()?;
            let mut text = String::from("k norm prediction ratio\n");
            let mut csv = String::from("k,value,prediction,ratio\n");
            for r in &reports {
                let line = [fmt_float(r.inverse_spectral_norm), fmt_float(r.asymptotic_prediction), fmt_float(r.ratio)];
                text.push_str(&format!("{} {}\n", r.k, line.join(" ")));
                csv.push_str(&format!("{},{}\n", r.k, line.join(",")));
            }
            let mut m = serde_json::Map::new();
            m.insert("command".into(), json!("hilbert"));
            m.insert("reports".into(), Value::Array(reports.iter().map(output::hilbert_json).collect()));
            Ok(Output { text, json: Value::Object(m), csv }.into())
        }
        Command::Growth { spec, target, restrict, lambda, window, from_degree } => {
            let (raw, n) = resolve(spec)?;
            let restriction = match restrict {
                RestrictArg::None => Restriction::None,
                RestrictArg::X0 => Restriction::X0,
                RestrictArg::Diag => Restriction::Diagonal,
            };
            let from = from_degree.unwrap_or_else(|| default_from_degree(n));
            let build = |lambda: Option<&Rational>| -> Result<GrowthReport, CliError> {
                let maxima = match target {
                    Target::Transport => {
                        let base = input::germ_spec(&raw, n)?;
                        let spec = lambda.map_or(base.clone(), |l| base.scaled(l));
                        series1_maxima(&transport(&spec)?.a)
                    }
                    Target::Generator => {
                        let base = input::germ_spec(&raw, n)?;
                        let spec = lambda.map_or(base.clone(), |l| base.scaled(l));
                        degree_maxima(generator(&spec)?.ay(), restriction)
                    }
                    Target::WhatSeries => {
                        if restriction == Restriction::X0 && raw.w.as_polynomial_to(raw.w.order().max(n)) == Series2::one(raw.w.order().max(n)) {
                            series1_maxima(&axis_generator_w1(n))
                        } else {
                            let ctx = HomologicalContext::new(&raw.w, n)?;
                            degree_maxima(ctx.what(), restriction)
                        }
                    }
                };
                Ok(growth_report(&maxima, *window, from))
            };
            let target_name = match target {
                Target::Generator => "generator",
                Target::Transport => "transport",
                Target::WhatSeries => "what-series",
            };
            let restrict_name = match restriction {
                Restriction::None => "none",
                Restriction::X0 => "x0",
                Restriction::Diagonal => "diag",
            };
            let mut base = header("growth", n);
            base.insert("target".into(), json!(target_name));
            base.insert("restrict".into(), json!(restrict_name));
            if lambda.is_empty() {
                let r = build(None)?;
                let mut csv = String::from("n,value,root_test,window_max\n");
                output::growth_csv_rows(&mut csv, None, &r);
                Ok(Output { text: output::growth_text(&r), json: with(base, output::growth_json(&r)), csv }.into())
            } else {
                let lambdas = lambda.iter().map(|s| input::rational(s)).collect::<Result<Vec<_>, _>>()?;
                let reports = lambdas.par_iter().map(|l| build(Some(l))).collect::<Result<Vec<_>, _>>()?;
                let mut text = String::new();
                let mut csv = String::from("lambda,n,value,root_test,window_max\n");
                let mut records = Vec::new();
                for (l, r) in lambdas.iter().zip(&reports) {
                    text.push_str(&format!("lambda = {l}\n{}\n", output::growth_text(r)));
                    output::growth_csv_rows(&mut csv, Some(&l.to_string()), r);
                    records.push(with(
                        {
                            let mut m = serde_json::Map::new();
                            m.insert("lambda".into(), output::rational(l));
                            m
                        },
                        output::growth_json(r),
                    ));
                }
                base.insert("records".into(), Value::Array(records));
                Ok(Output { text, json: Value::Object(base), csv }.into())
            }
        }
        Command::Verify { order, seed, samples } => {
            let n = check_order(*order)?;
            let report = verify::run(&VerifyConfig { order: n, seed: *seed, samples: *samples })?;
            let mut text = format!("verify order={n} seed={seed} samples={samples}\n");
            let mut csv = String::from("suite,cases,passed\n");
            let mut suites = Vec::new();
            for s in &report.suites {
                let status = if s.passed() { "PASS" } else { "FAIL" };
                text.push_str(&format!("{status} {} ({} cases)", s.name, s.cases));
                if let Some(f) = &s.failure {
                    text.push_str(&format!(": {f}"));
                }
                text.push('\n');
                csv.push_str(&format!("{},{},{}\n", s.name, s.cases, s.passed()));
                suites.push(json!({ "name": s.name, "cases": s.cases, "passed": s.passed(), "failure": s.failure }));
            }
            let passed = report.passed();
            text.push_str(if passed { "all suites passed\n" } else { "some suites FAILED\n" });
            let mut m = header("verify", n);
            m.insert("seed".into(), json!(seed));
            m.insert("samples".into(), json!(samples));
            m.insert("suites".into(), Value::Array(suites));
            m.insert("passed".into(), json!(passed));
            let out = Output { text, json: Value::Object(m), csv };
            Ok(Outcome { output: out, failure: (!passed).then_some(CliError::VerifyFailed) })
        }
    }
}

fn parse_range(r: &str) -> Result<Vec<usize>, CliError> {
    let bad = || GermError::Parse(format!("k-range {r:?} must look like A..B"));
    let (a, b) = r.split_once("..").ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b {
        return Err(GermError::OutOfRange(format!("empty k-range {r}")).into());
    }
    Ok((a..=b).collect())
}

fn emit(format: Format, out: &Output) -> io::Result<()> {
    let mut stdout = io::stdout().lock();
    match format {
        Format::Text => stdout.write_all(out.text.as_bytes()),
        Format::Csv => stdout.write_all(out.csv.as_bytes()),
        Format::Json => {
            let s = serde_json::to_string_pretty(&out.json).expect("values are serializable");
            writeln!(stdout, "{s}")
        }
    }
}

fn report_failure(e: &CliError) -> ExitCode {
    let (kind, code) = e.kind_and_code();
    let record = json!({ "error": kind, "exit_code": code, "message": e.message() });
    eprintln!("{record}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(cli.format, &outcome.output) {
                return report_failure(&CliError::Io(e));
            }
            match outcome.failure {
                Some(f) => report_failure(&f),
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => report_failure(&e),
    }
}
