//! Command dispatch for the `umbra` binary. [`run`] never touches the process
//! streams, so the whole interface can be driven from tests.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use num::{Signed, Zero};
use serde::Serialize;
use serde_json::json;

use umbra_core::classical;
use umbra_core::expr::{self, ParseError, DEFAULT_MAX_DEGREE};
use umbra_core::identities::{self, IdentityReport, IdentitySummary, Instance};
use umbra_core::rational::{self, parse_rational, Rational};
use umbra_core::series::DEFAULT_TRUNC;
use umbra_core::sheffer::{self, ExpansionDoc};
use umbra_core::{Basis, BasisExpansion, Degree, Error, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "umbra", version, about = "Exact umbral calculus for Bernoulli and Euler families")]
struct Cli {
    /// Series truncation
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNC)]
    trunc: usize,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Bernoulli,
    Euler,
    BernoulliOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    Bernoulli,
    BernoulliOrder,
    Euler,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bernoulli polynomial B_n(x), or B_n^(r)(x) with --r
    Bernoulli {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: Option<usize>,
        /// Evaluate at this rational point instead of printing the polynomial
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Euler polynomial E_n(x)
    Euler {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Table of family numbers up to index N
    Numbers {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        upto: usize,
    },
    /// Coefficients of EXPR in a family basis
    Expand {
        #[arg(long, value_enum)]
        basis: BasisArg,
        #[arg(long)]
        r: Option<usize>,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// <series | EXPR> for a named series or a coefficient list c_0,c_1,...
    Pairing {
        #[arg(long, allow_hyphen_values = true)]
        series: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Run every identity check over the given ranges
    Verify {
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_r: usize,
    },
}

/// What a command produced: the two streams and the exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }

    fn usage(stderr: String) -> Self {
        Outcome { stdout: String::new(), stderr, code: 2 }
    }
}

/// A rendered payload in the requested format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputDoc {
    pub format: Format,
    pub payload: String,
}

impl OutputDoc {
    fn new(format: Format, text: impl FnOnce() -> String, json: impl FnOnce() -> serde_json::Value, latex: impl FnOnce() -> String) -> Self {
        let payload = match format {
            Format::Text => text(),
            Format::Json => serde_json::to_string_pretty(&json()).expect("serializable"),
            Format::Latex => latex(),
        };
        OutputDoc { format, payload }
    }
}

/// Failure before any result was produced; always exit status 2.
enum UsageError {
    Parse { src: String, err: ParseError },
    Core(Error),
    Message(String),
}

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(err) => UsageError::Message(format!("error: {err}")),
            other => UsageError::Core(other),
        }
    }
}

impl UsageError {
    fn render(&self) -> String {
        match self {
            UsageError::Parse { src, err } => {
                let caret = format!("{}^", " ".repeat(err.offset()));
                format!("error: {err}\n  {src}\n  {caret}\n")
            }
            UsageError::Core(e) => format!("error: {e}\n"),
            UsageError::Message(m) => format!("{m}\n"),
        }
    }
}

fn parse_poly(src: &str) -> Result<Polynomial, UsageError> {
    let e = expr::parse_expr(src).map_err(|err| UsageError::Parse { src: src.to_string(), err })?;
    Ok(e.lower(DEFAULT_MAX_DEGREE)?)
}

fn parse_point(src: &str) -> Result<Rational, UsageError> {
    Ok(parse_rational(src)?)
}

fn strings(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(ToString::to_string).collect()
}

fn family_symbol(n: usize, r: Option<usize>, euler: bool) -> String {
    match (euler, r) {
        (true, _) => format!("E_{{{n}}}"),
        (false, Some(r)) => format!("B_{{{n}}}^{{({r})}}"),
        (false, None) => format!("B_{{{n}}}"),
    }
}

fn check_order(r: usize) -> Result<(), UsageError> {
    if r > classical::max_order() {
        return Err(UsageError::Core(Error::Domain(format!(
            "order r = {r} exceeds the configured cap {}",
            classical::max_order()
        ))));
    }
    Ok(())
}

fn family_poly(format: Format, name: &str, n: usize, r: Option<usize>, at: Option<&str>) -> Result<OutputDoc, UsageError> {
    let euler = name == "euler";
    let p = match (euler, r) {
        (true, _) => classical::euler_poly(n),
        (false, Some(r)) => {
            check_order(r)?;
            classical::bernoulli_poly_order(n, r)?
        }
        (false, None) => classical::bernoulli_poly(n),
    };
    let symbol = family_symbol(n, r, euler);
    let base = |v: serde_json::Value| {
        let mut v = v;
        v["family"] = json!(if r.is_some() { "bernoulli-order" } else { name });
        v["n"] = json!(n);
        if let Some(r) = r {
            v["r"] = json!(r);
        }
        v
    };
    Ok(match at {
        Some(src) => {
            let a = parse_point(src)?;
            let value = p.eval(&a);
            OutputDoc::new(
                format,
                || value.to_string(),
                || base(json!({ "at": a.to_string(), "value": value.to_string() })),
                || format!("{symbol}({}) = {}", rational::to_latex(&a), rational::to_latex(&value)),
            )
        }
        None => OutputDoc::new(
            format,
            || p.to_string(),
            || base(json!({ "polynomial": p.to_string(), "coeffs": strings(p.coeffs()) })),
            || format!("{symbol}(x) = {}", p.to_latex()),
        ),
    })
}

fn numbers(format: Format, family: FamilyArg, r: Option<usize>, upto: usize) -> Result<OutputDoc, UsageError> {
    let (name, values, r) = match family {
        FamilyArg::Bernoulli => ("bernoulli", (0..=upto).map(classical::bernoulli_number).collect::<Vec<_>>(), None),
        FamilyArg::Euler => ("euler", (0..=upto).map(classical::euler_number).collect(), None),
        FamilyArg::BernoulliOrder => {
            let r = r.ok_or_else(|| UsageError::Message("error: --family bernoulli-order needs --r".into()))?;
            check_order(r)?;
            let v = (0..=upto).map(|n| classical::bernoulli_number_order(n, r)).collect::<Result<Vec<_>, _>>()?;
            ("bernoulli-order", v, Some(r))
        }
    };
    let euler = family == FamilyArg::Euler;
    Ok(OutputDoc::new(
        format,
        || values.iter().enumerate().map(|(n, v)| format!("{n} {v}")).collect::<Vec<_>>().join("\n"),
        || {
            let mut v = json!({ "family": name, "numbers": strings(&values) });
            if let Some(r) = r {
                v["r"] = json!(r);
            }
            v
        },
        || {
            values
                .iter()
                .enumerate()
                .map(|(n, v)| format!("{} = {}", family_symbol(n, r, euler), rational::to_latex(v)))
                .collect::<Vec<_>>()
                .join(" \\\\\n")
        },
    ))
}

/// `Σ b_k S_k` in the expression language (text) or in LaTeX.
fn linear_combination(e: &BasisExpansion, latex: bool) -> String {
    let element = |k: usize| match (&e.basis, latex) {
        (Basis::BernoulliOrder(r), false) => format!("B({k}, {r})"),
        (Basis::BernoulliOrder(r), true) => format!("B_{{{k}}}^{{({r})}}(x)"),
        (Basis::Euler, false) => format!("E({k})"),
        (Basis::Euler, true) => format!("E_{{{k}}}(x)"),
        (_, false) => format!("B({k})"),
        (_, true) => format!("B_{{{k}}}(x)"),
    };
    let mut out = String::new();
    for (k, c) in e.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        match (out.is_empty(), c.is_negative()) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        if mag != rational::one() {
            if latex {
                let _ = write!(out, "{} ", rational::to_latex(&mag));
            } else {
                let _ = write!(out, "{mag}*");
            }
        }
        out.push_str(&element(k));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn expand(format: Format, trunc: usize, basis: BasisArg, r: Option<usize>, src: &str) -> Result<OutputDoc, UsageError> {
    let p = parse_poly(src)?;
    if let Degree::Finite(d) = p.degree() {
        if d > trunc {
            return Err(UsageError::Core(Error::Truncation { have: trunc, need: d }));
        }
    }
    let e = match basis {
        BasisArg::Bernoulli => identities::expand_bernoulli_basis(&p),
        BasisArg::Euler => sheffer::expand_in_sheffer(&p, &Basis::Euler)?,
        BasisArg::BernoulliOrder => {
            let r = r.ok_or_else(|| UsageError::Message("error: --basis bernoulli-order needs --r".into()))?;
            check_order(r)?;
            identities::expand_bernoulli_order_basis(&p, r)?
        }
    };
    Ok(OutputDoc::new(
        format,
        || linear_combination(&e, false),
        || serde_json::to_value(ExpansionDoc::from(&e)).expect("serializable"),
        || format!("{} = {}", p.to_latex(), linear_combination(&e, true)),
    ))
}

fn pairing(format: Format, trunc: usize, spec: &str, src: &str) -> Result<OutputDoc, UsageError> {
    let p = parse_poly(src)?;
    let f = expr::parse_series_spec(spec, trunc)?;
    let value = f.pairing(&p)?;
    Ok(OutputDoc::new(
        format,
        || value.to_string(),
        || json!({ "series": spec, "expr": src, "value": value.to_string() }),
        || rational::to_latex(&value),
    ))
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    seed: Option<u64>,
    ranges: &'a std::collections::BTreeMap<String, usize>,
    passed: bool,
    total: usize,
    failed: usize,
    summary: Vec<IdentitySummary>,
    failures: Vec<&'a Instance>,
}

fn verify(format: Format, max_n: usize, max_r: usize, seed: u64) -> Result<Outcome, UsageError> {
    check_order(max_r)?;
    let report: IdentityReport = identities::verify_all(max_n, max_r, seed);
    let summary = report.summary();
    let failures: Vec<&Instance> = report.failures().collect();
    let doc = OutputDoc::new(
        format,
        || {
            let mut s = String::new();
            for line in &summary {
                let tag = if line.failed == 0 { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{tag} {} ({}/{})", line.identity, line.passed, line.passed + line.failed);
            }
            for f in &failures {
                let _ = writeln!(s, "  {} [{}]: {:?}", f.identity, f.params, f.status);
            }
            let _ = write!(
                s,
                "{} instances, {} failed (max-n {max_n}, max-r {max_r}, seed {seed})",
                report.instances.len(),
                failures.len()
            );
            s
        },
        || {
            serde_json::to_value(VerifyDoc {
                seed: report.seed,
                ranges: &report.ranges,
                passed: failures.is_empty(),
                total: report.instances.len(),
                failed: failures.len(),
                summary: summary.clone(),
                failures: failures.clone(),
            })
            .expect("serializable")
        },
        || {
            let mut s = String::from("\\begin{tabular}{lrr}\nidentity & passed & failed \\\\\n\\hline\n");
            for line in &summary {
                let _ = writeln!(s, "\\texttt{{{}}} & {} & {} \\\\", line.identity, line.passed, line.failed);
            }
            s.push_str("\\end{tabular}");
            s
        },
    );
    Ok(Outcome {
        stdout: doc.payload + "\n",
        stderr: String::new(),
        code: if failures.is_empty() { 0 } else { 1 },
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(rendered),
                _ => Outcome::usage(rendered),
            };
        }
    };
    let format = cli.format;
    let result = match &cli.command {
        Command::Bernoulli { n, r, at } => family_poly(format, "bernoulli", *n, *r, at.as_deref()),
        Command::Euler { n, at } => family_poly(format, "euler", *n, None, at.as_deref()),
        Command::Numbers { family, r, upto } => numbers(format, *family, *r, *upto),
        Command::Expand { basis, r, expr } => expand(format, cli.trunc, *basis, *r, expr),
        Command::Pairing { series, expr } => pairing(format, cli.trunc, series, expr),
        Command::Verify { max_n, max_r } => {
            return verify(format, *max_n, *max_r, cli.seed.unwrap_or(identities::DEFAULT_SEED))
                .unwrap_or_else(|e| Outcome::usage(e.render()));
        }
    };
    match result {
        Ok(doc) => Outcome::ok(doc.payload + "\n"),
        Err(e) => Outcome::usage(e.render()),
    }
}
