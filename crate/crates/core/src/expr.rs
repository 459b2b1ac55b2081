//! The expression language shared by the CLI and the browser demo.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary ('*' unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := INT ('^' exponent)?          right-associative, folded
//! atom     := RATIONAL | 'x' | '(' expr ')'
//!           | 'B' '(' INT (',' INT)? ')'   B_n(x), B_n^(r)(x)
//!           | 'E' '(' INT ')'              E_n(x)
//! RATIONAL := INT ('/' INT)?
//! ```
//!
//! Implicit multiplication (`2x`) is rejected.

use std::fmt;

use num::{BigInt, One, Signed, Zero};
use thiserror::Error;

use crate::classical;
use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial};
use crate::rational::{self, Rational};
use crate::series::PowerSeries;

pub const DEFAULT_MAX_DEGREE: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative literal; negation is always an explicit `Neg`.
    Rat(Rational),
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// `B(n)` when `r` is `None`, `B(n, r)` otherwise.
    Bernoulli { n: usize, r: Option<usize> },
    Euler { n: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("at offset {offset}: {value} exceeds the maximum degree {max}")]
    Overflow { offset: usize, value: String, max: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Overflow { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num { num: String, den: Option<String> },
    X,
    B,
    E,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
    Bad(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num { num, den: None } => format!("number {num}"),
            Tok::Num { num, den: Some(d) } => format!("number {num}/{d}"),
            Tok::X => "'x'".into(),
            Tok::B => "'B'".into(),
            Tok::E => "'E'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
            Tok::Bad(c) => format!("{c:?}"),
        }
    }
}

fn lex(src: &str) -> Vec<(usize, Tok)> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_from = |start: usize| {
        let mut j = start;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'0'..=b'9' => {
                let end = digits_from(i);
                let num = src[i..end].to_string();
                i = end;
                let mut den = None;
                if bytes.get(i) == Some(&b'/') && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
                    let end = digits_from(i + 1);
                    den = Some(src[i + 1..end].to_string());
                    i = end;
                }
                out.push((start, Tok::Num { num, den }));
                continue;
            }
            b'x' => Tok::X,
            b'B' => Tok::B,
            b'E' => Tok::E,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            _ => {
                let ch = src[i..].chars().next().expect("in bounds");
                out.push((start, Tok::Bad(ch)));
                // a bad token ends lexing; the parser reports it
                out.push((src.len(), Tok::End));
                return out;
            }
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((src.len(), Tok::End));
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    expected: Vec<&'static str>,
    max_degree: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    /// Consumes `tok` if it is next; otherwise records it as expected here.
    fn eat(&mut self, tok: Tok, label: &'static str) -> bool {
        if *self.peek() == tok {
            self.bump();
            true
        } else {
            if !self.expected.contains(&label) {
                self.expected.push(label);
            }
            false
        }
    }

    fn fail<T>(&mut self, label: &'static str) -> Result<T, ParseError> {
        if !self.expected.contains(&label) {
            self.expected.push(label);
        }
        Err(ParseError::Syntax {
            offset: self.offset(),
            expected: std::mem::take(&mut self.expected),
            found: self.peek().describe(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(Tok::Plus, "'+'") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(Tok::Minus, "'-'") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(Tok::Star, "'*'") {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(Tok::Minus, "'-'") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(Tok::Caret, "'^'") {
            let at = self.offset();
            let e = self.exponent()?;
            if e > self.max_degree as u128 {
                return Err(ParseError::Overflow {
                    offset: at,
                    value: format!("exponent {e}"),
                    max: self.max_degree,
                });
            }
            return Ok(Expr::Pow(Box::new(base), e as u32));
        }
        Ok(base)
    }

    /// Folded right-associative exponent chain. Saturates instead of wrapping,
    /// so overflow is caught by the caller's degree check.
    fn exponent(&mut self) -> Result<u128, ParseError> {
        let base = self.integer("exponent")?;
        if self.eat(Tok::Caret, "'^'") {
            let e = self.exponent()?;
            return Ok(saturating_pow(base, e));
        }
        Ok(base)
    }

    fn integer(&mut self, label: &'static str) -> Result<u128, ParseError> {
        match self.peek().clone() {
            Tok::Num { num, den: None } => {
                self.bump();
                Ok(num.parse::<u128>().unwrap_or(u128::MAX))
            }
            _ => self.fail(label),
        }
    }

    fn family_arg(&mut self) -> Result<usize, ParseError> {
        let at = self.offset();
        let v = self.integer("nonnegative integer")?;
        if v > self.max_degree as u128 {
            return Err(ParseError::Overflow {
                offset: at,
                value: format!("index {v}"),
                max: self.max_degree,
            });
        }
        Ok(v as usize)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num { num, den } => {
                self.bump();
                let n: BigInt = num.parse().expect("lexer yields digits");
                let d: BigInt = den.map_or_else(BigInt::one, |d| d.parse().expect("lexer yields digits"));
                if d.is_zero() {
                    // point at the denominator
                    return Err(ParseError::Syntax {
                        offset: self.toks[self.pos - 1].0 + num.len() + 1,
                        expected: vec!["nonzero denominator"],
                        found: "0".into(),
                    });
                }
                Ok(Expr::Rat(Rational::new(n, d)))
            }
            Tok::X => {
                self.bump();
                Ok(Expr::X)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !self.eat(Tok::RParen, "')'") {
                    return self.fail("')'");
                }
                Ok(inner)
            }
            Tok::B => {
                self.bump();
                if !self.eat(Tok::LParen, "'('") {
                    return self.fail("'('");
                }
                let n = self.family_arg()?;
                let r = if self.eat(Tok::Comma, "','") {
                    Some(self.family_arg()?)
                } else {
                    None
                };
                if !self.eat(Tok::RParen, "')'") {
                    return self.fail("')'");
                }
                Ok(Expr::Bernoulli { n, r })
            }
            Tok::E => {
                self.bump();
                if !self.eat(Tok::LParen, "'('") {
                    return self.fail("'('");
                }
                let n = self.family_arg()?;
                if !self.eat(Tok::RParen, "')'") {
                    return self.fail("')'");
                }
                Ok(Expr::Euler { n })
            }
            _ => self.fail("operand"),
        }
    }
}

fn saturating_pow(base: u128, e: u128) -> u128 {
    match u32::try_from(e) {
        Ok(e) => base.checked_pow(e).unwrap_or(u128::MAX),
        Err(_) if base <= 1 => base,
        Err(_) => u128::MAX,
    }
}

/// Parses with the default degree cap.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    parse_expr_with(src, DEFAULT_MAX_DEGREE)
}

pub fn parse_expr_with(src: &str, max_degree: usize) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(src),
        pos: 0,
        expected: Vec::new(),
        max_degree,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail("end of input");
    }
    Ok(e)
}

/// Parse and lower in one step.
pub fn parse_polynomial(src: &str) -> Result<Polynomial> {
    parse_expr(src)?.lower(DEFAULT_MAX_DEGREE)
}

impl Expr {
    /// Evaluates the tree to a polynomial, resolving family atoms through the
    /// classical caches. Fails if any intermediate degree exceeds `max_degree`.
    pub fn lower(&self, max_degree: usize) -> Result<Polynomial> {
        let check = |p: Polynomial| match p.degree() {
            Degree::Finite(d) if d > max_degree => Err(Error::Domain(format!(
                "degree {d} exceeds the maximum degree {max_degree}"
            ))),
            _ => Ok(p),
        };
        match self {
            Expr::Rat(q) => Ok(Polynomial::constant(q.clone())),
            Expr::X => check(Polynomial::x()),
            Expr::Neg(a) => Ok(-a.lower(max_degree)?),
            Expr::Add(a, b) => Ok(a.lower(max_degree)? + b.lower(max_degree)?),
            Expr::Sub(a, b) => Ok(a.lower(max_degree)? - b.lower(max_degree)?),
            Expr::Mul(a, b) => check(a.lower(max_degree)? * b.lower(max_degree)?),
            Expr::Pow(a, e) => {
                let base = a.lower(max_degree)?;
                if let Degree::Finite(d) = base.degree() {
                    if (d as u128) * (*e as u128) > max_degree as u128 {
                        return Err(Error::Domain(format!(
                            "degree {d}*{e} exceeds the maximum degree {max_degree}"
                        )));
                    }
                }
                Ok(base.pow(*e))
            }
            Expr::Bernoulli { n, r: None } => check(classical::bernoulli_poly(*n)),
            Expr::Bernoulli { n, r: Some(r) } => check(classical::bernoulli_poly_order(*n, *r)?),
            Expr::Euler { n } => check(classical::euler_poly(*n)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Rat(q) if !q.is_integer() || q.is_negative() => 4,
            _ => 5,
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Prints with the minimum parentheses needed to re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Rat(q) => write!(f, "{q}"),
            Expr::X => f.write_str("x"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_child(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_child(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write_child(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_child(f, 2)?;
                f.write_str("*")?;
                b.write_child(f, 3)
            }
            Expr::Pow(a, e) => {
                a.write_child(f, 5)?;
                write!(f, "^{e}")
            }
            Expr::Bernoulli { n, r: None } => write!(f, "B({n})"),
            Expr::Bernoulli { n, r: Some(r) } => write!(f, "B({n}, {r})"),
            Expr::Euler { n } => write!(f, "E({n})"),
        }
    }
}

/// Builds a series from a CLI-style description, truncated at `trunc`.
///
/// Named series, each optionally followed by `^k`:
///
/// | name                   | series            |
/// |------------------------|-------------------|
/// | `one`                  | `1`               |
/// | `t`                    | `t`               |
/// | `exp[:y]`              | `e^{yt}`          |
/// | `exp-minus-one[:y]`    | `e^{yt} - 1`      |
/// | `integral[:y]`         | `(e^{yt} - 1)/t`  |
/// | `bernoulli-g`          | `(e^t - 1)/t`     |
/// | `bernoulli`            | `t/(e^t - 1)`     |
/// | `euler-g`              | `(e^t + 1)/2`     |
/// | `euler`                | `2/(e^t + 1)`     |
/// | `log1p`                | `log(1 + t)`      |
///
/// Anything else is read as a comma-separated list of ordinary coefficients
/// `c_0, c_1, ...` (optionally in brackets), i.e. a polynomial in `t`, so the
/// omitted higher coefficients are genuinely zero.
pub fn parse_series_spec(spec: &str, trunc: usize) -> Result<PowerSeries> {
    let s = spec.trim();
    let (body, power) = match s.rsplit_once('^') {
        Some((b, p)) if !b.contains(',') && !b.starts_with('[') => {
            let k = p
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::Domain(format!("bad series power in {spec:?}")))?;
            (b.trim(), k)
        }
        _ => (s, 1),
    };
    let (name, arg) = match body.split_once(':') {
        Some((n, a)) => (n, Some(rational::parse_rational(a)?)),
        None => (body, None),
    };
    let y = arg.clone().unwrap_or_else(rational::one);
    let named = match name {
        "one" => Some(PowerSeries::one(trunc)),
        "t" => Some(PowerSeries::t(trunc)),
        "exp" => Some(PowerSeries::exp_linear(&y, trunc)),
        "exp-minus-one" => Some(PowerSeries::exp_linear_minus_one(&y, trunc)),
        "integral" => Some(PowerSeries::integral_functional(&y, trunc)),
        "bernoulli-g" => Some(PowerSeries::bernoulli_g(trunc)),
        "bernoulli" => Some(PowerSeries::bernoulli_g(trunc).reciprocal()?),
        "euler-g" => Some(PowerSeries::euler_g(trunc)),
        "euler" => Some(PowerSeries::euler_g(trunc).reciprocal()?),
        "log1p" => Some(PowerSeries::log1p(trunc)),
        _ => None,
    };
    if let Some(series) = named {
        let takes_arg = matches!(name, "exp" | "exp-minus-one" | "integral");
        if arg.is_some() && !takes_arg {
            return Err(Error::Domain(format!("series {name:?} takes no argument")));
        }
        return Ok(series.pow(power));
    }
    let list = s.trim_start_matches('[').trim_end_matches(']');
    let coeffs = list
        .split(',')
        .map(rational::parse_rational)
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::Domain(format!("unknown series {spec:?}")))?;
    if coeffs.len() > trunc + 1 && coeffs[trunc + 1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::Truncation {
            have: trunc,
            need: coeffs.len() - 1,
        });
    }
    Ok(PowerSeries::from_fn(trunc, |k| coeffs.get(k).cloned().unwrap_or_else(Rational::zero)))
}
