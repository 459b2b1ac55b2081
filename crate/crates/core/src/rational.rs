//! The exact scalar field.
//!
//! `Rational` is `num`'s big rational: always reduced, positive denominator,
//! zero stored as `0/1`. Its `Display` already renders `p/q` and drops `/1`.

use num::{BigInt, One, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = num::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` reduced. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn from_usize(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p`, `-p`, `p/q` or `-p/q` (surrounding whitespace allowed).
pub fn parse_rational(src: &str) -> Result<Rational> {
    let s = src.trim();
    let bad = || Error::Domain(format!("not a rational number: {src:?}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num_s, den_s) = match body.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num_s) || !den_s.is_none_or(digits) {
        return Err(bad());
    }
    let num = BigInt::from_str(num_s).map_err(|_| bad())?;
    let den = match den_s {
        Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Domain(format!("zero denominator in {src:?}")));
    }
    let value = Rational::new(num, den);
    Ok(if neg { -value } else { value })
}

/// LaTeX form: integers bare, fractions as `\frac{p}{q}` with the sign outside.
pub fn to_latex(q: &Rational) -> String {
    if q.is_integer() {
        return q.numer().to_string();
    }
    let sign = if q.numer() < &BigInt::zero() { "-" } else { "" };
    format!("{sign}\\frac{{{}}}{{{}}}", q.numer().magnitude(), q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let q = ratio(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(ratio(0, 7).denom(), &BigInt::one());
    }

    #[test]
    fn text_rendering() {
        assert_eq!(ratio(3, 2).to_string(), "3/2");
        assert_eq!(int(-5).to_string(), "-5");
        assert_eq!(ratio(-1, 30).to_string(), "-1/30");
        assert_eq!(zero().to_string(), "0");
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/2").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational(" -4/6 ").unwrap(), ratio(-2, 3));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("3/-2").is_err());
    }

    #[test]
    fn latex() {
        assert_eq!(to_latex(&ratio(-1, 30)), "-\\frac{1}{30}");
        assert_eq!(to_latex(&int(4)), "4");
    }
}
