//! Bernoulli, higher-order Bernoulli and Euler numbers and polynomials.
//!
//! Each family is Appell for an invertible series `g`:
//!
//! | family        | `g(t)`              |
//! |---------------|---------------------|
//! | `B_n(x)`      | `(e^t - 1)/t`       |
//! | `B_n^(r)(x)`  | `((e^t - 1)/t)^r`   |
//! | `E_n(x)`      | `(e^t + 1)/2`       |
//!
//! The numbers are the EGF coefficients of `1/g`, computed on the series side
//! and cached in a [`FamilyTable`] per family. The classical recurrences and
//! the multinomial convolution are kept alongside as independent routes.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num::Zero;
use once_cell::sync::Lazy;

use crate::combinat::{binomial_q, for_each_composition, multinomial};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::{self, Rational};
use crate::series::PowerSeries;

pub const DEFAULT_MAX_ORDER: usize = 16;

static MAX_ORDER: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_ORDER);

/// Raises or lowers the cap on `r` for the order-`r` family.
pub fn set_max_order(r: usize) {
    MAX_ORDER.store(r, Ordering::Relaxed);
}

pub fn max_order() -> usize {
    MAX_ORDER.load(Ordering::Relaxed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Bernoulli,
    Euler,
    BernoulliOrder(usize),
}

impl Family {
    /// The invertible series the family is Appell for.
    pub fn g(self, trunc: usize) -> PowerSeries {
        match self {
            Family::Bernoulli => PowerSeries::bernoulli_g(trunc),
            Family::Euler => PowerSeries::euler_g(trunc),
            Family::BernoulliOrder(r) => PowerSeries::bernoulli_g(trunc).pow(r),
        }
    }
}

/// Memoized numbers and polynomials of one family, grown on demand.
#[derive(Debug, Clone)]
pub struct FamilyTable {
    family: Family,
    // 1/g(t); numbers[n] = n! [t^n] generator
    generator: PowerSeries,
    numbers: Vec<Rational>,
    entries: Vec<Polynomial>,
}

impl FamilyTable {
    pub fn new(family: Family) -> Self {
        let mut table = FamilyTable {
            family,
            generator: PowerSeries::one(0),
            numbers: vec![rational::one()],
            entries: Vec::new(),
        };
        table.grow(16);
        table
    }

    pub fn family(&self) -> Family {
        self.family
    }

    fn grow(&mut self, n: usize) {
        if n < self.numbers.len() {
            return;
        }
        let trunc = n.max(2 * self.numbers.len());
        self.generator = self
            .family
            .g(trunc)
            .reciprocal()
            .expect("family series are invertible");
        self.numbers = (0..=trunc)
            .map(|k| self.generator.egf_coeff(k).expect("within truncation"))
            .collect();
    }

    pub fn number(&mut self, n: usize) -> Rational {
        self.grow(n);
        self.numbers[n].clone()
    }

    pub fn poly(&mut self, n: usize) -> Polynomial {
        self.grow(n);
        while self.entries.len() <= n {
            let m = self.entries.len();
            let p = match self.family {
                // Σ_l C(m,l) N_{m-l} x^l
                Family::Bernoulli | Family::Euler => Polynomial::new(
                    (0..=m)
                        .map(|l| binomial_q(m, l) * &self.numbers[m - l])
                        .collect(),
                ),
                // (1/g(t)) x^m
                Family::BernoulliOrder(_) => self
                    .generator
                    .truncate(m)
                    .apply(&Polynomial::x_pow(m))
                    .expect("generator truncation covers degree"),
            };
            self.entries.push(p);
        }
        self.entries[n].clone()
    }
}

static TABLES: Lazy<Mutex<HashMap<Family, FamilyTable>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn with_table<T>(family: Family, f: impl FnOnce(&mut FamilyTable) -> T) -> T {
    let mut tables = TABLES.lock().unwrap_or_else(|e| e.into_inner());
    let table = tables
        .entry(family)
        .or_insert_with(|| FamilyTable::new(family));
    f(table)
}

fn check_order(r: usize) -> Result<()> {
    let cap = max_order();
    if r > cap {
        return Err(Error::Domain(format!("order r = {r} exceeds the configured cap {cap}")));
    }
    Ok(())
}

/// `B_n`
pub fn bernoulli_number(n: usize) -> Rational {
    with_table(Family::Bernoulli, |t| t.number(n))
}

/// `B_n(x) = Σ_l C(n,l) B_{n-l} x^l`
pub fn bernoulli_poly(n: usize) -> Polynomial {
    with_table(Family::Bernoulli, |t| t.poly(n))
}

/// `E_n`
pub fn euler_number(n: usize) -> Rational {
    with_table(Family::Euler, |t| t.number(n))
}

/// `E_n(x) = Σ_l C(n,l) E_{n-l} x^l`
pub fn euler_poly(n: usize) -> Polynomial {
    with_table(Family::Euler, |t| t.poly(n))
}

/// `B_n^(r)(x) = (t/(e^t - 1))^r x^n`. `r = 0` gives `x^n`, `r = 1` gives `B_n(x)`.
pub fn bernoulli_poly_order(n: usize, r: usize) -> Result<Polynomial> {
    check_order(r)?;
    Ok(with_table(Family::BernoulliOrder(r), |t| t.poly(n)))
}

/// `B_n^(r) = B_n^(r)(0)`
pub fn bernoulli_number_order(n: usize, r: usize) -> Result<Rational> {
    check_order(r)?;
    Ok(with_table(Family::BernoulliOrder(r), |t| t.number(n)))
}

/// `B_n^(r) = Σ_{l_1+..+l_r=n} (n; l_1..l_r) B_{l_1} ... B_{l_r}`, summed over
/// every composition. The independent route for [`bernoulli_number_order`].
pub fn bernoulli_number_order_multinomial(n: usize, r: usize) -> Result<Rational> {
    if r == 0 {
        return Err(Error::Domain("the multinomial form needs r >= 1".into()));
    }
    let b: Vec<Rational> = (0..=n).map(bernoulli_number).collect();
    let mut total = Rational::zero();
    for_each_composition(n, r, |parts| {
        let mut term = Rational::from_integer(multinomial(parts));
        for &l in parts {
            term *= &b[l];
        }
        total += term;
    });
    Ok(total)
}

/// `B_0..=B_upto` from `(B + 1)^n - B^n = δ(1,n)`, i.e. `Σ_{k<n} C(n,k) B_k = δ(1,n)`.
pub fn bernoulli_numbers_by_recurrence(upto: usize) -> Vec<Rational> {
    let mut b = vec![rational::one()];
    for m in 1..=upto {
        // solve the n = m + 1 relation for B_m
        let n = m + 1;
        let acc: Rational = b.iter().enumerate().map(|(k, bk)| binomial_q(n, k) * bk).sum();
        b.push(-acc / rational::from_usize(n));
    }
    b
}

/// `E_0..=E_upto` from `E_n(1) + E_n = 2 δ(0,n)`, i.e.
/// `2 E_n + Σ_{k<n} C(n,k) E_k = 2 δ(0,n)`.
pub fn euler_numbers_by_recurrence(upto: usize) -> Vec<Rational> {
    let mut e = vec![rational::one()];
    for n in 1..=upto {
        let acc: Rational = e.iter().enumerate().map(|(k, ek)| binomial_q(n, k) * ek).sum();
        e.push(-acc / rational::int(2));
    }
    e
}

/// One named clause of an identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct IntegralCheck {
    pub n: usize,
    pub r: usize,
    pub y: Rational,
    pub clauses: Vec<Clause>,
}

impl IntegralCheck {
    pub fn all_hold(&self) -> bool {
        self.clauses.iter().all(|c| c.holds)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.clauses.iter().filter(|c| !c.holds).map(|c| c.name).collect()
    }
}

/// Checks, for `B_n^(r)` and a rational `y`:
///
/// * `∫_x^{x+y} B_n^(r)(u) du = (B_{n+1}^(r)(x+y) - B_{n+1}^(r)(x)) / (n+1)` as polynomials in `x`
/// * the same integral equals `((e^{yt} - 1)/t) B_n^(r)(x)`
/// * `<(e^{yt} - 1)/t | B_n^(r)> = ∫_0^y B_n^(r)(u) du`
/// * `<e^{yt} - 1 | B_{n+1}^(r)/(n+1)>` equals the same integral
/// * when `y = 1` and `r >= 1`: the operator form is `B_n^(r-1)(x)` and `∫_0^1 B_n^(r) = B_n^(r-1)`
pub fn family_integral_identity_check(n: usize, r: usize, y: &Rational) -> Result<IntegralCheck> {
    let p = bernoulli_poly_order(n, r)?;
    let next = bernoulli_poly_order(n + 1, r)?;
    let inv = rational::from_usize(n + 1).recip();

    let anti = p.antiderivative();
    let moving_integral = &anti.shift(y) - &anti;
    let closed_form = (&next.shift(y) - &next).scale(&inv);
    let integral_op = PowerSeries::integral_functional(y, n);
    let operator_form = integral_op.apply(&p)?;

    let integral_0y = p.definite_integral(&Rational::zero(), y);
    let pairing_form = integral_op.pairing(&p)?;
    let evaluation_form = PowerSeries::exp_linear_minus_one(y, n + 1).pairing(&next.scale(&inv))?;

    let mut clauses = vec![
        Clause { name: "closed-form", holds: moving_integral == closed_form },
        Clause { name: "operator-form", holds: operator_form == moving_integral },
        Clause { name: "pairing-form", holds: pairing_form == integral_0y },
        Clause { name: "evaluation-form", holds: evaluation_form == integral_0y },
    ];
    if y == &rational::one() && r >= 1 {
        let lower = bernoulli_poly_order(n, r - 1)?;
        clauses.push(Clause { name: "unit-operator", holds: operator_form == lower });
        clauses.push(Clause {
            name: "unit-integral",
            holds: integral_0y == lower.eval(&Rational::zero()),
        });
    }
    Ok(IntegralCheck { n, r, y: y.clone(), clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn bernoulli_spot_values() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), ratio(-1, 2));
        assert_eq!(bernoulli_number(3), int(0));
        assert_eq!(bernoulli_number(12), ratio(-691, 2730));
        assert_eq!(bernoulli_poly(4).to_string(), "x^4 - 2*x^3 + x^2 - 1/30");
    }

    #[test]
    fn euler_spot_values() {
        assert_eq!(euler_number(0), int(1));
        assert_eq!(euler_number(1), ratio(-1, 2));
        assert_eq!(euler_poly(2), Polynomial::new(vec![int(0), int(-1), int(1)]));
        assert_eq!(euler_numbers_by_recurrence(2), vec![int(1), ratio(-1, 2), int(0)]);
    }

    #[test]
    fn order_spot_values() {
        for n in 0..6 {
            assert_eq!(bernoulli_poly_order(n, 0).unwrap(), Polynomial::x_pow(n));
        }
        for n in 0..=10 {
            assert_eq!(bernoulli_poly_order(n, 1).unwrap(), bernoulli_poly(n));
        }
        assert_eq!(bernoulli_number_order(2, 2).unwrap(), ratio(5, 6));
        assert_eq!(bernoulli_number_order_multinomial(2, 2).unwrap(), ratio(5, 6));
        assert!(bernoulli_number_order(2, DEFAULT_MAX_ORDER + 1).is_err());
        assert!(bernoulli_number_order_multinomial(2, 0).is_err());
    }

    #[test]
    fn multinomial_degenerate_cases() {
        for n in 0..8 {
            assert_eq!(bernoulli_number_order_multinomial(n, 1).unwrap(), bernoulli_number(n));
        }
        for r in 1..5 {
            assert_eq!(bernoulli_number_order_multinomial(0, r).unwrap(), int(1));
        }
    }

    #[test]
    fn tables_are_monic_and_hit_their_numbers() {
        for family in [Family::Bernoulli, Family::Euler, Family::BernoulliOrder(3)] {
            let mut table = FamilyTable::new(family);
            for n in 0..=20 {
                let p = table.poly(n);
                assert!(p.is_monic(), "{family:?} n={n}");
                assert_eq!(p.degree(), crate::poly::Degree::Finite(n));
                assert_eq!(p.eval(&Rational::zero()), table.number(n));
            }
        }
    }

    #[test]
    fn table_grows_past_initial_truncation() {
        let mut table = FamilyTable::new(Family::Bernoulli);
        assert_eq!(table.number(40), bernoulli_numbers_by_recurrence(40)[40]);
    }

    #[test]
    fn integral_checks() {
        let c = family_integral_identity_check(3, 1, &int(1)).unwrap();
        assert!(c.all_hold(), "{:?}", c.failed());
        assert_eq!(c.clauses.len(), 6);
        assert_eq!(bernoulli_poly(3).definite_integral(&int(0), &int(1)), int(0));

        let y = ratio(-7, 3);
        let c = family_integral_identity_check(0, 2, &y).unwrap();
        assert!(c.all_hold());
        assert_eq!(bernoulli_poly_order(0, 2).unwrap().definite_integral(&int(0), &y), y);

        let c = family_integral_identity_check(4, 3, &ratio(1, 2)).unwrap();
        assert!(c.all_hold(), "{:?}", c.failed());
    }

    #[test]
    fn concurrent_access_is_consistent() {
        let handles: Vec<_> = (0..4)
            .map(|i| std::thread::spawn(move || bernoulli_poly_order(10 + i, 2).unwrap()))
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            let p = h.join().unwrap();
            assert_eq!(p, bernoulli_poly_order(10 + i, 2).unwrap());
        }
    }
}
