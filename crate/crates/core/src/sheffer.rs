//! Sheffer and Appell sequences.
//!
//! For `g` invertible and `f` delta, the Sheffer sequence `S_n ~ (g, f)` is the
//! unique polynomial sequence with `<g f^k | S_n> = n! δ(n,k)`. Its generating
//! function is `e^{x f̄(t)} / g(f̄(t)) = Σ S_k(x) t^k / k!`, which is how
//! [`sheffer_sequence`] builds it: a power series in `t` whose coefficients are
//! polynomials in `x`.

use num::{One, Zero};
use serde::Serialize;

use crate::classical;
use crate::combinat::factorial_q;
use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial};
use crate::rational::{self, Rational};
use crate::series::PowerSeries;

/// `(g, f)` with `g` invertible and `f` a delta series.
#[derive(Debug, Clone, PartialEq)]
pub struct ShefferPair {
    g: PowerSeries,
    f: PowerSeries,
}

impl ShefferPair {
    pub fn new(g: PowerSeries, f: PowerSeries) -> Result<Self> {
        if !g.is_invertible() {
            return Err(Error::Order("Sheffer pair needs g of order 0".into()));
        }
        if !f.is_delta() {
            return Err(Error::Order("Sheffer pair needs f of order 1".into()));
        }
        Ok(ShefferPair { g, f })
    }

    /// The Appell pair `(g, t)`.
    pub fn appell(g: PowerSeries) -> Result<Self> {
        let t = PowerSeries::t(g.trunc().max(1));
        Self::new(g, t)
    }

    pub fn g(&self) -> &PowerSeries {
        &self.g
    }

    pub fn f(&self) -> &PowerSeries {
        &self.f
    }

    pub fn trunc(&self) -> usize {
        self.g.trunc().min(self.f.trunc())
    }

    fn require(&self, n: usize) -> Result<()> {
        if self.trunc() < n {
            Err(Error::Truncation {
                have: self.trunc(),
                need: n,
            })
        } else {
            Ok(())
        }
    }
}

/// A polynomial basis: one of the named families or an explicit pair.
#[derive(Debug, Clone)]
pub enum Basis {
    /// `B_k(x)`, Appell for `(e^t - 1)/t`.
    Bernoulli,
    /// `B_k^(r)(x)`, Appell for `((e^t - 1)/t)^r`.
    BernoulliOrder(usize),
    /// `E_k(x)`, Appell for `(e^t + 1)/2`.
    Euler,
    Sheffer(ShefferPair),
}

impl Basis {
    pub fn name(&self) -> &'static str {
        match self {
            Basis::Bernoulli => "bernoulli",
            Basis::BernoulliOrder(_) => "bernoulli-order",
            Basis::Euler => "euler",
            Basis::Sheffer(_) => "sheffer",
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            Basis::BernoulliOrder(r) => Some(*r),
            _ => None,
        }
    }

    /// The defining pair, truncated at `trunc`.
    pub fn pair(&self, trunc: usize) -> ShefferPair {
        let appell = |g: PowerSeries| ShefferPair::appell(g).expect("named families are Appell");
        match self {
            Basis::Bernoulli => appell(PowerSeries::bernoulli_g(trunc)),
            Basis::BernoulliOrder(r) => appell(PowerSeries::bernoulli_g(trunc).pow(*r)),
            Basis::Euler => appell(PowerSeries::euler_g(trunc)),
            Basis::Sheffer(p) => ShefferPair {
                g: p.g.truncate(trunc),
                f: p.f.truncate(trunc),
            },
        }
    }

    /// The `k`-th basis polynomial.
    pub fn element(&self, k: usize) -> Result<Polynomial> {
        match self {
            Basis::Bernoulli => Ok(classical::bernoulli_poly(k)),
            Basis::BernoulliOrder(r) => classical::bernoulli_poly_order(k, *r),
            Basis::Euler => Ok(classical::euler_poly(k)),
            Basis::Sheffer(p) => sheffer_poly(p, k),
        }
    }

    fn elements(&self, upto: usize) -> Result<Vec<Polynomial>> {
        match self {
            Basis::Sheffer(p) => sheffer_sequence(p, upto),
            _ => (0..=upto).map(|k| self.element(k)).collect(),
        }
    }
}

/// Named bases compare by name and order; an explicit pair compares with
/// anything by coefficientwise equality of `g` and `f` at the common truncation.
impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Basis::Sheffer(a), b) | (b, Basis::Sheffer(a)) => b.pair(a.trunc()) == *a,
            (Basis::Bernoulli, Basis::BernoulliOrder(1)) | (Basis::BernoulliOrder(1), Basis::Bernoulli) => true,
            (a, b) => a.name() == b.name() && a.order() == b.order(),
        }
    }
}

/// Coefficients `b_0..b_n` of a polynomial in some basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisExpansion {
    pub basis: Basis,
    pub coeffs: Vec<Rational>,
}

impl BasisExpansion {
    /// `Σ b_k S_k(x)`
    pub fn recombine(&self) -> Result<Polynomial> {
        let Some(top) = self.coeffs.len().checked_sub(1) else {
            return Ok(Polynomial::zero());
        };
        let elements = self.basis.elements(top)?;
        let mut out = Polynomial::zero();
        for (b, s) in self.coeffs.iter().zip(&elements) {
            out.add_scaled(b, s);
        }
        Ok(out)
    }

    /// Coefficientwise comparison, treating missing trailing entries as zero.
    pub fn same_coeffs(&self, other: &[Rational]) -> bool {
        let n = self.coeffs.len().max(other.len());
        let zero = Rational::zero();
        (0..n).all(|k| self.coeffs.get(k).unwrap_or(&zero) == other.get(k).unwrap_or(&zero))
    }
}

/// Wire form: `{"basis": ..., "r": ..., "coeffs": ["p/q", ...]}`.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionDoc {
    pub basis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    pub coeffs: Vec<String>,
}

impl From<&BasisExpansion> for ExpansionDoc {
    fn from(e: &BasisExpansion) -> Self {
        ExpansionDoc {
            basis: e.basis.name().to_string(),
            r: e.basis.order(),
            coeffs: e.coeffs.iter().map(ToString::to_string).collect(),
        }
    }
}

/// The Appell polynomial `S_n(x) = (1/g(t)) x^n`.
pub fn appell_poly(g: &PowerSeries, n: usize) -> Result<Polynomial> {
    if !g.is_invertible() {
        return Err(Error::Order("Appell sequence needs g of order 0".into()));
    }
    if g.trunc() < n {
        return Err(Error::Truncation {
            have: g.trunc(),
            need: n,
        });
    }
    g.truncate(n).reciprocal()?.apply(&Polynomial::x_pow(n))
}

/// `S_0..=S_n` for the pair, read off `e^{x f̄(t)} / g(f̄(t))`.
pub fn sheffer_sequence(pair: &ShefferPair, n: usize) -> Result<Vec<Polynomial>> {
    pair.require(n)?;
    // f needs its linear term even when only S_0 is wanted
    let g = pair.g.truncate(n.max(1));
    let f = pair.f.truncate(n.max(1));
    let fbar = f.compositional_inverse()?;
    let weight = g.compose(&fbar)?.reciprocal()?;
    let exp = PolySeries::exp_x_times(&fbar);
    let gen = exp.mul_series(&weight);
    Ok(gen
        .0
        .into_iter()
        .take(n + 1)
        .enumerate()
        .map(|(k, c)| c.scale(&factorial_q(k)))
        .collect())
}

/// `S_n(x)` for the pair. Equals [`appell_poly`] when `f = t`.
pub fn sheffer_poly(pair: &ShefferPair, n: usize) -> Result<Polynomial> {
    Ok(sheffer_sequence(pair, n)?.pop().expect("n + 1 entries"))
}

/// `<g f^k | S_n>`, which must be `n! δ(n,k)`.
pub fn sheffer_orthogonality(pair: &ShefferPair, n: usize, k: usize) -> Result<Rational> {
    let s = sheffer_poly(pair, n)?;
    let functional = pair.g.mul(&pair.f.pow(k));
    functional.pairing(&s)
}

/// `p(x) = Σ_k <g f^k | p>/k! · S_k(x)`.
pub fn expand_in_sheffer(p: &Polynomial, basis: &Basis) -> Result<BasisExpansion> {
    let Degree::Finite(d) = p.degree() else {
        return Ok(BasisExpansion {
            basis: basis.clone(),
            coeffs: Vec::new(),
        });
    };
    let pair = basis.pair(d);
    pair.require(d)?;
    let mut functional = pair.g.clone();
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        if k > 0 {
            functional = functional.mul(&pair.f);
        }
        coeffs.push(functional.pairing(p)? / factorial_q(k));
    }
    Ok(BasisExpansion {
        basis: basis.clone(),
        coeffs,
    })
}

/// `d_k = <h | S_k>/k!` for `k <= upto`, so that `h = Σ d_k g f^k` to `t^upto`.
pub fn expand_functional(h: &PowerSeries, pair: &ShefferPair, upto: usize) -> Result<Vec<Rational>> {
    let seq = sheffer_sequence(pair, upto)?;
    seq.iter()
        .enumerate()
        .map(|(k, s)| Ok(h.pairing(s)? / factorial_q(k)))
        .collect()
}

/// Power series in `t` with polynomial-in-`x` coefficients, truncated.
struct PolySeries(Vec<Polynomial>);

impl PolySeries {
    /// `e^{x·s(t)} = Σ_j x^j s(t)^j / j!` for `s` without constant term.
    fn exp_x_times(s: &PowerSeries) -> Self {
        let n = s.trunc();
        let mut coeffs = vec![Polynomial::zero(); n + 1];
        let mut power = PowerSeries::one(n);
        let mut inv_fact = Rational::one();
        for j in 0..=n {
            if j > 0 {
                power = power.mul(s);
                inv_fact /= rational::from_usize(j);
            }
            let xj = Polynomial::monomial(inv_fact.clone(), j);
            // s^j starts at t^j
            for (m, c) in power.coeffs().iter().enumerate().skip(j) {
                coeffs[m].add_scaled(c, &xj);
            }
        }
        PolySeries(coeffs)
    }

    fn mul_series(&self, w: &PowerSeries) -> Self {
        let n = (self.0.len() - 1).min(w.trunc());
        let mut out = vec![Polynomial::zero(); n + 1];
        for (m, slot) in out.iter_mut().enumerate() {
            for i in 0..=m {
                slot.add_scaled(&w.coeffs()[i], &self.0[m - i]);
            }
        }
        PolySeries(out)
    }
}
