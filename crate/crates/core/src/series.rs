//! Truncated formal power series in `t`, read both as a ring element and as a
//! linear functional on polynomials.
//!
//! Storage holds ordinary coefficients: `f(t) = Σ c_k t^k + O(t^(N+1))`. The
//! exponential-generating-function view `f(t) = Σ a_k t^k / k!` is recovered at
//! the boundary as `a_k = k! c_k`, which is exactly what the pairing returns on
//! monomials: `<f | x^k> = k! c_k`.

use std::fmt;

use num::{One, Signed, Zero};

use crate::combinat::{factorial_q, for_each_composition, multinomial};
use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial};
use crate::rational::{self, Rational};

/// Truncation used when the caller does not pick one.
pub const DEFAULT_TRUNC: usize = 64;

#[derive(Debug, Clone)]
pub struct PowerSeries {
    // invariant: non-empty; trunc = len - 1
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Series with the given coefficients `c_0..c_N`, truncated at `N = len - 1`.
    ///
    /// Panics on an empty vector: a series always knows at least `c_0`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least c_0");
        PowerSeries { coeffs }
    }

    /// `c_k = gen(k)` for `k = 0..=trunc`.
    pub fn from_fn(trunc: usize, gen: impl FnMut(usize) -> Rational) -> Self {
        PowerSeries {
            coeffs: (0..=trunc).map(gen).collect(),
        }
    }

    pub fn zero(trunc: usize) -> Self {
        Self::from_fn(trunc, |_| Rational::zero())
    }

    pub fn constant(c: Rational, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(Rational::one(), trunc)
    }

    /// `t^k`, which is zero to truncation when `k > trunc`.
    pub fn t_pow(k: usize, trunc: usize) -> Self {
        Self::from_fn(trunc, |i| if i == k { Rational::one() } else { Rational::zero() })
    }

    pub fn t(trunc: usize) -> Self {
        Self::t_pow(1, trunc)
    }

    /// `e^{yt}`: `c_k = y^k / k!`.
    pub fn exp_linear(y: &Rational, trunc: usize) -> Self {
        let mut c = Rational::one();
        Self::from_fn(trunc, |k| {
            if k > 0 {
                c = &c * y / rational::from_usize(k);
            }
            c.clone()
        })
    }

    /// `e^{yt} - 1`, the evaluation-difference functional `p(y) - p(0)`.
    pub fn exp_linear_minus_one(y: &Rational, trunc: usize) -> Self {
        let mut s = Self::exp_linear(y, trunc);
        s.coeffs[0] = Rational::zero();
        s
    }

    /// `(e^{yt} - 1)/t`, the integral functional `∫_0^y`. Built coefficientwise,
    /// `c_k = y^(k+1) / (k+1)!`.
    pub fn integral_functional(y: &Rational, trunc: usize) -> Self {
        let e = Self::exp_linear(y, trunc + 1);
        Self::from_fn(trunc, |k| e.coeffs[k + 1].clone())
    }

    /// `(e^t - 1)/t`, the Bernoulli invertible series. `c_k = 1/(k+1)!`.
    pub fn bernoulli_g(trunc: usize) -> Self {
        Self::integral_functional(&Rational::one(), trunc)
    }

    /// `(e^t + 1)/2`, the Euler invertible series.
    pub fn euler_g(trunc: usize) -> Self {
        let mut s = Self::exp_linear(&Rational::one(), trunc).scale(&rational::ratio(1, 2));
        s.coeffs[0] = Rational::one();
        s
    }

    /// `log(1 + t) = t - t^2/2 + t^3/3 - ...`
    pub fn log1p(trunc: usize) -> Self {
        Self::from_fn(trunc, |k| match k {
            0 => Rational::zero(),
            _ => {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                rational::ratio(sign, k as i64)
            }
        })
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Ordinary coefficient of `t^k`. `None` past the truncation.
    pub fn coeff(&self, k: usize) -> Option<&Rational> {
        self.coeffs.get(k)
    }

    /// The exponential coefficient `a_k = k! c_k`.
    pub fn egf_coeff(&self, k: usize) -> Option<Rational> {
        self.coeff(k).map(|c| c * factorial_q(k))
    }

    /// Smallest `k` with `c_k != 0`, or `None` when every retained coefficient
    /// vanishes.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_invertible(&self) -> bool {
        self.order() == Some(0)
    }

    pub fn is_delta(&self) -> bool {
        self.order() == Some(1)
    }

    /// Drops coefficients above `t^n`. Never extends.
    pub fn truncate(&self, n: usize) -> Self {
        let keep = n.min(self.trunc()) + 1;
        PowerSeries {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        Self::from_fn(n, |k| &self.coeffs[k] + &other.coeffs[k])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        Self::from_fn(n, |k| &self.coeffs[k] - &other.coeffs[k])
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.trunc(), |k| -&self.coeffs[k])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.trunc(), |k| &self.coeffs[k] * c)
    }

    /// Cauchy product at the shorter truncation.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.trunc().min(other.trunc());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut result = Self::one(self.trunc());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiplicative inverse of an order-0 series:
    /// `h_0 = 1/c_0`, `h_k = -(1/c_0) Σ_{j=1..k} c_j h_{k-j}`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Order(format!(
                "reciprocal needs an invertible series (order 0), got order {}",
                describe_order(self.order())
            )));
        }
        let inv0 = c0.recip();
        let n = self.trunc();
        let mut h: Vec<Rational> = Vec::with_capacity(n + 1);
        h.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let cj = &self.coeffs[j];
                if !cj.is_zero() {
                    acc += cj * &h[k - j];
                }
            }
            h.push(-acc * &inv0);
        }
        Ok(PowerSeries { coeffs: h })
    }

    /// `self(inner(t))`, by Horner accumulation over powers of `inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::Composition);
        }
        let n = self.trunc().min(inner.trunc());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// The compositional inverse `f̄` of a delta series, with
    /// `f(f̄(t)) = f̄(f(t)) = t` to truncation.
    ///
    /// Coefficients come from Lagrange inversion:
    /// `[t^n] f̄ = (1/n) [t^(n-1)] (t/f(t))^n`.
    pub fn compositional_inverse(&self) -> Result<Self> {
        if !self.is_delta() {
            return Err(Error::Order(format!(
                "compositional inverse needs a delta series (order 1), got order {}",
                describe_order(self.order())
            )));
        }
        let n = self.trunc();
        // f = t·φ, φ invertible, known to t^(n-1)
        let phi = PowerSeries {
            coeffs: self.coeffs[1..].to_vec(),
        };
        let psi = phi.reciprocal()?;
        let mut out = vec![Rational::zero(); n + 1];
        let mut power = psi.clone();
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            if k > 1 {
                power = power.mul(&psi);
            }
            *slot = &power.coeffs[k - 1] / rational::from_usize(k);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `f(t) p(x) = Σ_k c_k p^(k)(x)`: `t` acts as `d/dx`.
    ///
    /// Requires `trunc >= deg p`; a shorter series would drop nonzero terms.
    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        let Degree::Finite(d) = p.degree() else {
            return Ok(Polynomial::zero());
        };
        self.require_trunc(d)?;
        let mut out = Polynomial::zero();
        let mut deriv = p.clone();
        for k in 0..=d {
            if k > 0 {
                deriv = deriv.derivative(1);
            }
            out.add_scaled(&self.coeffs[k], &deriv);
        }
        Ok(out)
    }

    /// `<f(t) | p(x)> = Σ_n p_n · n! · c_n`, the constant term of `f(t) p(x)`.
    pub fn pairing(&self, p: &Polynomial) -> Result<Rational> {
        if let Degree::Finite(d) = p.degree() {
            self.require_trunc(d)?;
        }
        let mut fact = Rational::one();
        let mut acc = Rational::zero();
        for (n, pn) in p.coeffs().iter().enumerate() {
            if n > 0 {
                fact *= rational::from_usize(n);
            }
            if !pn.is_zero() {
                acc += pn * &fact * &self.coeffs[n];
            }
        }
        Ok(acc)
    }

    fn require_trunc(&self, need: usize) -> Result<()> {
        if self.trunc() < need {
            Err(Error::Truncation {
                have: self.trunc(),
                need,
            })
        } else {
            Ok(())
        }
    }
}

fn describe_order(order: Option<usize>) -> String {
    order.map_or_else(|| "zero-to-truncation".into(), |k| k.to_string())
}

/// `<f_1 ... f_m | x^n>` by the multinomial sum over all compositions
/// `i_1 + ... + i_m = n` of `(n; i_1..i_m) Π <f_j | x^(i_j)>`. Never forms the
/// product series, so it checks `pairing` independently.
pub fn pairing_multinomial(fs: &[PowerSeries], n: usize) -> Result<Rational> {
    if let Some(short) = fs.iter().find(|f| f.trunc() < n) {
        return Err(Error::Truncation {
            have: short.trunc(),
            need: n,
        });
    }
    // <f_j | x^i> = i! c_i
    let moments: Vec<Vec<Rational>> = fs
        .iter()
        .map(|f| (0..=n).map(|i| f.egf_coeff(i).expect("checked truncation")).collect())
        .collect();
    let mut total = Rational::zero();
    for_each_composition(n, fs.len(), |parts| {
        let mut term = Rational::from_integer(multinomial(parts));
        for (moment, &i) in moments.iter().zip(parts) {
            if term.is_zero() {
                return;
            }
            term *= &moment[i];
        }
        total += term;
    });
    Ok(total)
}

/// Coefficientwise equality up to the common truncation. Not transitive across
/// differing truncations, so only `PartialEq`.
impl PartialEq for PowerSeries {
    fn eq(&self, other: &Self) -> bool {
        let n = self.trunc().min(other.trunc());
        self.coeffs[..=n] == other.coeffs[..=n]
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    match k {
                        1 => f.write_str("t")?,
                        _ => write!(f, "t^{k}")?,
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.trunc() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn s(cs: &[(i64, i64)]) -> PowerSeries {
        PowerSeries::from_coeffs(cs.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    // Bernoulli numbers from (B+1)^n - B^n = δ(1,n), i.e.
    // Σ_{k<n} C(n,k) B_k = δ(1,n). Independent of the series code.
    fn bernoulli_by_recurrence(upto: usize) -> Vec<Rational> {
        let mut b: Vec<Rational> = vec![int(1)];
        for n in 2..=upto + 1 {
            let mut acc = Rational::zero();
            for (k, bk) in b.iter().enumerate() {
                acc += crate::combinat::binomial_q(n, k) * bk;
            }
            b.push(-acc / rational::from_usize(n));
        }
        b
    }

    #[test]
    fn orders() {
        assert_eq!(PowerSeries::t(8).order(), Some(1));
        assert_eq!(s(&[(1, 1), (1, 1)]).order(), Some(0));
        assert_eq!(PowerSeries::zero(8).order(), None);
    }

    #[test]
    fn products() {
        let f = s(&[(2, 1), (3, 4), (-1, 5)]);
        assert_eq!(PowerSeries::one(5).mul(&f), f);
        assert_eq!(PowerSeries::t(6).mul(&PowerSeries::t(6)), PowerSeries::t_pow(2, 6));
        let g = PowerSeries::bernoulli_g(16);
        assert_eq!(g.mul(&g.reciprocal().unwrap()), PowerSeries::one(16));
        assert_eq!(f.mul(&PowerSeries::t(1)).trunc(), 1);
    }

    #[test]
    fn reciprocals() {
        assert_eq!(PowerSeries::one(6).reciprocal().unwrap(), PowerSeries::one(6));
        let geo = s(&[(1, 1), (-1, 1), (0, 1), (0, 1), (0, 1)]).reciprocal().unwrap();
        assert_eq!(geo, PowerSeries::from_fn(4, |_| int(1)));
        // EGF coefficients of 1/((e^t - 1)/t) are the Bernoulli numbers
        let recip = PowerSeries::bernoulli_g(20).reciprocal().unwrap();
        let oracle = bernoulli_by_recurrence(20);
        for (k, b) in oracle.iter().enumerate() {
            assert_eq!(&recip.egf_coeff(k).unwrap(), b, "B_{k}");
        }
        assert!(matches!(PowerSeries::t(4).reciprocal(), Err(Error::Order(_))));
    }

    #[test]
    fn exponentials() {
        assert_eq!(PowerSeries::exp_linear(&int(0), 5), PowerSeries::one(5));
        assert_eq!(
            PowerSeries::exp_linear(&int(1), 3),
            s(&[(1, 1), (1, 1), (1, 2), (1, 6)])
        );
        let y = ratio(-3, 2);
        for n in 0..10 {
            let e = PowerSeries::exp_linear(&y, n);
            assert_eq!(e.pairing(&Polynomial::x_pow(n)).unwrap(), num::pow(y.clone(), n));
        }
    }

    #[test]
    fn composition() {
        let f = s(&[(1, 3), (2, 1), (-1, 7), (5, 2)]);
        assert_eq!(f.compose(&PowerSeries::t(3)).unwrap(), f);
        let t2 = PowerSeries::t_pow(2, 4);
        let two_t = PowerSeries::t(4).scale(&int(2));
        assert_eq!(t2.compose(&two_t).unwrap(), PowerSeries::t_pow(2, 4).scale(&int(4)));
        let em1 = PowerSeries::exp_linear_minus_one(&int(1), 12);
        assert_eq!(em1.compose(&PowerSeries::log1p(12)).unwrap(), PowerSeries::t(12));
        assert_eq!(f.compose(&PowerSeries::one(3)), Err(Error::Composition));
    }

    #[test]
    fn inverses() {
        assert_eq!(PowerSeries::t(9).compositional_inverse().unwrap(), PowerSeries::t(9));
        let two_t = PowerSeries::t(9).scale(&int(2));
        assert_eq!(
            two_t.compositional_inverse().unwrap(),
            PowerSeries::t(9).scale(&ratio(1, 2))
        );
        let em1 = PowerSeries::exp_linear_minus_one(&int(1), 12);
        let inv = em1.compositional_inverse().unwrap();
        assert_eq!(inv, PowerSeries::log1p(12));
        assert_eq!(em1.compose(&inv).unwrap(), PowerSeries::t(12));
        assert!(matches!(
            PowerSeries::one(4).compositional_inverse(),
            Err(Error::Order(_))
        ));
        assert!(matches!(
            PowerSeries::t_pow(2, 4).compositional_inverse(),
            Err(Error::Order(_))
        ));
    }

    #[test]
    fn pairing_with_monomials() {
        assert_eq!(PowerSeries::t_pow(2, 4).pairing(&Polynomial::x_pow(2)).unwrap(), int(2));
        assert_eq!(PowerSeries::t_pow(2, 4).pairing(&Polynomial::x_pow(3)).unwrap(), int(0));
        assert_eq!(
            PowerSeries::t(2).pairing(&Polynomial::x_pow(3)),
            Err(Error::Truncation { have: 2, need: 3 })
        );
        assert_eq!(PowerSeries::t(0).pairing(&Polynomial::zero()).unwrap(), int(0));
    }

    #[test]
    fn operator_identity_and_truncation() {
        let p = Polynomial::new(vec![int(1), ratio(2, 3), int(-4)]);
        assert_eq!(PowerSeries::one(2).apply(&p).unwrap(), p);
        assert_eq!(PowerSeries::t(2).apply(&p).unwrap(), p.derivative(1));
        assert!(PowerSeries::t(1).apply(&p).is_err());
    }

    #[test]
    fn multinomial_pairing() {
        let t = PowerSeries::t(4);
        assert_eq!(pairing_multinomial(&[t.clone(), t], 2).unwrap(), int(2));
        let f = s(&[(1, 2), (3, 1), (-2, 5), (1, 9)]);
        for n in 0..=3 {
            assert_eq!(
                pairing_multinomial(std::slice::from_ref(&f), n).unwrap(),
                f.pairing(&Polynomial::x_pow(n)).unwrap()
            );
        }
    }

    #[test]
    fn display() {
        assert_eq!(s(&[(1, 1), (-1, 2), (0, 1), (3, 1)]).to_string(), "1 - 1/2*t + 3*t^3 + O(t^4)");
        assert_eq!(PowerSeries::zero(2).to_string(), "0 + O(t^3)");
    }

    #[test]
    fn equality_uses_common_truncation() {
        assert_eq!(PowerSeries::one(3), PowerSeries::one(8));
        assert_ne!(PowerSeries::one(3), PowerSeries::t(3));
    }
}
