//! Basis-change identities for the Bernoulli and Euler families, each built so
//! that it checks itself, plus [`verify_all`], which runs every identity and
//! umbral-algebra law over a parameter range and reports instance by instance.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::{self, bernoulli_poly, euler_number, euler_poly};
use crate::combinat::{binomial_q, factorial_q};
use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial};
use crate::rational::{self, Rational};
use crate::series::{pairing_multinomial, PowerSeries};
use crate::sheffer::{self, Basis, BasisExpansion, ShefferPair};

pub const DEFAULT_SEED: u64 = 0x5EED_B3A7;

/// Outcome of one identity instance. A pass means the two sides subtracted to
/// exactly zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail { difference: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    pub identity: String,
    pub params: String,
    #[serde(flatten)]
    pub status: Status,
}

impl Instance {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn polys(identity: &str, params: String, lhs: &Polynomial, rhs: &Polynomial) -> Self {
        let status = if lhs == rhs {
            Status::Pass
        } else {
            Status::Fail {
                difference: (lhs - rhs).to_string(),
            }
        };
        Instance { identity: identity.into(), params, status }
    }

    fn rationals(identity: &str, params: String, lhs: &Rational, rhs: &Rational) -> Self {
        let status = if lhs == rhs {
            Status::Pass
        } else {
            Status::Fail {
                difference: (lhs - rhs).to_string(),
            }
        };
        Instance { identity: identity.into(), params, status }
    }

    fn coeffs(identity: &str, params: String, lhs: &[Rational], rhs: &[Rational]) -> Self {
        let n = lhs.len().max(rhs.len());
        let zero = Rational::zero();
        let diff: Vec<String> = (0..n)
            .map(|k| lhs.get(k).unwrap_or(&zero) - rhs.get(k).unwrap_or(&zero))
            .map(|d| d.to_string())
            .collect();
        let status = if diff.iter().all(|d| d == "0") {
            Status::Pass
        } else {
            Status::Fail {
                difference: format!("[{}]", diff.join(", ")),
            }
        };
        Instance { identity: identity.into(), params, status }
    }

    fn flag(identity: &str, params: String, holds: bool, detail: impl FnOnce() -> String) -> Self {
        let status = if holds {
            Status::Pass
        } else {
            Status::Fail { difference: detail() }
        };
        Instance { identity: identity.into(), params, status }
    }

    fn error(identity: &str, params: String, err: &Error) -> Self {
        Instance {
            identity: identity.into(),
            params,
            status: Status::Fail { difference: format!("error: {err}") },
        }
    }
}

/// Per-instance results of one or more identity checks, in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub ranges: BTreeMap<String, usize>,
    pub instances: Vec<Instance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentitySummary {
    pub identity: String,
    pub passed: usize,
    pub failed: usize,
}

impl IdentityReport {
    fn with_ranges(ranges: &[(&str, usize)]) -> Self {
        IdentityReport {
            seed: None,
            ranges: ranges.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            instances: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.instances.iter().all(Instance::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.passed())
    }

    /// Pass/fail counts per identity, in order of first appearance.
    pub fn summary(&self) -> Vec<IdentitySummary> {
        let mut out: Vec<IdentitySummary> = Vec::new();
        for inst in &self.instances {
            let entry = match out.iter_mut().position(|s| s.identity == inst.identity) {
                Some(i) => &mut out[i],
                None => {
                    out.push(IdentitySummary {
                        identity: inst.identity.clone(),
                        passed: 0,
                        failed: 0,
                    });
                    out.last_mut().expect("just pushed")
                }
            };
            if inst.passed() {
                entry.passed += 1;
            } else {
                entry.failed += 1;
            }
        }
        out
    }

    fn extend(&mut self, other: IdentityReport) {
        self.instances.extend(other.instances);
    }

    fn push(&mut self, inst: Instance) {
        self.instances.push(inst);
    }

    fn push_result(&mut self, identity: &str, params: String, r: Result<Instance>) {
        match r {
            Ok(i) => self.push(i),
            Err(e) => self.push(Instance::error(identity, params, &e)),
        }
    }
}

/// Bernoulli-basis coefficients by integration:
/// `b_k = (1/k!) ∫_0^1 p^(k)(u) du`.
pub fn expand_bernoulli_basis(p: &Polynomial) -> BasisExpansion {
    let top = p.degree().finite().map_or(0, |d| d + 1);
    let (zero, one) = (Rational::zero(), Rational::one());
    let coeffs = (0..top)
        .map(|k| p.derivative(k).definite_integral(&zero, &one) / factorial_q(k))
        .collect();
    BasisExpansion { basis: Basis::Bernoulli, coeffs }
}

/// The same coefficients through the functional form
/// `b_k = (1/k!) <(e^t - 1)/t | p^(k)(x)>`.
pub fn expand_bernoulli_basis_by_pairing(p: &Polynomial) -> Result<BasisExpansion> {
    let Degree::Finite(d) = p.degree() else {
        return Ok(BasisExpansion { basis: Basis::Bernoulli, coeffs: Vec::new() });
    };
    let g = PowerSeries::bernoulli_g(d);
    let coeffs = (0..=d)
        .map(|k| Ok(g.pairing(&p.derivative(k))? / factorial_q(k)))
        .collect::<Result<_>>()?;
    Ok(BasisExpansion { basis: Basis::Bernoulli, coeffs })
}

fn check_positive_order(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::Domain("order r must be at least 1".into()));
    }
    if r > classical::max_order() {
        return Err(Error::Domain(format!(
            "order r = {r} exceeds the configured cap {}",
            classical::max_order()
        )));
    }
    Ok(())
}

/// Coefficients in the `B_k^(r)(x)` basis:
/// `b_k^(r) = (1/k!) <((e^t - 1)/t)^r t^k | p(x)>`.
pub fn expand_bernoulli_order_basis(p: &Polynomial, r: usize) -> Result<BasisExpansion> {
    check_positive_order(r)?;
    sheffer::expand_in_sheffer(p, &Basis::BernoulliOrder(r))
}

/// The closed-form coefficients of `B_n(x) = Σ_k b_k^(r) B_k^(r)(x)`, with
/// `Δ^r B_m(0) = Σ_j C(r,j) (-1)^(r-j) B_m(j)`:
///
/// * `k < r`:  `b_k = C(r,k) / (r! C(n+r-k, r-k)) · Δ^r B_{n+r-k}(0)`
/// * `k >= r`: `b_k = C(n,k-r) / (r! C(k,r)) · Δ^r B_{n+r-k}(0)`
///
/// Both branches are evaluated literally with `B_m(j)` from polynomial
/// evaluation. When `r - 1 > n` the first branch runs past `k = n`; those
/// entries are kept (they come out zero).
pub fn bernoulli_in_order_basis(n: usize, r: usize) -> Result<BasisExpansion> {
    check_positive_order(r)?;
    let r_fact = factorial_q(r);
    let forward_difference = |m: usize| -> Rational {
        let b = bernoulli_poly(m);
        (0..=r)
            .map(|j| {
                let term = binomial_q(r, j) * b.eval(&rational::from_usize(j));
                if (r - j).is_multiple_of(2) { term } else { -term }
            })
            .sum()
    };
    let top = n.max(r - 1);
    let mut coeffs = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let m = n + r - k;
        let b = if k < r {
            binomial_q(r, k) / (&r_fact * binomial_q(m, r - k)) * forward_difference(m)
        } else {
            binomial_q(n, k - r) / (&r_fact * binomial_q(k, r)) * forward_difference(m)
        };
        coeffs.push(b);
    }
    Ok(BasisExpansion { basis: Basis::BernoulliOrder(r), coeffs })
}

/// `E_n(x) = -2 Σ_k C(n,k) E_{n-k+1}/(n-k+1) · B_k(x)`.
pub fn euler_in_bernoulli(n: usize) -> BasisExpansion {
    let coeffs = (0..=n)
        .map(|k| {
            let m = n - k + 1;
            rational::int(-2) * binomial_q(n, k) * euler_number(m) / rational::from_usize(m)
        })
        .collect();
    BasisExpansion { basis: Basis::Bernoulli, coeffs }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductFamily {
    BernoulliOrder,
    Euler,
}

impl ProductFamily {
    fn name(self) -> &'static str {
        match self {
            ProductFamily::BernoulliOrder => "bernoulli-order-product",
            ProductFamily::Euler => "euler-product",
        }
    }
}

/// Memo of `B_p(x) B_q(x)`.
#[derive(Default)]
struct PairProducts(HashMap<(usize, usize), Polynomial>);

impl PairProducts {
    fn get(&mut self, p: usize, q: usize) -> &Polynomial {
        let key = (p.min(q), p.max(q));
        self.0
            .entry(key)
            .or_insert_with(|| bernoulli_poly(key.0) * bernoulli_poly(key.1))
    }
}

/// Left and right sides of the product rewrite.
///
/// * Bernoulli order `r`: `B_n^(r) B_{n-m}^(r) = Σ_k Σ_p C(n-m,p) C(n,k-p)
///   B_{n-m-p}^(r-1) B_{n-k+p}^(r-1) B_p(x) B_{k-p}(x)`
/// * Euler: `E_n E_{n-m} = 4 Σ_k Σ_l C(n-m,l) C(n,k-l)
///   E_{n-m-l+1} E_{n-k+l+1} / ((n-m-l+1)(n-k+l+1)) B_l(x) B_{k-l}(x)`
///
/// with `k = 0..=2n-m` and the inner index running over `0..=k`; terms whose
/// binomials vanish are skipped.
fn product_sides(
    n: usize,
    m: usize,
    r: usize,
    family: ProductFamily,
    cache: &mut PairProducts,
) -> Result<(Polynomial, Polynomial)> {
    if m > n {
        return Err(Error::Domain(format!("product rewrite needs m <= n, got m = {m}, n = {n}")));
    }
    let low = n - m;
    let lhs = match family {
        ProductFamily::BernoulliOrder => {
            check_positive_order(r)?;
            classical::bernoulli_poly_order(n, r)? * classical::bernoulli_poly_order(low, r)?
        }
        ProductFamily::Euler => euler_poly(n) * euler_poly(low),
    };
    let weight = |i: usize| -> Result<Rational> {
        match family {
            ProductFamily::BernoulliOrder => classical::bernoulli_number_order(i, r - 1),
            ProductFamily::Euler => Ok(euler_number(i + 1) / rational::from_usize(i + 1)),
        }
    };
    let scale = match family {
        ProductFamily::BernoulliOrder => Rational::one(),
        ProductFamily::Euler => rational::int(4),
    };
    let mut rhs = Polynomial::zero();
    for k in 0..=(2 * n - m) {
        for p in 0..=k {
            if p > low || k - p > n {
                continue;
            }
            let c = &scale
                * binomial_q(low, p)
                * binomial_q(n, k - p)
                * weight(low - p)?
                * weight(n - (k - p))?;
            rhs.add_scaled(&c, cache.get(p, k - p));
        }
    }
    Ok((lhs, rhs))
}

/// Builds both sides of the product rewrite as polynomials and compares them.
pub fn product_expansion_check(n: usize, m: usize, r: usize, family: ProductFamily) -> Result<IdentityReport> {
    let (lhs, rhs) = product_sides(n, m, r, family, &mut PairProducts::default())?;
    let mut report = IdentityReport::with_ranges(&[("n", n), ("m", m), ("r", r)]);
    report.push(Instance::polys(family.name(), format!("n={n},m={m},r={r}"), &lhs, &rhs));
    Ok(report)
}

fn random_rational(rng: &mut impl Rng) -> Rational {
    rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

fn random_poly(rng: &mut impl Rng, max_degree: usize) -> Polynomial {
    let d = rng.gen_range(0..=max_degree);
    Polynomial::new((0..=d).map(|_| random_rational(rng)).collect())
}

fn random_series(rng: &mut impl Rng, trunc: usize) -> PowerSeries {
    PowerSeries::from_fn(trunc, |_| random_rational(rng))
}

/// Random delta series with nonzero linear coefficient.
fn random_delta(rng: &mut impl Rng, trunc: usize) -> PowerSeries {
    let mut c = random_series(rng, trunc).coeffs().to_vec();
    c[0] = Rational::zero();
    if c.len() > 1 && c[1].is_zero() {
        c[1] = Rational::one();
    }
    PowerSeries::from_coeffs(c)
}

fn section_rng(seed: u64, section: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ section.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn kronecker(a: usize, b: usize) -> Rational {
    if a == b { Rational::one() } else { Rational::zero() }
}

/// Number sequences: series route against the recurrences, and the closing
/// Kronecker relations `B_n(1) - B_n = δ(1,n)`, `E_n(1) + E_n = 2δ(0,n)`.
pub fn check_numbers(max_n: usize) -> IdentityReport {
    let mut rep = IdentityReport::with_ranges(&[("max_n", max_n)]);
    let b_rec = classical::bernoulli_numbers_by_recurrence(max_n);
    let e_rec = classical::euler_numbers_by_recurrence(max_n);
    let one = Rational::one();
    for n in 0..=max_n {
        let ps = format!("n={n}");
        rep.push(Instance::rationals("bernoulli-series-vs-recurrence", ps.clone(), &classical::bernoulli_number(n), &b_rec[n]));
        rep.push(Instance::rationals("euler-series-vs-recurrence", ps.clone(), &euler_number(n), &e_rec[n]));
        let b = bernoulli_poly(n);
        rep.push(Instance::rationals("bernoulli-kronecker", ps.clone(), &(b.eval(&one) - b.eval(&Rational::zero())), &kronecker(1, n)));
        let e = euler_poly(n);
        rep.push(Instance::rationals("euler-kronecker", ps.clone(), &(e.eval(&one) + e.eval(&Rational::zero())), &(rational::int(2) * kronecker(0, n))));
        rep.push_result("bernoulli-appell-vs-assembly", ps.clone(), sheffer::appell_poly(&PowerSeries::bernoulli_g(n), n)
            .map(|a| Instance::polys("bernoulli-appell-vs-assembly", ps.clone(), &a, &b)));
        rep.push_result("euler-appell-vs-assembly", ps.clone(), sheffer::appell_poly(&PowerSeries::euler_g(n), n)
            .map(|a| Instance::polys("euler-appell-vs-assembly", ps.clone(), &a, &e)));
        rep.push(Instance::flag("monic", ps, b.is_monic() && e.is_monic() && b.degree() == Degree::Finite(n) && e.degree() == Degree::Finite(n), || "not monic of degree n".into()));
    }
    rep
}

/// Operator and integral identities of the Bernoulli families:
/// `g B_n = x^n`, `t B_n^(r) = n B_{n-1}^(r)`, raising, differences,
/// `((e^t-1)/t) B_n^(r) = B_n^(r-1)`, the moving integral, and the order-`r`
/// numbers by multinomial convolution and by the multinomial pairing rule.
pub fn check_bernoulli_operators(max_n: usize, max_r: usize) -> IdentityReport {
    let mut rep = IdentityReport::with_ranges(&[("max_n", max_n), ("max_r", max_r)]);
    let trunc = max_n + 1;
    let g = PowerSeries::bernoulli_g(trunc);
    let g_inv = g.reciprocal().expect("invertible");
    let t = PowerSeries::t(trunc);
    for n in 0..=max_n {
        let ps = format!("n={n}");
        let b = bernoulli_poly(n);
        rep.push_result("bernoulli-inverse-relation", ps.clone(), g.apply(&b)
            .map(|x| Instance::polys("bernoulli-inverse-relation", ps.clone(), &x, &Polynomial::x_pow(n))));
        rep.push_result("bernoulli-fixed-point", ps.clone(), g_inv.apply(&Polynomial::x_pow(n))
            .map(|x| Instance::polys("bernoulli-fixed-point", ps.clone(), &x, &b)));
        let y = rational::ratio(3, 7);
        rep.push_result("bernoulli-pairing-integral", ps.clone(), PowerSeries::integral_functional(&y, n).pairing(&b)
            .map(|v| Instance::rationals("bernoulli-pairing-integral", ps.clone(), &v, &b.definite_integral(&Rational::zero(), &y))));
    }
    for r in 0..=max_r {
        let gr = g.pow(r);
        for n in 0..=max_n {
            let ps = format!("n={n},r={r}");
            let result = (|| -> Result<Vec<Instance>> {
                let b = classical::bernoulli_poly_order(n, r)?;
                let below = if n > 0 { classical::bernoulli_poly_order(n - 1, r)? } else { Polynomial::zero() };
                let next = classical::bernoulli_poly_order(n + 1, r)?;
                let mut out = vec![
                    Instance::polys("order-appell", ps.clone(), &sheffer::appell_poly(&gr, n)?, &b),
                    Instance::polys("order-lowering", ps.clone(), &t.apply(&b)?, &below.scale(&rational::from_usize(n))),
                    Instance::polys("order-raising", ps.clone(), &t.apply(&next.scale(&rational::from_usize(n + 1).recip()))?, &b),
                ];
                if r >= 1 {
                    let lower = classical::bernoulli_poly_order(n, r - 1)?;
                    out.push(Instance::polys("order-integral-operator", ps.clone(), &g.apply(&b)?, &lower));
                    out.push(Instance::polys("order-step-down", ps.clone(), &g_inv.apply(&lower)?, &b));
                    let lower_prev = if n > 0 { classical::bernoulli_poly_order(n - 1, r - 1)? } else { Polynomial::zero() };
                    out.push(Instance::polys("order-difference", ps.clone(), &(&b.shift(&Rational::one()) - &b), &lower_prev.scale(&rational::from_usize(n))));
                    let number = classical::bernoulli_number_order(n, r)?;
                    out.push(Instance::rationals("order-multinomial-numbers", ps.clone(), &classical::bernoulli_number_order_multinomial(n, r)?, &number));
                    let copies = vec![g_inv.clone(); r];
                    out.push(Instance::rationals("order-multinomial-pairing", ps.clone(), &pairing_multinomial(&copies, n)?, &number));
                    out.push(Instance::rationals("order-pairing-number", ps.clone(), &gr.reciprocal()?.pairing(&Polynomial::x_pow(n))?, &number));
                }
                for y in [Rational::one(), rational::ratio(1, 2), rational::ratio(-3, 2)] {
                    let c = classical::family_integral_identity_check(n, r, &y)?;
                    out.push(Instance::flag("order-moving-integral", format!("{ps},y={y}"), c.all_hold(), || c.failed().join(",")));
                }
                Ok(out)
            })();
            match result {
                Ok(v) => rep.instances.extend(v),
                Err(e) => rep.push(Instance::error("order-identities", ps, &e)),
            }
        }
    }
    rep
}

/// Biorthogonality `<g f^k | S_n> = n! δ(n,k)`, lowering `f S_n = n S_{n-1}`,
/// Appell consistency, expansion round trips, and compositional inverses.
pub fn check_sheffer(max_n: usize, max_r: usize, seed: u64) -> IdentityReport {
    let mut rep = IdentityReport::with_ranges(&[("max_n", max_n), ("max_r", max_r)]);
    let mut rng = section_rng(seed, 1);
    let tr = max_n.max(1);
    let mut pairs: Vec<(String, ShefferPair)> = vec![
        ("bernoulli".into(), Basis::Bernoulli.pair(max_n)),
        ("euler".into(), Basis::Euler.pair(max_n)),
        (
            "falling-factorial".into(),
            ShefferPair::new(PowerSeries::one(tr), PowerSeries::exp_linear_minus_one(&Rational::one(), tr))
                .expect("valid pair"),
        ),
        (
            "euler-log1p".into(),
            ShefferPair::new(PowerSeries::euler_g(tr), PowerSeries::log1p(tr)).expect("valid pair"),
        ),
    ];
    for r in 2..=max_r {
        pairs.push((format!("bernoulli-order-{r}"), Basis::BernoulliOrder(r).pair(max_n)));
    }
    let mut g = random_series(&mut rng, tr).coeffs().to_vec();
    if g[0].is_zero() {
        g[0] = Rational::one();
    }
    let random_pair = ShefferPair::new(PowerSeries::from_coeffs(g), random_delta(&mut rng, tr)).expect("valid pair");
    pairs.push(("random".into(), random_pair));
    for (name, pair) in &pairs {
        let seq = match sheffer::sheffer_sequence(pair, max_n) {
            Ok(s) => s,
            Err(e) => {
                rep.push(Instance::error("sheffer-sequence", name.clone(), &e));
                continue;
            }
        };
        let mut functional = pair.g().clone();
        for k in 0..=max_n {
            if k > 0 {
                functional = functional.mul(pair.f());
            }
            for (n, s) in seq.iter().enumerate() {
                let ps = format!("{name},n={n},k={k}");
                let want = kronecker(n, k) * factorial_q(n);
                rep.push_result("sheffer-biorthogonality", ps.clone(), functional.pairing(s)
                    .map(|v| Instance::rationals("sheffer-biorthogonality", ps.clone(), &v, &want)));
            }
        }
        for n in 1..=max_n {
            let ps = format!("{name},n={n}");
            rep.push_result("sheffer-lowering", ps.clone(), pair.f().apply(&seq[n])
                .map(|v| Instance::polys("sheffer-lowering", ps.clone(), &v, &seq[n - 1].scale(&rational::from_usize(n)))));
        }
        if pair.f() == &PowerSeries::t(pair.trunc()) {
            for (n, s) in seq.iter().enumerate() {
                let ps = format!("{name},n={n}");
                rep.push_result("sheffer-appell-consistency", ps.clone(), sheffer::appell_poly(pair.g(), n)
                    .map(|a| Instance::polys("sheffer-appell-consistency", ps.clone(), &a, s)));
            }
        }
        let basis = Basis::Sheffer(pair.clone());
        for i in 0..5 {
            let p = random_poly(&mut rng, max_n);
            let ps = format!("{name},sample={i}");
            rep.push_result("sheffer-expansion-round-trip", ps.clone(), sheffer::expand_in_sheffer(&p, &basis)
                .and_then(|e| e.recombine())
                .map(|q| Instance::polys("sheffer-expansion-round-trip", ps.clone(), &q, &p)));
        }
    }
    let trunc = 12;
    let t = PowerSeries::t(trunc);
    for i in 0..10 {
        let f = random_delta(&mut rng, trunc);
        let ps = format!("sample={i}");
        let r = f.compositional_inverse().and_then(|inv| {
            let fwd = f.compose(&inv)?;
            let back = inv.compose(&f)?;
            Ok(Instance::flag("compositional-inverse", ps.clone(), fwd == t && back == t, || format!("f(f̄) = {fwd}, f̄(f) = {back}")))
        });
        rep.push_result("compositional-inverse", ps, r);
    }
    rep
}

/// The axioms of the umbral algebra on random instances:
/// `<t^k|x^n> = n! δ`, `<fg|p> = <f|g p>`, the integral and evaluation
/// functionals, `<f|x p> = <f'|p>`, and the multinomial product rule.
pub fn check_umbral_axioms(seed: u64, count: usize) -> IdentityReport {
    let mut rep = IdentityReport::with_ranges(&[("count", count), ("trunc", 12), ("max_degree", 10)]);
    rep.seed = Some(seed);
    let mut rng = section_rng(seed, 2);
    let trunc = 12;
    for i in 0..count {
        let ps = format!("sample={i}");
        let result = (|| -> Result<Vec<Instance>> {
            let k = rng.gen_range(0..=trunc);
            let n = rng.gen_range(0..=trunc);
            let f = random_series(&mut rng, trunc);
            let g = random_series(&mut rng, trunc);
            let p = random_poly(&mut rng, 10);
            let y = random_rational(&mut rng);
            let mut out = vec![Instance::rationals(
                "pairing-monomial",
                format!("{ps},k={k},n={n}"),
                &PowerSeries::t_pow(k, trunc).pairing(&Polynomial::x_pow(n))?,
                &(kronecker(n, k) * factorial_q(n)),
            )];
            out.push(Instance::rationals("pairing-duality", ps.clone(), &f.mul(&g).pairing(&p)?, &f.pairing(&g.apply(&p)?)?));
            out.push(Instance::rationals(
                "integral-functional",
                ps.clone(),
                &PowerSeries::integral_functional(&y, trunc).pairing(&p)?,
                &p.definite_integral(&Rational::zero(), &y),
            ));
            // ∂_t f: c_k <- (k+1) c_{k+1}
            let df = PowerSeries::from_fn(trunc - 1, |k| f.coeffs()[k + 1].clone() * rational::from_usize(k + 1));
            out.push(Instance::rationals("derivative-duality", ps.clone(), &f.pairing(&p.mul_x())?, &df.pairing(&p)?));
            out.push(Instance::rationals(
                "evaluation-functional",
                ps.clone(),
                &PowerSeries::exp_linear_minus_one(&y, trunc).pairing(&p)?,
                &(p.eval(&y) - p.eval(&Rational::zero())),
            ));
            let m = rng.gen_range(2..=3);
            let fs: Vec<PowerSeries> = (0..m).map(|_| random_series(&mut rng, trunc)).collect();
            let deg = rng.gen_range(0..=10);
            let product = fs.iter().skip(1).fold(fs[0].clone(), |acc, h| acc.mul(h));
            out.push(Instance::rationals(
                "multinomial-product-rule",
                format!("{ps},m={m},n={deg}"),
                &pairing_multinomial(&fs, deg)?,
                &product.pairing(&Polynomial::x_pow(deg))?,
            ));
            Ok(out)
        })();
        match result {
            Ok(v) => rep.instances.extend(v),
            Err(e) => rep.push(Instance::error("umbral-axioms", ps, &e)),
        }
    }
    rep
}

/// Bernoulli-basis expansion by integrals (and by pairing) on random
/// polynomials, and its closed form on `B_n^(r)`.
pub fn check_bernoulli_basis(max_n: usize, max_r: usize, seed: u64, samples: usize) -> IdentityReport {
    let mut rep = IdentityReport::with_ranges(&[("max_n", max_n), ("max_r", max_r), ("samples", samples)]);
    rep.seed = Some(seed);
    let mut rng = section_rng(seed, 3);
    for i in 0..samples {
        let p = random_poly(&mut rng, max_n);
        let ps = format!("sample={i}");
        let by_integral = expand_bernoulli_basis(&p);
        rep.push_result("bernoulli-basis-round-trip", ps.clone(), by_integral.recombine()
            .map(|q| Instance::polys("bernoulli-basis-round-trip", ps.clone(), &q, &p)));
        rep.push_result("bernoulli-basis-integral-vs-pairing", ps.clone(), expand_bernoulli_basis_by_pairing(&p)
            .map(|e| Instance::coeffs("bernoulli-basis-integral-vs-pairing", ps.clone(), &by_integral.coeffs, &e.coeffs)));
        rep.push_result("bernoulli-basis-integral-vs-sheffer", ps.clone(), sheffer::expand_in_sheffer(&p, &Basis::Bernoulli)
            .map(|e| Instance::coeffs("bernoulli-basis-integral-vs-sheffer", ps.clone(), &by_integral.coeffs, &e.coeffs)));
    }
    for r in 1..=max_r {
        for n in 0..=max_n {
            let ps = format!("n={n},r={r}");
            let result = (|| -> Result<Vec<Instance>> {
                let p = classical::bernoulli_poly_order(n, r)?;
                let mut derivs_ok = true;
                let mut closed = Vec::with_capacity(n + 1);
                for k in 0..=n {
                    let below = classical::bernoulli_poly_order(n - k, r)?;
                    derivs_ok &= p.derivative(k) == below.scale(&(factorial_q(k) * binomial_q(n, k)));
                    closed.push(binomial_q(n, k) * classical::bernoulli_number_order(n - k, r - 1)?);
                }
                Ok(vec![
                    Instance::coeffs("bernoulli-basis-closed-form", ps.clone(), &expand_bernoulli_basis(&p).coeffs, &closed),
                    Instance::flag("order-derivatives", ps.clone(), derivs_ok, || "p^(k) != k! C(n,k) B_{n-k}^(r)".into()),
                ])
            })();
            match result {
                Ok(v) => rep.instances.extend(v),
                Err(e) => rep.push(Instance::error("bernoulli-basis-closed-form", ps, &e)),
            }
        }
    }
    rep
}

/// Order-`r` basis expansions: round trips on random polynomials, and the
/// closed form for `B_n` against the pairing route.
pub fn check_order_basis(max_n: usize, max_r: usize, seed: u64, samples: usize) -> IdentityReport {
    let mut rep = IdentityReport::with_ranges(&[("max_n", max_n), ("max_r", max_r), ("samples", samples)]);
    rep.seed = Some(seed);
    let mut rng = section_rng(seed, 4);
    for r in 1..=max_r {
        for i in 0..samples {
            let p = random_poly(&mut rng, max_n);
            let ps = format!("r={r},sample={i}");
            rep.push_result("order-basis-round-trip", ps.clone(), expand_bernoulli_order_basis(&p, r)
                .and_then(|e| e.recombine())
                .map(|q| Instance::polys("order-basis-round-trip", ps.clone(), &q, &p)));
        }
        for n in 0..=max_n {
            let ps = format!("n={n},r={r}");
            let result = (|| -> Result<Vec<Instance>> {
                let closed = bernoulli_in_order_basis(n, r)?;
                let by_pairing = expand_bernoulli_order_basis(&bernoulli_poly(n), r)?;
                let tail_zero = closed.coeffs.iter().skip(n + 1).all(Zero::is_zero);
                Ok(vec![
                    Instance::coeffs("closed-form-vs-pairing", ps.clone(), &closed.coeffs, &by_pairing.coeffs),
                    Instance::polys("closed-form-round-trip", ps.clone(), &closed.recombine()?, &bernoulli_poly(n)),
                    Instance::flag("closed-form-tail", ps.clone(), tail_zero, || "coefficients past k = n do not vanish".into()),
                ])
            })();
            match result {
                Ok(v) => rep.instances.extend(v),
                Err(e) => rep.push(Instance::error("closed-form-vs-pairing", ps, &e)),
            }
        }
    }
    rep
}

/// `E_n(x)` in the Bernoulli basis, by closed form and by the functional route
/// `b_k = (1/k!) <(e^t-1)/t | E_n^(k)> = C(n,k) (E_{n-k+1}(1) - E_{n-k+1})/(n-k+1)`.
pub fn check_euler_in_bernoulli(max_n: usize) -> IdentityReport {
    let mut rep = IdentityReport::with_ranges(&[("max_n", max_n)]);
    let one = Rational::one();
    for n in 0..=max_n {
        let ps = format!("n={n}");
        let closed = euler_in_bernoulli(n);
        rep.push_result("euler-in-bernoulli-round-trip", ps.clone(), closed.recombine()
            .map(|q| Instance::polys("euler-in-bernoulli-round-trip", ps.clone(), &q, &euler_poly(n))));
        rep.push_result("euler-in-bernoulli-functional", ps.clone(), expand_bernoulli_basis_by_pairing(&euler_poly(n))
            .map(|e| Instance::coeffs("euler-in-bernoulli-functional", ps.clone(), &closed.coeffs, &e.coeffs)));
        let endpoint: Vec<Rational> = (0..=n)
            .map(|k| {
                let m = n - k + 1;
                let e = euler_poly(m);
                binomial_q(n, k) * (e.eval(&one) - e.eval(&Rational::zero())) / rational::from_usize(m)
            })
            .collect();
        rep.push(Instance::coeffs("euler-in-bernoulli-endpoints", ps, &closed.coeffs, &endpoint));
    }
    rep
}

/// Product rewrites for `B_n^(r) B_{n-m}^(r)` and `E_n E_{n-m}`.
pub fn check_products(max_n: usize, max_r: usize) -> IdentityReport {
    let mut rep = IdentityReport::with_ranges(&[("max_n", max_n), ("max_r", max_r)]);
    let mut cache = PairProducts::default();
    let mut run = |rep: &mut IdentityReport, n, m, r, family: ProductFamily| {
        let ps = format!("n={n},m={m},r={r}");
        let inst = product_sides(n, m, r, family, &mut cache).map(|(l, rr)| Instance::polys(family.name(), ps.clone(), &l, &rr));
        rep.push_result(family.name(), ps, inst);
    };
    for r in 1..=max_r {
        for n in 0..=max_n {
            for m in 0..=n {
                run(&mut rep, n, m, r, ProductFamily::BernoulliOrder);
            }
        }
    }
    for n in 0..=max_n {
        for m in 0..=n {
            run(&mut rep, n, m, 0, ProductFamily::Euler);
        }
    }
    rep
}

/// Runs every identity section over `n <= max_n`, `1 <= r <= max_r`. Instances
/// appear in a fixed order determined only by the arguments.
pub fn verify_all(max_n: usize, max_r: usize, seed: u64) -> IdentityReport {
    let mut rep = IdentityReport::with_ranges(&[("max_n", max_n), ("max_r", max_r)]);
    rep.seed = Some(seed);
    rep.extend(check_numbers(max_n));
    rep.extend(check_umbral_axioms(seed, 100));
    rep.extend(check_bernoulli_operators(max_n, max_r));
    rep.extend(check_sheffer(max_n, max_r, seed));
    rep.extend(check_bernoulli_basis(max_n, max_r, seed, 50));
    rep.extend(check_order_basis(max_n, max_r, seed, 5));
    rep.extend(check_euler_in_bernoulli(max_n));
    rep.extend(check_products(max_n, max_r));
    rep
}
