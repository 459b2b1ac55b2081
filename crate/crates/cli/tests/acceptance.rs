//! Acceptance suite: one line per criterion, exact equality throughout, each
//! with a wall-clock budget. Exits nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use num::{One, Zero};
use umbra_core::classical::{
    bernoulli_number, bernoulli_number_order, bernoulli_number_order_multinomial, bernoulli_numbers_by_recurrence,
    bernoulli_poly, bernoulli_poly_order, euler_poly,
};
use umbra_core::combinat::binomial_q;
use umbra_core::identities::{self, IdentityReport, DEFAULT_SEED};
use umbra_core::rational::{int, ratio};
use umbra_core::{Polynomial, PowerSeries, Rational};

type Check = Result<(), String>;

/// Name, time budget in seconds, and the check itself.
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok { Ok(()) } else { Err(what()) }
}

fn report_ok(rep: &IdentityReport) -> Check {
    match rep.failures().next() {
        None => Ok(()),
        Some(f) => Err(format!(
            "{} failing instance(s), first {} [{}]: {:?}",
            rep.failures().count(),
            f.identity,
            f.params,
            f.status
        )),
    }
}

/// `Σ_{k<=n} C(n+1,k) B_k = δ(0,n)`, solved for `B_n`; kept separate from the
/// library so the series route has something independent to meet.
fn recurrence_oracle(upto: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::new();
    for n in 0..=upto {
        let mut s = if n == 0 { Rational::one() } else { Rational::zero() };
        for (k, bk) in b.iter().enumerate() {
            s -= binomial_q(n + 1, k) * bk;
        }
        b.push(s / binomial_q(n + 1, n));
    }
    b
}

fn numbers() -> Check {
    let oracle = recurrence_oracle(20);
    let library_recurrence = bernoulli_numbers_by_recurrence(20);
    for n in 0..=20 {
        let b = bernoulli_number(n);
        ensure(b == oracle[n] && b == library_recurrence[n], || format!("B_{n} = {b}, oracle {}", oracle[n]))?;
    }
    ensure(bernoulli_number(0) == int(1), || "B_0".into())?;
    ensure(bernoulli_number(1) == ratio(-1, 2), || "B_1".into())?;
    ensure(bernoulli_number(12) == ratio(-691, 2730), || "B_12".into())
}

fn operator_relations() -> Check {
    let g = PowerSeries::bernoulli_g(20);
    let t = PowerSeries::t(20);
    for n in 0..=20 {
        let b = bernoulli_poly(n);
        ensure(g.apply(&b).map_err(|e| e.to_string())? == Polynomial::x_pow(n), || format!("g B_{n} != x^{n}"))?;
        let lowered = if n == 0 { Polynomial::zero() } else { bernoulli_poly(n - 1).scale(&int(n as i64)) };
        ensure(t.apply(&b).map_err(|e| e.to_string())? == lowered, || format!("t B_{n} != {n} B_{}", n.saturating_sub(1)))?;
    }
    Ok(())
}

fn multinomial_numbers() -> Check {
    for r in 1..=4 {
        for n in 0..=10 {
            let a = bernoulli_number_order_multinomial(n, r).map_err(|e| e.to_string())?;
            let b = bernoulli_number_order(n, r).map_err(|e| e.to_string())?;
            ensure(a == b, || format!("n={n}, r={r}: {a} vs {b}"))?;
        }
    }
    Ok(())
}

fn bernoulli_basis_round_trip() -> Check {
    let rep = identities::check_bernoulli_basis(12, 0, DEFAULT_SEED, 50);
    ensure(rep.instances.len() == 150, || format!("expected 150 instances, ran {}", rep.instances.len()))?;
    report_ok(&rep)
}

fn order_to_bernoulli_closed_form() -> Check {
    for r in 1..=4 {
        for n in 0..=10 {
            let p = bernoulli_poly_order(n, r).map_err(|e| e.to_string())?;
            let got = identities::expand_bernoulli_basis(&p).coeffs;
            for (k, b) in got.iter().enumerate() {
                let want = binomial_q(n, k) * bernoulli_number_order(n - k, r - 1).map_err(|e| e.to_string())?;
                ensure(*b == want, || format!("n={n}, r={r}, k={k}: {b} vs {want}"))?;
            }
        }
    }
    Ok(())
}

fn closed_form_order_expansion() -> Check {
    for r in 1..=4 {
        for n in 0..=10 {
            let closed = identities::bernoulli_in_order_basis(n, r).map_err(|e| e.to_string())?;
            let paired = identities::expand_bernoulli_order_basis(&bernoulli_poly(n), r).map_err(|e| e.to_string())?;
            ensure(closed.same_coeffs(&paired.coeffs), || format!("n={n}, r={r}: {:?} vs {:?}", closed.coeffs, paired.coeffs))?;
            let back = closed.recombine().map_err(|e| e.to_string())?;
            ensure(back == bernoulli_poly(n), || format!("n={n}, r={r}: recombined to {back}"))?;
        }
    }
    Ok(())
}

fn euler_in_bernoulli() -> Check {
    for n in 0..=15 {
        let back = identities::euler_in_bernoulli(n).recombine().map_err(|e| e.to_string())?;
        ensure(back == euler_poly(n), || format!("n={n}: {back}"))?;
    }
    Ok(())
}

fn products() -> Check {
    let rep = identities::check_products(8, 3);
    // Σ_{n<=8} (n+1) = 45 pairs (n, m), three orders plus the Euler family
    ensure(rep.instances.len() == 45 * 4, || format!("ran {} instances", rep.instances.len()))?;
    report_ok(&rep)
}

fn umbral_axioms() -> Check {
    let rep = identities::check_umbral_axioms(DEFAULT_SEED, 100);
    for s in rep.summary() {
        ensure(s.passed + s.failed == 100, || format!("{} ran {} instances", s.identity, s.passed + s.failed))?;
    }
    report_ok(&rep)
}

fn sheffer_machinery() -> Check {
    let rep = identities::check_sheffer(8, 3, DEFAULT_SEED);
    for family in ["bernoulli,", "bernoulli-order-2,", "bernoulli-order-3,", "falling-factorial,"] {
        let n = rep
            .instances
            .iter()
            .filter(|i| i.identity == "sheffer-biorthogonality" && i.params.starts_with(family))
            .count();
        ensure(n == 81, || format!("{family} biorthogonality ran {n} instances"))?;
    }
    let inverses = rep.instances.iter().filter(|i| i.identity == "compositional-inverse").count();
    ensure(inverses > 0, || "no compositional inverse round trips ran".into())?;
    report_ok(&rep)
}

fn cli() -> Check {
    let run = common::umbra(&["verify", "--max-n", "12", "--max-r", "4"]);
    ensure(run.code == 0, || format!("verify exited {}:\n{}{}", run.code, run.stdout, run.stderr))?;
    common::round_trip(&common::corpus(common::CORPUS_SEED, 1000))?;
    for args in common::JSON_COMMANDS {
        let run = common::umbra(args);
        ensure(run.code == 0, || format!("{args:?} exited {}", run.code))?;
        ensure(!common::has_float_literal(&run.stdout), || format!("float literal in output of {args:?}"))?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Bernoulli numbers B_0..B_20, series route vs recurrence", 1, numbers),
        ("inverse relation and lowering on B_n, n <= 20", 1, operator_relations),
        ("order-r numbers, multinomial sum vs series, n <= 10, r <= 4", 10, multinomial_numbers),
        ("Bernoulli-basis round trip, integral vs pairing, 50 samples", 5, bernoulli_basis_round_trip),
        ("B_n^(r) in the Bernoulli basis is C(n,k) B_(n-k)^(r-1)", 5, order_to_bernoulli_closed_form),
        ("closed-form order-r coefficients of B_n vs pairing route", 10, closed_form_order_expansion),
        ("E_n in the Bernoulli basis recombines, n <= 15", 2, euler_in_bernoulli),
        ("product rewrites, n <= 8, m <= n, r <= 3", 20, products),
        ("umbral algebra axioms, 100 seeded instances each", 10, umbral_axioms),
        ("Sheffer biorthogonality and compositional inverses", 5, sheffer_machinery),
        ("CLI verify run, parser corpus, exact JSON", 60, cli),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut outcome = check();
        let elapsed = t.elapsed();
        if outcome.is_ok() && elapsed > Duration::from_secs(*budget) {
            outcome = Err(format!("over the {budget} s budget"));
        }
        match outcome {
            Ok(()) => println!("PASS {:>2}. {name} ({:.2} s)", i + 1, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2}. {name} ({:.2} s): {why}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    let total = start.elapsed();
    if total > Duration::from_secs(60) {
        failed += 1;
        println!("FAIL total runtime {:.2} s exceeds 60 s", total.as_secs_f64());
    }
    println!("{} of {} criteria passed in {:.2} s", criteria.len() - failed.min(criteria.len()), criteria.len(), total.as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
