//! Factorials, binomials and multinomials as exact rationals.

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Factorial,
    Binomial,
    Multinomial,
}

/// Checked entry point over signed arguments.
///
/// * `Factorial`: `[n]`
/// * `Binomial`: `[n, k]` (zero when `k > n`)
/// * `Multinomial`: `[n, i_1, ..., i_m]` with `i_1 + ... + i_m = n`
pub fn combinatorial(kind: Kind, args: &[i64]) -> Result<Rational> {
    if let Some(a) = args.iter().find(|a| **a < 0) {
        return Err(Error::Domain(format!("negative argument {a}")));
    }
    let u: Vec<usize> = args.iter().map(|&a| a as usize).collect();
    let arity = |want: usize| {
        if u.len() == want {
            Ok(())
        } else {
            Err(Error::Domain(format!("{kind:?} takes {want} arguments, got {}", u.len())))
        }
    };
    let value = match kind {
        Kind::Factorial => {
            arity(1)?;
            factorial(u[0])
        }
        Kind::Binomial => {
            arity(2)?;
            binomial(u[0], u[1])
        }
        Kind::Multinomial => {
            let (&n, parts) = u
                .split_first()
                .ok_or_else(|| Error::Domain("multinomial needs n".into()))?;
            if parts.iter().sum::<usize>() != n {
                return Err(Error::Domain(format!("multinomial parts {parts:?} do not sum to {n}")));
            }
            multinomial(parts)
        }
    };
    Ok(Rational::from_integer(value))
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    // Each prefix product is itself a binomial, so the division is exact.
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `(i_1 + ... + i_m)! / (i_1! ... i_m!)`
pub fn multinomial(parts: &[usize]) -> BigInt {
    let mut total = 0;
    let mut acc = BigInt::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

pub fn factorial_q(n: usize) -> Rational {
    Rational::from_integer(factorial(n))
}

pub fn binomial_q(n: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(n, k))
}

/// Calls `visit` with every composition of `n` into `parts` nonnegative parts,
/// in lexicographic order.
pub fn for_each_composition(n: usize, parts: usize, mut visit: impl FnMut(&[usize])) {
    if parts == 0 {
        if n == 0 {
            visit(&[]);
        }
        return;
    }
    let mut buf = vec![0; parts];
    fill(n, 0, &mut buf, &mut visit);

    fn fill(rest: usize, slot: usize, buf: &mut [usize], visit: &mut impl FnMut(&[usize])) {
        if slot + 1 == buf.len() {
            buf[slot] = rest;
            visit(buf);
            return;
        }
        for take in 0..=rest {
            buf[slot] = take;
            fill(rest - take, slot + 1, buf, visit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn spot_values() {
        assert_eq!(combinatorial(Kind::Factorial, &[0]).unwrap(), int(1));
        assert_eq!(combinatorial(Kind::Binomial, &[4, 2]).unwrap(), int(6));
        assert_eq!(combinatorial(Kind::Multinomial, &[3, 1, 1, 1]).unwrap(), int(6));
        assert_eq!(factorial(20), BigInt::from(2_432_902_008_176_640_000u64));
        assert_eq!(binomial(3, 5), BigInt::zero());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(combinatorial(Kind::Factorial, &[-1]), Err(Error::Domain(_))));
        assert!(matches!(combinatorial(Kind::Binomial, &[3, -1]), Err(Error::Domain(_))));
        assert!(matches!(combinatorial(Kind::Multinomial, &[3, 1, 1]), Err(Error::Domain(_))));
        assert!(matches!(combinatorial(Kind::Binomial, &[3]), Err(Error::Domain(_))));
    }

    #[test]
    fn binomial_is_two_part_multinomial() {
        for n in 0..=30usize {
            for k in 0..=n {
                let b = combinatorial(Kind::Binomial, &[n as i64, k as i64]).unwrap();
                let m = combinatorial(Kind::Multinomial, &[n as i64, k as i64, (n - k) as i64]).unwrap();
                assert_eq!(b, m, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn compositions_are_counted() {
        // C(n + m - 1, m - 1) compositions of n into m parts.
        let mut count = 0;
        for_each_composition(6, 3, |c| {
            assert_eq!(c.iter().sum::<usize>(), 6);
            count += 1;
        });
        assert_eq!(count, 28);
        let mut empty = 0;
        for_each_composition(0, 0, |_| empty += 1);
        assert_eq!(empty, 1);
        for_each_composition(2, 0, |_| panic!("no compositions of 2 into 0 parts"));
    }
}
