#![allow(dead_code)]

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use umbra_core::expr::Expr;
use umbra_core::rational::ratio;

pub const CORPUS_SEED: u64 = 20_240_117;

/// Random well-formed expression; degrees stay small so lowering is cheap.
pub fn random_expr(rng: &mut impl Rng, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..5) {
            0 => Expr::Rat(ratio(rng.gen_range(0..=12), 1)),
            1 => Expr::Rat(ratio(rng.gen_range(0..=12), rng.gen_range(1..=7))),
            2 => Expr::X,
            3 => Expr::Bernoulli {
                n: rng.gen_range(0..=5),
                r: rng.gen_bool(0.5).then(|| rng.gen_range(0..=3)),
            },
            _ => Expr::Euler { n: rng.gen_range(0..=5) },
        };
    }
    let sub = |rng: &mut ChaCha8Rng| Box::new(random_expr(rng, depth - 1));
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    match rng.gen_range(0..5) {
        0 => Expr::Neg(sub(&mut local)),
        1 => Expr::Add(sub(&mut local), sub(&mut local)),
        2 => Expr::Sub(sub(&mut local), sub(&mut local)),
        3 => Expr::Mul(sub(&mut local), sub(&mut local)),
        _ => Expr::Pow(sub(&mut local), rng.gen_range(0..=2)),
    }
}

pub fn corpus(seed: u64, count: usize) -> Vec<Expr> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_expr(&mut rng, 4)).collect()
}

/// `Err` describes the first expression whose print/parse cycle is unstable.
pub fn round_trip(corpus: &[Expr]) -> Result<(), String> {
    for e in corpus {
        let printed = e.to_string();
        let parsed = umbra_core::expr::parse_expr(&printed).map_err(|err| format!("{printed:?}: {err}"))?;
        if &parsed != e {
            return Err(format!("{printed:?} parsed to a different tree: {parsed:?}"));
        }
        let reprinted = parsed.to_string();
        let reparsed = umbra_core::expr::parse_expr(&reprinted).map_err(|err| format!("{reprinted:?}: {err}"))?;
        if reparsed != parsed || reprinted != printed {
            return Err(format!("{printed:?} is not stable under print/parse"));
        }
    }
    Ok(())
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn umbra(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_umbra"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8"),
        stderr: String::from_utf8(out.stderr).expect("utf-8"),
    }
}

/// Decimal points and exponents outside of strings would mean a float leaked in.
pub fn has_float_literal(json: &str) -> bool {
    let value: serde_json::Value = serde_json::from_str(json).expect("valid JSON");
    let float = regex::Regex::new(r"^-?\d+(\.\d+)?([eE][+-]?\d+)?$").expect("regex");
    fn walk(v: &serde_json::Value, float: &regex::Regex) -> bool {
        match v {
            serde_json::Value::Number(n) => !n.is_i64() && !n.is_u64(),
            serde_json::Value::String(s) => float.is_match(s) && (s.contains('.') || s.contains('e') || s.contains('E')),
            serde_json::Value::Array(a) => a.iter().any(|x| walk(x, float)),
            serde_json::Value::Object(o) => o.values().any(|x| walk(x, float)),
            _ => false,
        }
    }
    walk(&value, &float) || regex::Regex::new(r"\d\.\d|\d[eE][+-]?\d").expect("regex").is_match(json)
}

pub const JSON_COMMANDS: &[&[&str]] = &[
    &["--format", "json", "bernoulli", "--n", "6"],
    &["--format", "json", "bernoulli", "--n", "5", "--r", "3"],
    &["--format", "json", "bernoulli", "--n", "4", "--at", "-3/2"],
    &["--format", "json", "euler", "--n", "7"],
    &["--format", "json", "euler", "--n", "3", "--at", "1/3"],
    &["--format", "json", "numbers", "--family", "bernoulli", "--upto", "20"],
    &["--format", "json", "numbers", "--family", "euler", "--upto", "15"],
    &["--format", "json", "numbers", "--family", "bernoulli-order", "--r", "3", "--upto", "10"],
    &["--format", "json", "expand", "--basis", "bernoulli", "x^2"],
    &["--format", "json", "expand", "--basis", "bernoulli-order", "--r", "2", "B(6)"],
    &["--format", "json", "expand", "--basis", "euler", "x^5 - 1/7"],
    &["--format", "json", "pairing", "--series", "bernoulli", "x^12"],
    &["--format", "json", "pairing", "--series", "1/2,0,3", "E(4)"],
    &["--format", "json", "verify", "--max-n", "4", "--max-r", "2"],
];
