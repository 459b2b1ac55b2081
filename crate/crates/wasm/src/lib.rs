//! Browser bindings for the demo page in `www/`. Each export wraps a plain
//! function returning JSON text, so everything but the JS glue runs natively.

use num::ToPrimitive;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use umbra_core::classical;
use umbra_core::expr::{parse_polynomial, parse_series_spec};
use umbra_core::identities;
use umbra_core::rational::{from_usize, parse_rational};
use umbra_core::sheffer::{expand_in_sheffer, ExpansionDoc};
use umbra_core::{Basis, Polynomial};

const MAX_SAMPLES: usize = 2000;

#[derive(Serialize)]
struct Curve {
    polynomial: String,
    latex: String,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

#[derive(Serialize)]
struct Expansion {
    #[serde(flatten)]
    doc: ExpansionDoc,
    polynomial: String,
}

#[derive(Serialize)]
struct Pairing {
    series: String,
    value: String,
}

fn family(name: &str, n: usize, r: usize) -> Result<Polynomial, String> {
    match name {
        "bernoulli" => Ok(classical::bernoulli_poly(n)),
        "euler" => Ok(classical::euler_poly(n)),
        "bernoulli-order" => {
            if r > classical::max_order() {
                return Err(format!("order {r} is above the cap {}", classical::max_order()));
            }
            classical::bernoulli_poly_order(n, r).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown family {other:?}")),
    }
}

/// `samples + 1` evenly spaced points on `[lo, hi]`, evaluated exactly and
/// only then rounded for plotting.
pub fn family_curve_json(name: &str, n: usize, r: usize, lo: &str, hi: &str, samples: usize) -> Result<String, String> {
    let p = family(name, n, r)?;
    let lo = parse_rational(lo).map_err(|e| e.to_string())?;
    let hi = parse_rational(hi).map_err(|e| e.to_string())?;
    if hi <= lo {
        return Err("need lo < hi".into());
    }
    let samples = samples.clamp(1, MAX_SAMPLES);
    let step = (&hi - &lo) / from_usize(samples);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for i in 0..=samples {
        let x = &lo + &step * from_usize(i);
        ys.push(p.eval(&x).to_f64().unwrap_or(f64::NAN));
        xs.push(x.to_f64().unwrap_or(f64::NAN));
    }
    let curve = Curve { polynomial: p.to_string(), latex: p.to_latex(), xs, ys };
    serde_json::to_string(&curve).map_err(|e| e.to_string())
}

pub fn expand_json(basis: &str, r: usize, src: &str) -> Result<String, String> {
    let p = parse_polynomial(src).map_err(|e| e.to_string())?;
    let e = match basis {
        "bernoulli" => identities::expand_bernoulli_basis(&p),
        "bernoulli-order" => identities::expand_bernoulli_order_basis(&p, r).map_err(|e| e.to_string())?,
        "euler" => expand_in_sheffer(&p, &Basis::Euler).map_err(|e| e.to_string())?,
        other => return Err(format!("unknown basis {other:?}")),
    };
    let out = Expansion { doc: ExpansionDoc::from(&e), polynomial: p.to_string() };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

pub fn pairing_json(series: &str, src: &str, trunc: usize) -> Result<String, String> {
    let p = parse_polynomial(src).map_err(|e| e.to_string())?;
    let f = parse_series_spec(series, trunc).map_err(|e| e.to_string())?;
    let value = f.pairing(&p).map_err(|e| e.to_string())?;
    serde_json::to_string(&Pairing { series: f.to_string(), value: value.to_string() }).map_err(|e| e.to_string())
}

#[wasm_bindgen(js_name = familyCurve)]
pub fn family_curve(name: &str, n: u32, r: u32, lo: &str, hi: &str, samples: u32) -> Result<String, JsError> {
    family_curve_json(name, n as usize, r as usize, lo, hi, samples as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn expand(basis: &str, r: u32, src: &str) -> Result<String, JsError> {
    expand_json(basis, r as usize, src).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pairing(series: &str, src: &str, trunc: u32) -> Result<String, JsError> {
    pairing_json(series, src, trunc as usize).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn curve_of_b2() {
        let v = parse(&family_curve_json("bernoulli", 2, 0, "0", "1", 4).unwrap());
        assert_eq!(v["polynomial"], "x^2 - x + 1/6");
        assert_eq!(v["xs"].as_array().unwrap().len(), 5);
        // B_2(1/2) = -1/12
        assert!((v["ys"][2].as_f64().unwrap() + 1.0 / 12.0).abs() < 1e-15);
        assert!(family_curve_json("bernoulli", 2, 0, "1", "0", 4).is_err());
        assert!(family_curve_json("legendre", 2, 0, "0", "1", 4).is_err());
    }

    #[test]
    fn expansion() {
        let v = parse(&expand_json("bernoulli", 0, "x^2").unwrap());
        assert_eq!(v["coeffs"], serde_json::json!(["1/3", "1", "1"]));
        let v = parse(&expand_json("bernoulli-order", 2, "B(2, 2)").unwrap());
        assert_eq!(v["coeffs"], serde_json::json!(["0", "0", "1"]));
        assert!(expand_json("bernoulli", 0, "(x").is_err());
    }

    #[test]
    fn pairings() {
        let v = parse(&pairing_json("bernoulli", "x^12", 16).unwrap());
        assert_eq!(v["value"], "-691/2730");
        assert!(pairing_json("exp", "x^5", 3).is_err());
    }
}
