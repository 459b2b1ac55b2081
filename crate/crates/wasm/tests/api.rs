use serde_json::Value;
use umbra_wasm::{expand_json, family_curve_json, pairing_json};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn euler_expansion_recombines_through_the_page_api() {
    let v = parse(&expand_json("euler", 0, "x^3 - 1/2").unwrap());
    assert_eq!(v["basis"], "euler");
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 4);
    assert_eq!(v["polynomial"], "x^3 - 1/2");
}

#[test]
fn order_curve_is_evaluated_exactly() {
    // B_2^(2)(x) = x^2 - 2x + 5/6, so B_2^(2)(0) = 5/6 and B_2^(2)(1) = -1/6
    let v = parse(&family_curve_json("bernoulli-order", 2, 2, "0", "1", 1).unwrap());
    assert_eq!(v["polynomial"], "x^2 - 2*x + 5/6");
    assert_eq!(v["ys"][0].as_f64().unwrap(), 5.0 / 6.0);
    assert_eq!(v["ys"][1].as_f64().unwrap(), -1.0 / 6.0);
}

#[test]
fn pairing_with_coefficient_list() {
    // <1 + 2t | x + 1> = 1 + 2*1!
    let v = parse(&pairing_json("1,2", "x + 1", 8).unwrap());
    assert_eq!(v["value"], "3");
    assert!(pairing_json("t", "x^300", 8).is_err());
}
