//! Browser bindings: each entry point takes a datum config as JSON text and
//! returns the corresponding report section as JSON text.

use hasse_core::report::{parse_config, render_json, run, Command};
use wasm_bindgen::prelude::*;

/// Keeps enumeration responsive in a browser tab.
const BROWSER_WEYL_CAP: u64 = 200_000;

pub fn evaluate(command: Command, config: &str) -> Result<String, String> {
    let cfg = parse_config(config).map_err(|e| e.to_string())?;
    let outcome = run(command, &cfg, Some(BROWSER_WEYL_CAP)).map_err(|e| e.to_string())?;
    Ok(render_json(&outcome.report))
}

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// `zeta`, its invariant factors and the Hasse number.
#[wasm_bindgen(js_name = hasseReport)]
pub fn hasse_report(config: &str) -> Result<String, JsValue> {
    to_js(evaluate(Command::Hasse, config))
}

/// E-orbits with dimensions and the codimension-one strata.
#[wasm_bindgen(js_name = orbitCensus)]
pub fn orbit_census(config: &str) -> Result<String, JsValue> {
    to_js(evaluate(Command::Orbits, config))
}

/// Divisor coefficients and ampleness certificates for `-sum omega_i`.
#[wasm_bindgen]
pub fn positivity(config: &str) -> Result<String, JsValue> {
    to_js(evaluate(Command::Positivity, config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hasse_number_for_unitary() {
        let out =
            evaluate(Command::Hasse, r#"{"q":3,"group":{"builder":"unitary","n":3},"parabolic_type":[1]}"#).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["hasse_number"], "8");
    }

    #[test]
    fn census_for_gl2() {
        let out = evaluate(Command::Orbits, r#"{"q":2,"group":{"builder":"gl","n":2},"parabolic_type":[]}"#).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["orbits"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn errors_are_reported() {
        let err =
            evaluate(Command::Positivity, r#"{"q":6,"group":{"builder":"gl","n":2},"parabolic_type":[]}"#).unwrap_err();
        assert!(err.contains("prime power"));
    }
}
