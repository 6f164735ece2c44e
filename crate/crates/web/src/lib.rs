//! Browser bindings. Every export takes and returns JSON strings; the
//! `*_json` functions do the work and are what the native tests call.

use serde::Serialize;
use stringy_core::algebra::format_rational;
use stringy_core::mckay::{
    evaluate_mckay, verify_mckay, GroupLimits, LinearAction, McKay, McKayEvaluation,
};
use stringy_core::snc::{a_chain, evaluate, LogTerminalGate, SncDatum, SncEvaluation, SncFile};
use wasm_bindgen::prelude::*;

/// Browser-side cap: keeps the page responsive.
const CAP: usize = 96;

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct QuotientView {
    evaluation: McKayEvaluation,
    all_pass: bool,
    failed: Vec<String>,
}

/// Diagonal action of weights `weights` (one vector per generator) over `r`.
pub fn quotient_json(r: u32, weights: &str) -> Result<String, String> {
    let weights: Vec<Vec<i64>> =
        serde_json::from_str(weights).map_err(|e| format!("weights: {e}"))?;
    let action = LinearAction::diagonal(r.into(), &weights).map_err(|e| e.to_string())?;
    let mk = McKay::from_action(&action, GroupLimits::uniform(CAP)).map_err(|e| e.to_string())?;
    let evaluation = evaluate_mckay(&mk).map_err(|e| e.to_string())?;
    let report = verify_mckay(&mk, None, LogTerminalGate::Required).map_err(|e| e.to_string())?;
    to_json(&QuotientView {
        evaluation,
        all_pass: report.all_pass(),
        failed: report.failed().into_iter().map(String::from).collect(),
    })
}

#[derive(Serialize)]
struct ChainView {
    n: u32,
    resolution: SncEvaluation,
    conjugacy_classes: usize,
    e_orbifold: String,
    all_pass: bool,
}

/// Minimal resolution of `ℂ²/ℤ_n` checked against the group side.
pub fn chain_json(n: u32) -> Result<String, String> {
    if !(2..=24).contains(&n) {
        return Err("n must be between 2 and 24".into());
    }
    let d = a_chain(n);
    let resolution = evaluate(&d, LogTerminalGate::Required).map_err(|e| e.to_string())?;
    let action = LinearAction::diagonal(n.into(), &[vec![1, i64::from(n) - 1]])
        .map_err(|e| e.to_string())?;
    let mk = McKay::from_action(&action, GroupLimits::uniform(CAP)).map_err(|e| e.to_string())?;
    let report =
        verify_mckay(&mk, Some(&d), LogTerminalGate::Required).map_err(|e| e.to_string())?;
    to_json(&ChainView {
        n,
        resolution,
        conjugacy_classes: report.conjugacy_classes,
        e_orbifold: format_rational(&report.e_orbifold),
        all_pass: report.all_pass(),
    })
}

/// Evaluates an SNC datum given in the CLI's JSON schema.
pub fn snc_json(text: &str, allow_beyond_lt: bool) -> Result<String, String> {
    let file: SncFile = stringy_core::json::from_str(text).map_err(|e| e.to_string())?;
    let d = SncDatum::try_from(file).map_err(|e| e.to_string())?;
    let gate = if allow_beyond_lt {
        LogTerminalGate::AllowBeyond
    } else {
        LogTerminalGate::Required
    };
    to_json(&evaluate(&d, gate).map_err(|e| e.to_string())?)
}

#[wasm_bindgen]
pub fn quotient(r: u32, weights: &str) -> Result<String, JsValue> {
    quotient_json(r, weights).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn chain(n: u32) -> Result<String, JsValue> {
    chain_json(n).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn snc(text: &str, allow_beyond_lt: bool) -> Result<String, JsValue> {
    snc_json(text, allow_beyond_lt).map_err(|e| JsValue::from_str(&e))
}
