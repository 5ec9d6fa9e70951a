//! Browser bindings. Every export takes strings and returns a JSON string.

use num_rational::BigRational;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use vieta_tubes::chamber::{rho_sl, rho_sp, Direction, Group, Norm, SignPattern};
use vieta_tubes::entropy::{self, arithmetic_grid, fit_entropy, Filter, Mode};
use vieta_tubes::poly::IntPolynomial;
use vieta_tubes::rational::{parse_rational, rational_to_f64};
use vieta_tubes::realize::{cartan_projection, companion, jordan_data, IntMatrix};
use vieta_tubes::volume::{volume_curve as tube_curve, volume_slope};
use vieta_tubes::Error;

/// Largest box enumerated in the page; beyond it points are sampled.
pub const PAGE_CAP: u64 = 200_000;

fn group(s: &str) -> Result<Group, Error> {
    match s {
        "sl" => Ok(Group::Sl),
        "sp" => Ok(Group::Sp),
        _ => Err(Error::Parse(format!("unknown group {s:?}"))),
    }
}

fn direction(g: &str, v: &str, m: &str) -> Result<(Direction, SignPattern), Error> {
    let v = Direction::parse(group(g)?, v)?;
    let m = if m.trim().is_empty() { SignPattern::all_positive(v.n()) } else { SignPattern::parse(m)? };
    vieta_tubes::chamber::check_pattern(&v, &m, false)?;
    Ok((v, m))
}

fn grid(s: &str) -> Result<Vec<BigRational>, Error> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, c] => arithmetic_grid(&parse_rational(a)?, &parse_rational(b)?, &parse_rational(c)?),
        _ => s.split(',').map(parse_rational).collect(),
    }
}

fn rho(v: &Direction) -> f64 {
    match v.group() {
        Group::Sl => rational_to_f64(&rho_sl(v)),
        Group::Sp => rational_to_f64(&rho_sp(v)),
    }
}

fn error_json(e: &Error) -> String {
    json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

/// Counts along a T grid with the log-linear fit.
pub fn count(g: &str, v: &str, m: &str, eps: &str, t: &str, filter: &str, seed: u64) -> Result<String, Error> {
    let (v, m) = direction(g, v, m)?;
    let filter = Filter::parse(filter)?;
    let mode = if filter == Filter::Box {
        Mode::Exact
    } else {
        Mode::Exhaustive { cap: PAGE_CAP, fallback: Some((2000, seed)) }
    };
    let recs = entropy::count_curve(&v, &m, &parse_rational(eps)?, &grid(t)?, filter, mode)?;
    let target = rho(&v);
    let fit = fit_entropy(&recs, target).ok();
    let points: Vec<Value> = recs
        .iter()
        .map(|r| json!({ "T": r.t_f64(), "log_count": r.ln_count(), "count": r.count.to_string(), "mode": r.mode }))
        .collect();
    Ok(json!({ "points": points, "target": target, "fit": fit }).to_string())
}

/// Companion matrix with its Jordan and Cartan projections.
pub fn realize(poly: &str) -> Result<String, Error> {
    let p = IntPolynomial::parse_descending(poly)?;
    let c = companion(&p)?;
    let j = jordan_data(&c)?;
    let mu = cartan_projection(&c)?.mu;
    Ok(json!({ "poly": p.to_string(), "matrix": c, "jordan": j, "cartan": mu }).to_string())
}

/// Jordan and Cartan projections of a matrix given as JSON rows.
pub fn project(matrix: &str) -> Result<String, Error> {
    let m = IntMatrix::from_json(matrix)?;
    let j = jordan_data(&m)?;
    let mu = cartan_projection(&m)?.mu;
    Ok(json!({ "matrix": m, "jordan": j, "cartan": mu }).to_string())
}

/// Haar volume of tubes along a T grid, with the slope against 2 rho.
pub fn volume(g: &str, v: &str, t: &str, eps: f64, samples: u64, seed: u64) -> Result<String, Error> {
    let (v, _) = direction(g, v, "")?;
    let ts: Vec<f64> = grid(t)?.iter().map(rational_to_f64).collect();
    let curve = tube_curve(&v, &ts, eps, Norm::Euclidean, samples, seed)?;
    let points: Vec<Value> = curve
        .iter()
        .map(|c| json!({ "T": c.t, "log_volume": c.log_estimate, "relative_std_error": c.relative_std_error }))
        .collect();
    Ok(json!({ "points": points, "slope": volume_slope(&curve), "target": 2.0 * rho(&v) }).to_string())
}

fn js(r: Result<String, Error>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&error_json(&e)))
}

#[wasm_bindgen(js_name = countCurve)]
pub fn count_js(g: &str, v: &str, m: &str, eps: &str, t: &str, filter: &str, seed: u32) -> Result<String, JsValue> {
    js(count(g, v, m, eps, t, filter, seed as u64))
}

#[wasm_bindgen(js_name = realize)]
pub fn realize_js(poly: &str) -> Result<String, JsValue> {
    js(realize(poly))
}

#[wasm_bindgen(js_name = project)]
pub fn project_js(matrix: &str) -> Result<String, JsValue> {
    js(project(matrix))
}

#[wasm_bindgen(js_name = volumeCurve)]
pub fn volume_js(g: &str, v: &str, t: &str, eps: f64, samples: u32, seed: u32) -> Result<String, JsValue> {
    js(volume(g, v, t, eps, samples as u64, seed as u64))
}
