//! Browser bindings for the demo page in `www/`.
//!
//! Each export has a plain Rust counterpart returning `Result<_, String>` so
//! the logic is testable off the wasm target.

use landau_coherent::measure::{Measure, MeasureParams};
use landau_coherent::observables::{number_moments, quadrature_covariances, su2_squeeze};
use landau_coherent::states::{build_state, CoherencePoint, ModelParams};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest level the page may request.
pub const MAX_LEVEL: u32 = 40;
/// Largest number of curve samples per call.
pub const MAX_POINTS: usize = 2000;

fn check(n: u32, r: u32) -> Result<ModelParams, String> {
    if n > MAX_LEVEL {
        return Err(format!("n must be at most {MAX_LEVEL}"));
    }
    ModelParams::new(n, r).map_err(|e| e.to_string())
}

fn samples(t_max: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must be in 2..={MAX_POINTS}"));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err("t_max must be positive".into());
    }
    // start just above 0 so every statistic is defined
    let lo = t_max / points as f64;
    Ok((0..points)
        .map(|i| lo + (t_max - lo) * i as f64 / (points - 1) as f64)
        .collect())
}

/// `|c_k|^2` for `k = 0..=n`.
pub fn probabilities(n: u32, r: u32, t: f64, phi: f64) -> Result<Vec<f64>, String> {
    let params = check(n, r)?;
    let z = CoherencePoint::from_t(t, phi).map_err(|e| e.to_string())?;
    Ok(build_state(&params, &z).probabilities())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Curves {
    pub t: Vec<f64>,
    pub q_a: Vec<Option<f64>>,
    pub q_b: Vec<Option<f64>>,
    pub g2: Vec<Option<f64>>,
    pub s_x: Vec<f64>,
    pub s_p: Vec<f64>,
    pub s_1: Vec<Option<f64>>,
    pub s_2: Vec<Option<f64>>,
}

/// Photon statistics and squeezing parameters on `(0, t_max]`.
pub fn curves(n: u32, r: u32, phi: f64, t_max: f64, points: usize) -> Result<Curves, String> {
    let params = check(n, r)?;
    let mut out = Curves::default();
    for t in samples(t_max, points)? {
        let z = CoherencePoint::from_t(t, phi).map_err(|e| e.to_string())?;
        let stats = number_moments(&params, &z).map_err(|e| e.to_string())?;
        let quad = quadrature_covariances(&params, &z).map_err(|e| e.to_string())?;
        let sq = su2_squeeze(&params, &z).map_err(|e| e.to_string())?;
        out.t.push(t);
        out.q_a.push(stats.q_a().ok());
        out.q_b.push(stats.q_b().ok());
        out.g2.push(stats.g2().ok());
        out.s_x.push(quad.s_x);
        out.s_p.push(quad.s_p);
        out.s_1.push(sq.s1);
        out.s_2.push(sq.s2);
    }
    Ok(out)
}

/// `(t, K_r(t))` pairs, flattened.
pub fn density_curve(n: u32, r: u32, t_max: f64, points: usize) -> Result<Vec<f64>, String> {
    check(n, r)?;
    let m = Measure::new(MeasureParams::new(n, r).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * points);
    for t in samples(t_max, points)? {
        out.push(t);
        out.push(m.density(t).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn state_probabilities(n: u32, r: u32, t: f64, phi: f64) -> Result<Vec<f64>, JsError> {
    probabilities(n, r, t, phi).map_err(|e| JsError::new(&e))
}

/// JSON object of equal-length arrays keyed `t, q_a, q_b, g2, s_x, s_p, s_1, s_2`.
#[wasm_bindgen]
pub fn statistics_curve(n: u32, r: u32, phi: f64, t_max: f64, points: usize) -> Result<String, JsError> {
    let c = curves(n, r, phi, t_max, points).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&c).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn measure_curve(n: u32, r: u32, t_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    density_curve(n, r, t_max, points).map_err(|e| JsError::new(&e))
}
