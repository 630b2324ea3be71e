//! Browser bindings for the demo page in `www/`.
//!
//! Each export returns a JSON string; the `*_json` functions hold the logic so
//! it can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use scale_hilbert::hessian::{self, ScaleOperator, Tolerances};
use scale_hilbert::{random, sobolev, TruncatedScaleSpace, Weight};

const MAX_NU: usize = 4096;
const MAX_OPERATOR: usize = 128;

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct RatioSeries {
    k: u32,
    limit: f64,
    ratios: Vec<f64>,
}

/// `sobolev_to_fractal_ratio(ν, k)` for `ν ≤ nu_max` and each `k ≤ k_max`.
pub fn sobolev_ratios_json(nu_max: usize, k_max: u32) -> Result<String, String> {
    if nu_max == 0 || nu_max > MAX_NU || k_max > 6 {
        return Err(format!("need 1 ≤ nu_max ≤ {MAX_NU} and k_max ≤ 6"));
    }
    let series: Vec<RatioSeries> = (0..=k_max)
        .map(|k| RatioSeries {
            k,
            limit: std::f64::consts::PI.powi(2 * k as i32),
            ratios: (1..=nu_max).map(|nu| sobolev::sobolev_to_fractal_ratio(nu, k)).collect(),
        })
        .collect();
    to_json(&series)
}

/// Full certificate report for `Qᵀ diag(γ) Q` with `Q` drawn from `seed`.
pub fn analyze_spectrum_json(gammas: &[f64], k_max: usize, seed: u64) -> Result<String, String> {
    if gammas.is_empty() || gammas.len() > MAX_OPERATOR || gammas.iter().any(|g| !g.is_finite()) {
        return Err(format!("need 1 to {MAX_OPERATOR} finite eigenvalues"));
    }
    let matrix = random::conjugated_diagonal(gammas, &mut random::rng(seed));
    let op = ScaleOperator::on_graph_scale(matrix, k_max.clamp(1, 4)).map_err(|e| e.to_string())?;
    to_json(&hessian::analyze(&op, op.scale().k_max(), Tolerances::default()))
}

/// Inclusion singular values of `ℓ^{2,f}` with `f(ν) = ν^degree + 1`.
pub fn inclusion_values_json(n: usize, degree: u32) -> Result<String, String> {
    if n == 0 || n > MAX_NU || degree > 12 {
        return Err(format!("need 1 ≤ n ≤ {MAX_NU} and degree ≤ 12"));
    }
    let space = TruncatedScaleSpace::weighted(&Weight::poly_plus_one(n, degree), 1);
    to_json(&space.inclusion_singular_values(1).map_err(|e| e.to_string())?)
}

#[wasm_bindgen]
pub fn sobolev_ratios(nu_max: usize, k_max: u32) -> Result<String, JsError> {
    sobolev_ratios_json(nu_max, k_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze_spectrum(gammas: Vec<f64>, k_max: usize, seed: u64) -> Result<String, JsError> {
    analyze_spectrum_json(&gammas, k_max, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn inclusion_values(n: usize, degree: u32) -> Result<String, JsError> {
    inclusion_values_json(n, degree).map_err(|e| JsError::new(&e))
}
