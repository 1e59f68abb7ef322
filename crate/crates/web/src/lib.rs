//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The `*_values` functions hold the logic and run natively under test; the
//! exported wrappers only translate errors into JavaScript exceptions.

use pll_core::detstats::{self, DEFAULT_TAIL_TOL};
use pll_core::optimize::{self, log_grid, Model, SearchOptions};
use wasm_bindgen::prelude::*;

/// Largest grid the page may request, to keep the tab responsive.
const MAX_CELLS: usize = 40 * 40;
const MAX_CURVE_POINTS: usize = 2000;

fn model(name: &str) -> Result<Model, String> {
    name.parse()
}

fn grid(lo: f64, hi: f64, n: usize, what: &str) -> Result<Vec<f64>, String> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || n < 2 {
        return Err(format!("{what}: need 0 < min < max and at least 2 points"));
    }
    Ok(log_grid(lo, hi, n))
}

/// Optimized PIE over a log grid, noise-major (`noise_points` rows of
/// `ns_points`). Cells that fail to optimize are NaN.
pub fn heatmap_values(
    model_name: &str,
    ns_min: f64,
    ns_max: f64,
    ns_points: usize,
    noise_min: f64,
    noise_max: f64,
    noise_points: usize,
) -> Result<Vec<f64>, String> {
    let model = model(model_name)?;
    if ns_points * noise_points > MAX_CELLS {
        return Err(format!("at most {MAX_CELLS} cells"));
    }
    let ns = grid(ns_min, ns_max, ns_points, "n_s")?;
    let noise = grid(noise_min, noise_max, noise_points, "noise")?;
    // Photon number resolution gets the shorter range here; its cost grows
    // with the pulse energy.
    let range = (1e-6, 1e3);
    let table = optimize::sweep(model, &ns, &noise, range, &SearchOptions::default())
        .map_err(|e| e.to_string())?;
    Ok(table
        .cells
        .iter()
        .map(|c| c.result.as_ref().map_or(f64::NAN, |p| p.pie_star))
        .collect())
}

/// PIE against pulse energy at fixed `(n_s, noise)`, on a log grid over
/// `[max(nf_min, floor), nf_max]`. Returns the grid followed by the values.
pub fn curve_values(
    model_name: &str,
    n_s: f64,
    noise: f64,
    nf_min: f64,
    nf_max: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let model = model(model_name)?;
    if points > MAX_CURVE_POINTS {
        return Err(format!("at most {MAX_CURVE_POINTS} points"));
    }
    if !(n_s > 0.0) {
        return Err("n_s must be > 0".into());
    }
    let nf = grid(nf_min.max(model.min_nf(n_s)), nf_max, points, "n_f")?;
    let objective = model.objective(n_s, noise);
    let mut out = nf.clone();
    for &v in &nf {
        out.push(objective(v).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// `[nf_star, m_star, pie_star]` at `(n_s, noise)`.
pub fn optimum_values(model_name: &str, n_s: f64, noise: f64, nf_max: f64) -> Result<Vec<f64>, String> {
    let model = model(model_name)?;
    let p = optimize::optimize_point(model, n_s, noise, (1e-6, nf_max), &SearchOptions::default())
        .map_err(|e| e.to_string())?;
    Ok(vec![p.nf_star, p.m_star, p.pie_star])
}

/// Photocount laws behind a single-mode gate: `p_k` followed by `q_k`, both
/// of length `k_max + 1`.
pub fn counts_values(n_f: f64, n_n: f64) -> Result<Vec<f64>, String> {
    let s = detstats::pnr_stats(n_f, n_n, DEFAULT_TAIL_TOL).map_err(|e| e.to_string())?;
    let mut out = s.p;
    out.extend(s.q);
    Ok(out)
}

#[wasm_bindgen]
pub fn heatmap(
    model: &str,
    ns_min: f64,
    ns_max: f64,
    ns_points: usize,
    noise_min: f64,
    noise_max: f64,
    noise_points: usize,
) -> Result<Vec<f64>, JsError> {
    heatmap_values(model, ns_min, ns_max, ns_points, noise_min, noise_max, noise_points)
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pie_curve(
    model: &str,
    n_s: f64,
    noise: f64,
    nf_min: f64,
    nf_max: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    curve_values(model, n_s, noise, nf_min, nf_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn optimum(model: &str, n_s: f64, noise: f64, nf_max: f64) -> Result<Vec<f64>, JsError> {
    optimum_values(model, n_s, noise, nf_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn count_distributions(n_f: f64, n_n: f64) -> Result<Vec<f64>, JsError> {
    counts_values(n_f, n_n).map_err(|e| JsError::new(&e))
}
