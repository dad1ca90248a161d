//! Browser bindings: approximation curves, a convergence ladder and basis
//! curves. Each export is a thin wrapper over a plain function so the logic
//! runs (and is tested) natively too.

use alpha_paltanea::analysis::{approximation_series, estimate_order, OperatorFamily};
use alpha_paltanea::{
    alpha_basis, lookup, modified_basis_m2, modified_basis_m3, BasisParams, Error, Function1D,
    OperatorParams, QuadratureConfig, Result, SchemeFamily,
};
use wasm_bindgen::prelude::*;

fn grid(points: usize) -> Result<Vec<f64>> {
    if !(2..=2001).contains(&points) {
        return Err(Error::InvalidParameter(format!(
            "points must lie in 2..=2001, got {points}"
        )));
    }
    Ok((0..points).map(|i| i as f64 / (points - 1) as f64).collect())
}

fn family(op: &str) -> Result<OperatorFamily> {
    match op {
        "q" => Ok(OperatorFamily::Q),
        "m1" => Ok(OperatorFamily::M1(SchemeFamily::PaperExample)),
        "m2" => Ok(OperatorFamily::M2Bar),
        "m3" => Ok(OperatorFamily::M3Tilde),
        other => Err(Error::InvalidParameter(format!("unknown operator `{other}`"))),
    }
}

/// Rows of `x, f, Q, M1, M2, M3`, flattened.
pub fn curves(function: &str, n: usize, rho: f64, alpha: f64, points: usize) -> Result<Vec<f64>> {
    let params = OperatorParams::new(n, alpha, rho)?;
    let f = Function1D::from_entry(lookup(function)?);
    let kinds: Vec<_> = OperatorFamily::all(SchemeFamily::PaperExample)
        .iter()
        .map(|fam| fam.kind_at(n, rho))
        .collect::<Result<_>>()?;
    let s = approximation_series(&f, &params, &kinds, &grid(points)?, &QuadratureConfig::default())?;
    let mut out = Vec::with_capacity(points * 6);
    for ((x, fx), row) in s.xs.iter().zip(&s.f).zip(&s.values) {
        out.push(*x);
        out.push(*fx);
        out.extend_from_slice(row);
    }
    Ok(out)
}

/// Errors at each `n`, followed by the fitted slope and its standard error.
pub fn ladder(function: &str, op: &str, rho: f64, alpha: f64, x: f64, ns: &[usize]) -> Result<Vec<f64>> {
    let template = OperatorParams::new(ns.first().copied().unwrap_or(2).max(2), alpha, rho)?;
    let f = Function1D::from_entry(lookup(function)?);
    let cfg = QuadratureConfig::new(1e-13, 1e-15, 4000)?;
    let r = estimate_order(&family(op)?, &template, &f, x, ns, &cfg)?;
    let mut out = r.errors;
    out.push(r.fitted_slope);
    out.push(r.slope_stderr);
    Ok(out)
}

/// Basis functions of degree `n` sampled on `points` grid points, one row
/// per index `k = 0..=n`. `kind` is `alpha`, `m2` or `m3`.
pub fn basis(kind: &str, n: usize, alpha: f64, rho: f64, points: usize) -> Result<Vec<f64>> {
    let params = BasisParams::new(n, alpha)?;
    let xs = grid(points)?;
    let eval = |k: i64, x: f64| match kind {
        "alpha" => alpha_basis(&params, k, x),
        "m2" => modified_basis_m2(&params, rho, k, x),
        "m3" => modified_basis_m3(&params, rho, k, x),
        other => Err(Error::InvalidParameter(format!("unknown basis `{other}`"))),
    };
    let mut out = Vec::with_capacity((n + 1) * points);
    for k in 0..=n as i64 {
        for &x in &xs {
            out.push(eval(k, x)?);
        }
    }
    Ok(out)
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = approximationCurves)]
pub fn approximation_curves(
    function: &str,
    n: usize,
    rho: f64,
    alpha: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    curves(function, n, rho, alpha, points).map_err(js)
}

#[wasm_bindgen(js_name = convergenceLadder)]
pub fn convergence_ladder(
    function: &str,
    op: &str,
    rho: f64,
    alpha: f64,
    x: f64,
    ns: Vec<usize>,
) -> Result<Vec<f64>, JsError> {
    ladder(function, op, rho, alpha, x, &ns).map_err(js)
}

#[wasm_bindgen(js_name = basisCurves)]
pub fn basis_curves(kind: &str, n: usize, alpha: f64, rho: f64, points: usize) -> Result<Vec<f64>, JsError> {
    basis(kind, n, alpha, rho, points).map_err(js)
}

/// Registry names, for the function picker.
#[wasm_bindgen(js_name = functionNames)]
pub fn function_names() -> Vec<String> {
    alpha_paltanea::registry::entries()
        .iter()
        .map(|e| e.name.to_string())
        .collect()
}
