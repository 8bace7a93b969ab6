//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each binding returns a flat `Float64Array`. The plain functions behind
//! them are public so they can be tested natively.

use contact_valuations::contact_local::{ClosedSurface, ContactChart, SearchOptions};
use contact_valuations::crofton_flat::gauss_crofton_integral;
use contact_valuations::grassmann_mc::{kahler_angles, kappa, order_statistic_cdf, sample_subspace, stream_rng};
use wasm_bindgen::prelude::*;

const MAX_SAMPLES: usize = 200_000;
const MAX_BINS: usize = 200;

/// `phi_2` of the origin sphere of each radius in the symmetric chart with
/// the given scale, followed by `8 / (1 + R^-2 / scale^2)` for each radius.
/// Radii whose search fails give `NaN`.
pub fn sphere_radius_curve(radii: &[f64], scale: f64) -> Result<Vec<f64>, String> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(format!("chart scale {scale} must be positive"));
    }
    let chart = ContactChart::Symmetric { scale };
    let computed = radii.iter().map(|&r| {
        ClosedSurface::sphere(r, [0.0; 3], chart)
            .and_then(|s| s.contact_points(SearchOptions::for_dimension(1)))
            .map(|points| points.iter().map(|p| p.local_areas[2]).sum())
            .unwrap_or(f64::NAN)
    });
    let law = radii.iter().map(|&r| 8.0 / (1.0 + 1.0 / (r * r * scale * scale)));
    Ok(computed.chain(law).collect())
}

/// Histogram of the largest Kähler cosine of Haar-random `2k`-planes in
/// `R^{2n}` on `bins` equal cells of `[0, 1]`, as densities, followed by the
/// densities of the largest of `kappa` independent uniforms on the same cells.
pub fn kahler_cosine_histogram(n: usize, k: usize, samples: usize, seed: u64, bins: usize) -> Result<Vec<f64>, String> {
    if k == 0 || k > n {
        return Err(format!("need 1 <= k <= n, got n = {n}, k = {k}"));
    }
    if kappa(n, k) == 0 {
        return Err(format!("a {}-plane in R^{} has no nontrivial Kähler angle", 2 * k, 2 * n));
    }
    if !(1..=MAX_BINS).contains(&bins) || !(1..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("bins must be in 1..={MAX_BINS} and samples in 1..={MAX_SAMPLES}"));
    }
    let mut rng = stream_rng(seed, 0);
    let mut counts = vec![0usize; bins];
    for _ in 0..samples {
        let angles = kahler_angles(&sample_subspace(n, k, &mut rng)).map_err(|e| e.to_string())?;
        let top = angles.cosines[0];
        counts[((top * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let width = 1.0 / bins as f64;
    let observed = counts.iter().map(|&c| c as f64 / (samples as f64 * width));
    let kap = kappa(n, k);
    let reference = (0..bins).map(|i| {
        let lo = i as f64 * width;
        (order_statistic_cdf(kap, 1, lo + width) - order_statistic_cdf(kap, 1, lo)) / width
    });
    Ok(observed.chain(reference).collect())
}

/// Beta closed form of the Gauss-Crofton integral over lines in `R^{m+1}`
/// for each `s`, followed by
/// its quadrature (`NaN` where the integral diverges).
pub fn gauss_crofton_curve(m: usize, s_values: &[f64]) -> Result<Vec<f64>, String> {
    let rows = s_values.iter().map(|&s| gauss_crofton_integral(m, s)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let closed = rows.iter().map(|g| g.closed_form);
    let quadrature = rows.iter().map(|g| g.quadrature.unwrap_or(f64::NAN));
    Ok(closed.chain(quadrature).collect())
}

#[wasm_bindgen(js_name = sphereRadiusCurve)]
pub fn sphere_radius_curve_js(radii: &[f64], scale: f64) -> Result<Vec<f64>, JsError> {
    sphere_radius_curve(radii, scale).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = kahlerCosineHistogram)]
pub fn kahler_cosine_histogram_js(n: usize, k: usize, samples: usize, seed: u32, bins: usize) -> Result<Vec<f64>, JsError> {
    kahler_cosine_histogram(n, k, samples, u64::from(seed), bins).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = gaussCroftonCurve)]
pub fn gauss_crofton_curve_js(m: usize, s_values: &[f64]) -> Result<Vec<f64>, JsError> {
    gauss_crofton_curve(m, s_values).map_err(|e| JsError::new(&e))
}
