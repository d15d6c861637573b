//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes and returns JSON text. Functions are given either as a
//! δ-subharmonic document (`plus_atoms/minus_atoms/plus_const/minus_const`)
//! or as a rational function (`zeros/poles/scale`, read as `ln|f|`).
//! Non-finite numbers are written as `null`, which the page draws as gaps.
//!
//! The `*_json` functions hold the logic and run natively in tests; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use num_complex::Complex64;
use serde_json::{json, Value};
use subharm::characteristics::{characteristic_t, counting_integral};
use subharm::inequalities::main_theorem_t;
use subharm::{DeltaSubharmonicFn, Exponent, IntervalSet, Part, QuadratureSpec, RadialProfile, RationalFunctionSpec, Weight};
use wasm_bindgen::prelude::*;

const MAX_SAMPLES: usize = 20_000;

fn parse_function(text: &str) -> Result<DeltaSubharmonicFn, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if value.get("zeros").is_some() || value.get("poles").is_some() {
        let f: RationalFunctionSpec = serde_json::from_value(value).map_err(|e| e.to_string())?;
        Ok(f.ln_abs())
    } else {
        serde_json::from_value(value).map_err(|e| e.to_string())
    }
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn check_samples(n: usize) -> Result<(), String> {
    if (2..=MAX_SAMPLES).contains(&n) {
        Ok(())
    } else {
        Err(format!("sample count must be in 2..={MAX_SAMPLES}, got {n}"))
    }
}

/// `U(re^{iθ})` on `samples` equally spaced angles, with `M_U(r)`, `C_U(r)`
/// and the atoms of the canonical pair.
pub fn circle_profile_json(function: &str, r: f64, samples: usize) -> Result<String, String> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(format!("r must be positive, got {r}"));
    }
    check_samples(samples)?;
    let u = parse_function(function)?;
    let profile = RadialProfile::new(&u);
    let theta: Vec<f64> = (0..samples)
        .map(|i| std::f64::consts::TAU * i as f64 / samples as f64)
        .collect();
    let values: Vec<Value> = theta
        .iter()
        .map(|&t| finite(profile.value(Complex64::from_polar(r, t))))
        .collect();
    let max = profile.max(Part::Identity, r);
    let mean = profile.mean(r);
    let canonical = profile.canonical();
    let atoms: Vec<Value> = [(1, &canonical.plus), (-1, &canonical.minus)]
        .into_iter()
        .flat_map(|(sign, part)| {
            part.charge
                .atoms()
                .iter()
                .map(move |a| json!({"re": a.re, "im": a.im, "mass": a.mass, "sign": sign}))
        })
        .collect();
    Ok(json!({
        "r": r,
        "theta": theta,
        "values": values,
        "max": finite(max.value),
        "mean": finite(mean.value),
        "atoms": atoms,
    })
    .to_string())
}

/// Radial curves on `n` log-spaced radii in `[r0, r_max]`: `M_U`, `M_{U⁺}`,
/// `C_U`, the counting integrals `N_{μ±}(r0, r)` and `T_U(r0, r)`.
pub fn radial_curves_json(function: &str, r0: f64, r_max: f64, n: usize) -> Result<String, String> {
    if !(r0 > 0.0 && r_max > r0 && r_max.is_finite()) {
        return Err(format!("need 0 < r0 < r_max, got r0 = {r0}, r_max = {r_max}"));
    }
    check_samples(n)?;
    let u = parse_function(function)?;
    let profile = RadialProfile::new(&u);
    let canonical = profile.canonical().clone();
    let quad = QuadratureSpec::default();
    let step = (r_max / r0).ln() / (n - 1) as f64;
    let radii: Vec<f64> = (0..n).map(|i| r0 * (step * i as f64).exp()).collect();
    let mut m = Vec::with_capacity(n);
    let mut m_plus = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    let mut n_plus = Vec::with_capacity(n);
    let mut n_minus = Vec::with_capacity(n);
    let mut t = Vec::with_capacity(n);
    for &r in &radii {
        m.push(finite(profile.max(Part::Identity, r).value));
        m_plus.push(finite(profile.max(Part::Positive, r).value));
        c.push(finite(profile.mean(r).value));
        n_plus.push(finite(counting_integral(&canonical.plus.charge, r0, r).map_err(|e| e.to_string())?));
        n_minus.push(finite(counting_integral(&canonical.minus.charge, r0, r).map_err(|e| e.to_string())?));
        t.push(finite(characteristic_t(&u, r0, r, &quad).map_err(|e| e.to_string())?.value));
    }
    Ok(json!({
        "r": radii,
        "M": m,
        "M_plus": m_plus,
        "C": c,
        "N_plus": n_plus,
        "N_minus": n_minus,
        "T": t,
    })
    .to_string())
}

/// The small-set bound on `(1/r)∫_E M_{U⁺}(t) g(t) dt` against
/// `T_U(r0, kr) + C_{U⁺}(r0)` with `g = 1` on the convex hull of `E`.
/// `p = ∞` is passed as any non-finite number or a value ≤ 0.
pub fn main_theorem_probe_json(
    function: &str,
    set: &str,
    r: f64,
    r0: f64,
    k: f64,
    p: f64,
) -> Result<String, String> {
    let u = parse_function(function)?;
    let e: IntervalSet = serde_json::from_str(set).map_err(|e| e.to_string())?;
    let (Some(&(lo, _)), Some(&(_, hi))) = (e.intervals().first(), e.intervals().last()) else {
        return Err("the set must contain an interval".into());
    };
    let p = if p.is_finite() && p > 0.0 { p } else { f64::INFINITY };
    let exponent = Exponent::new(p).map_err(|e| e.to_string())?;
    let g = Weight::constant(1.0, lo, hi, exponent).map_err(|e| e.to_string())?;
    let report = main_theorem_t(&u, &e, &g, r, r0, k, &QuadratureSpec::default()).map_err(|e| e.to_string())?;
    Ok(json!({
        "name": report.name,
        "lhs": finite(report.lhs),
        "rhs": finite(report.rhs),
        "ratio": finite(report.ratio),
        "ratio_infinite": report.ratio.is_infinite(),
        "error_estimate": finite(report.error_estimate),
        "holds": report.holds(),
        "params": serde_json::from_str::<Value>(&report.params_json()).map_err(|e| e.to_string())?,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn circle_profile(function: &str, r: f64, samples: usize) -> Result<String, JsError> {
    circle_profile_json(function, r, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn radial_curves(function: &str, r0: f64, r_max: f64, n: usize) -> Result<String, JsError> {
    radial_curves_json(function, r0, r_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn main_theorem_probe(function: &str, set: &str, r: f64, r0: f64, k: f64, p: f64) -> Result<String, JsError> {
    main_theorem_probe_json(function, set, r, r0, k, p).map_err(|e| JsError::new(&e))
}
