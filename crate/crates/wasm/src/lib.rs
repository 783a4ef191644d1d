//! WebAssembly bindings for the demo page in `www/`.
//!
//! Each binding returns a JSON string; the plain functions underneath are
//! ordinary Rust and are tested natively.

use bpairs_core::asymptotics::{comparison_sweep, AsymptoticComparison, Target};
use bpairs_core::contour_oracle::{exponent_a, ContourSpec};
use bpairs_core::distribution::{summarize, MomentInputs};
use bpairs_core::numeric::{rational_to_f64, std_normal_cdf};
use bpairs_core::{Error, Kind, Result, RowSweep};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest n the page may request; keeps each call well under a second.
pub const MAX_N: usize = 2000;

#[derive(Debug, Serialize)]
pub struct PmfCurve {
    pub n: usize,
    pub kind: Kind,
    pub mean: f64,
    pub variance: f64,
    pub ks_distance: f64,
    pub pmf: Vec<f64>,
    /// Normal mass of `[k - 1/2, k + 1/2]` with the same mean and variance.
    pub normal: Vec<f64>,
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_N {
        return Err(Error::InvalidArgument(format!("n must be in {min}..={MAX_N}, got {n}")));
    }
    Ok(())
}

fn parse_kind(kind: &str) -> Result<Kind> {
    match kind.parse()? {
        Kind::Stirling => Err(Error::InvalidArgument("kind must be M or N".into())),
        k => Ok(k),
    }
}

pub fn pmf_versus_normal(kind: Kind, n: usize) -> Result<PmfCurve> {
    check_n(n, 1)?;
    let sweep = RowSweep::run(kind, n + 2, &[n]);
    let summary = summarize(&MomentInputs::from_sweep(&sweep, n)?)?;
    let mean = rational_to_f64(&summary.mean);
    let variance = rational_to_f64(&summary.variance);
    let sd = variance.sqrt();
    let cdf = |x: f64| std_normal_cdf((x - mean) / sd);
    let normal = (0..=n).map(|k| cdf(k as f64 + 0.5) - cdf(k as f64 - 0.5)).collect();
    Ok(PmfCurve {
        n,
        kind,
        mean,
        variance,
        ks_distance: summary.kolmogorov_distance,
        pmf: summary.pmf_f64(),
        normal,
    })
}

/// Exact against asymptotic log-counts at `step, 2 step, ...` up to `n_max`.
pub fn log_count_errors(kind: Kind, n_max: usize, step: usize) -> Result<Vec<AsymptoticComparison>> {
    check_n(n_max, 3)?;
    if step == 0 {
        return Err(Error::InvalidArgument("step must be positive".into()));
    }
    let target = if kind == Kind::M { Target::M } else { Target::N };
    let ns: Vec<usize> = (1..).map(|i| i * step).skip_while(|&n| n < 3).take_while(|&n| n <= n_max).collect();
    let sweep = RowSweep::run(kind, n_max, &[]);
    comparison_sweep(target, &sweep, &ns)
}

#[derive(Debug, Serialize)]
pub struct SaddleProfile {
    pub n: usize,
    pub radius: f64,
    pub theta0: f64,
    pub theta: Vec<f64>,
    /// `Re A(theta) - A(0)` on the saddle circle.
    pub exponent: Vec<f64>,
    /// Its quadratic approximation `-(2r+1) n theta^2 / 2`.
    pub quadratic: Vec<f64>,
}

/// The integrand's log-magnitude along the saddle circle, `theta` in `[0, pi]`.
pub fn saddle_profile(n: usize, samples: usize) -> Result<SaddleProfile> {
    check_n(n, 3)?;
    if !(2..=10_000).contains(&samples) {
        return Err(Error::InvalidArgument(format!("samples must be in 2..=10000, got {samples}")));
    }
    let spec = ContourSpec::at_saddle(n)?;
    let r = spec.radius;
    let top = exponent_a(r, 0.0, n).real_part;
    let theta: Vec<f64> = (0..samples).map(|i| std::f64::consts::PI * i as f64 / (samples - 1) as f64).collect();
    let exponent = theta.iter().map(|&t| exponent_a(r, t, n).real_part - top).collect();
    let curvature = (2.0 * r + 1.0) * n as f64;
    let quadratic = theta.iter().map(|&t| -0.5 * curvature * t * t).collect();
    Ok(SaddleProfile { n, radius: r, theta0: spec.theta0, theta, exponent, quadratic })
}

fn to_js<T: Serialize>(value: Result<T>) -> std::result::Result<String, JsValue> {
    let value = value.map_err(|e| JsValue::from_str(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen(js_name = pmfCurve)]
pub fn pmf_curve(kind: &str, n: usize) -> std::result::Result<String, JsValue> {
    to_js(parse_kind(kind).and_then(|k| pmf_versus_normal(k, n)))
}

#[wasm_bindgen(js_name = logCountErrors)]
pub fn log_count_errors_js(kind: &str, n_max: usize, step: usize) -> std::result::Result<String, JsValue> {
    to_js(parse_kind(kind).and_then(|k| log_count_errors(k, n_max, step)))
}

#[wasm_bindgen(js_name = saddleProfile)]
pub fn saddle_profile_js(n: usize, samples: usize) -> std::result::Result<String, JsValue> {
    to_js(saddle_profile(n, samples))
}
