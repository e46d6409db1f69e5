//! WebAssembly bindings behind `www/index.html`.
//!
//! Each export simulates a series with the seeded generators, runs one
//! analysis and returns JSON for the page to draw. The `*_data` functions
//! are the plain-Rust versions the exports wrap.

use econokit::autoregression::{fit_ar, forecast_ar};
use econokit::series::acf;
use econokit::simulate::{gen_ar, gen_verona_like, ArDgp, SimSettings, VeronaDgp};
use econokit::stability::qlr_test;
use econokit::QuarterIndex;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FanChart {
    pub dates: Vec<String>,
    pub actual: Vec<f64>,
    pub forecast_dates: Vec<String>,
    pub forecast: Vec<f64>,
    pub lo95: Vec<f64>,
    pub hi95: Vec<f64>,
    pub ser: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QlrScan {
    pub dates: Vec<String>,
    pub f: Vec<f64>,
    pub qlr: f64,
    pub break_at: String,
    pub q: usize,
    /// 10%, 5%, 1% critical values when tabulated for `q`.
    pub critical: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcfPlot {
    pub lags: Vec<usize>,
    pub rho: Vec<f64>,
    /// Approximate 95% band for white noise, `1.96 / sqrt(T)`.
    pub band: f64,
}

fn verona(seed: u64, len: usize, break_size: f64) -> Result<econokit::Series, String> {
    let d = VeronaDgp {
        break_size,
        break_at: Some(QuarterIndex::new(2010, 1).map_err(|e| e.to_string())?),
        ..VeronaDgp::default()
    };
    gen_verona_like(&d, &SimSettings::new(len, seed)).map_err(|e| e.to_string())
}

/// Simulated provincial export series, AR(`lags`) fit and `horizon`-step forecast.
pub fn fan_chart_data(seed: u64, lags: usize, horizon: usize) -> Result<FanChart, String> {
    let y = verona(seed, 92, -0.2)?;
    let m = fit_ar(&y, lags, None).map_err(|e| e.to_string())?;
    let path = forecast_ar(&m, &y, horizon).map_err(|e| e.to_string())?;
    Ok(FanChart {
        dates: y.rows().map(|(d, _)| d.roman()).collect(),
        actual: y.values().to_vec(),
        forecast_dates: path.dates.iter().map(|d| d.roman()).collect(),
        forecast: path.point.clone(),
        lo95: path.ci95.iter().map(|c| c.0).collect(),
        hi95: path.ci95.iter().map(|c| c.1).collect(),
        ser: m.sigma,
    })
}

/// Chow F at every candidate date for an AR(`lags`) model of a series whose
/// log level drops by `break_size` in 2010:I.
pub fn qlr_scan_data(seed: u64, lags: usize, break_size: f64) -> Result<QlrScan, String> {
    let y = verona(seed, 92, break_size)?;
    let m = fit_ar(&y, lags, None).map_err(|e| e.to_string())?;
    let r = qlr_test(&m.design, 0.15).map_err(|e| e.to_string())?;
    Ok(QlrScan {
        dates: r.candidates.iter().map(|d| d.roman()).collect(),
        f: r.f_values,
        qlr: r.qlr_stat,
        break_at: r.break_at.roman(),
        q: r.q,
        critical: r.critical.map(|c| [c.ten, c.five, c.one]),
    })
}

/// Sample autocorrelations of a simulated AR(1) with coefficient `phi`.
pub fn acf_data(seed: u64, phi: f64, len: usize, max_lag: usize) -> Result<AcfPlot, String> {
    let y = gen_ar(&ArDgp { intercept: 0.0, phi: vec![phi], sigma: 1.0 }, &SimSettings::new(len, seed))
        .map_err(|e| e.to_string())?;
    let t = acf(&y, max_lag).map_err(|e| e.to_string())?;
    Ok(AcfPlot {
        lags: t.lags,
        rho: t.rho,
        band: 1.96 / (len as f64).sqrt(),
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn fan_chart(seed: u32, lags: u32, horizon: u32) -> Result<String, JsValue> {
    to_js(fan_chart_data(seed as u64, lags as usize, horizon as usize))
}

#[wasm_bindgen]
pub fn qlr_scan(seed: u32, lags: u32, break_size: f64) -> Result<String, JsValue> {
    to_js(qlr_scan_data(seed as u64, lags as usize, break_size))
}

#[wasm_bindgen]
pub fn acf_explorer(seed: u32, phi: f64, len: u32, max_lag: u32) -> Result<String, JsValue> {
    to_js(acf_data(seed as u64, phi, len as usize, max_lag as usize))
}
