//! Vector autoregressions estimated equation by equation.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::autoregression::{argmin, ArModel, ForecastPath};
use crate::companion::{iterate_point, ma_weights, spectral_radius};
use crate::decision::Decisions;
use crate::error::{Error, Result};
use crate::linreg::{build_lagged_design, f_test, fit_ols, lag_name, FStat, FitResult, RegressionData};
use crate::series::{overlap, QuarterIndex, Series};

#[derive(Debug, Clone)]
pub struct VarModel {
    pub variables: Vec<String>,
    pub p: usize,
    /// One fit per variable, all on the shared design
    /// `const, v1_t-1 .. v1_t-p, v2_t-1 ..`.
    pub equations: Vec<FitResult>,
    /// `E'E / (T - (k p + 1))`.
    pub resid_cov: DMatrix<f64>,
    pub sample: (QuarterIndex, QuarterIndex),
    pub nobs: usize,
    designs: Vec<RegressionData>,
}

impl VarModel {
    pub fn k(&self) -> usize {
        self.variables.len()
    }

    pub fn design(&self, equation: usize) -> &RegressionData {
        &self.designs[equation]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn intercepts(&self) -> Vec<f64> {
        self.equations.iter().map(|f| f.coef[0]).collect()
    }

    /// Lag coefficient matrices `A_1 .. A_p`; `A_l[(i, j)]` is the effect of
    /// variable `j` at lag `l` in equation `i`.
    pub fn coefficient_blocks(&self) -> Vec<DMatrix<f64>> {
        let k = self.k();
        (1..=self.p)
            .map(|l| {
                DMatrix::from_fn(k, k, |i, j| {
                    let f = &self.equations[i];
                    f.coef[f.index_of(&lag_name(&self.variables[j], l)).expect("lag column")]
                })
            })
            .collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(self.k(), &self.coefficient_blocks())
    }

    /// A one-variable system equivalent to an AR model.
    pub fn from_ar(m: &ArModel) -> Self {
        let df = (m.fit.nobs - m.fit.k) as f64;
        let ssr: f64 = m.fit.residuals.iter().map(|e| e * e).sum();
        Self {
            variables: vec![m.series_name.clone()],
            p: m.p,
            equations: vec![m.fit.clone()],
            resid_cov: DMatrix::from_element(1, 1, ssr / df),
            sample: m.sample,
            nobs: m.fit.nobs,
            designs: vec![m.design.clone()],
        }
    }
}

fn validate_names(series: &[Series]) -> Result<()> {
    for (i, s) in series.iter().enumerate() {
        if series[..i].iter().any(|o| o.name() == s.name()) {
            return Err(Error::InvalidArgument(format!("duplicate variable name `{}`", s.name())));
        }
    }
    Ok(())
}

/// Window every series to the common span, optionally intersected with `sample`.
fn align(series: &[Series], sample: Option<(QuarterIndex, QuarterIndex)>) -> Result<Vec<Series>> {
    let (a, b) = overlap(series).ok_or(Error::Misaligned)?;
    let (a, b) = match sample {
        Some((from, to)) => {
            if from < a || to > b || from > to {
                return Err(Error::OutOfRange { from, to, first: a, last: b });
            }
            (from, to)
        }
        None => (a, b),
    };
    series.iter().map(|s| s.window(a, b)).collect()
}

/// Designs for all equations, dropping `skip` extra leading rows.
fn system_designs(aligned: &[Series], p: usize, skip: usize) -> Result<Vec<RegressionData>> {
    let lags: Vec<usize> = (1..=p).collect();
    let specs: Vec<(&Series, &[usize])> = aligned.iter().map(|s| (s, lags.as_slice())).collect();
    aligned
        .iter()
        .map(|dep| {
            let d = build_lagged_design(dep, &specs, true, &[])?;
            Ok(d.slice_rows(skip..d.nobs()))
        })
        .collect()
}

fn residual_cross(fits: &[FitResult]) -> DMatrix<f64> {
    let k = fits.len();
    DMatrix::from_fn(k, k, |i, j| {
        fits[i]
            .residuals
            .iter()
            .zip(&fits[j].residuals)
            .map(|(a, b)| a * b)
            .sum()
    })
}

fn estimate(aligned: &[Series], p: usize, skip: usize) -> Result<VarModel> {
    let designs = system_designs(aligned, p, skip)?;
    let equations = designs.iter().map(fit_ols).collect::<Result<Vec<_>>>()?;
    let nobs = designs[0].nobs();
    let df = (nobs - equations[0].k) as f64;
    let resid_cov = residual_cross(&equations) / df;
    Ok(VarModel {
        variables: aligned.iter().map(|s| s.name().to_string()).collect(),
        p,
        sample: (
            designs[0].first_date().expect("dated"),
            designs[0].last_date().expect("dated"),
        ),
        nobs,
        equations,
        resid_cov,
        designs,
    })
}

fn check_sample(k: usize, p: usize, span: usize) -> Result<()> {
    let needed = p + k * p + 2;
    if span < needed {
        return Err(Error::TooShort { needed, have: span });
    }
    Ok(())
}

/// Fit a VAR(p) by OLS on the common calendar span (or `sample`).
pub fn fit_var(series: &[Series], p: usize, sample: Option<(QuarterIndex, QuarterIndex)>) -> Result<VarModel> {
    if series.len() < 2 {
        return Err(Error::InvalidArgument("a VAR needs at least two variables".into()));
    }
    if p == 0 {
        return Err(Error::InvalidArgument("lag order must be at least 1".into()));
    }
    validate_names(series)?;
    let aligned = align(series, sample)?;
    check_sample(series.len(), p, aligned[0].len())?;
    estimate(&aligned, p, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarLagSelection {
    pub candidates: Vec<usize>,
    pub aic: Vec<f64>,
    pub bic: Vec<f64>,
    pub loglik: Vec<f64>,
    pub chosen_aic: usize,
    pub chosen_bic: usize,
    pub nobs: usize,
}

impl VarLagSelection {
    /// `(p, aic, bic)` rows with six decimals; the minimizing entry of each
    /// column carries a trailing `*`.
    pub fn starred_rows(&self) -> Vec<(usize, String, String)> {
        self.candidates
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let star = |chosen: usize| if chosen == p { "*" } else { "" };
                (
                    p,
                    format!("{:.6}{}", self.aic[i], star(self.chosen_aic)),
                    format!("{:.6}{}", self.bic[i], star(self.chosen_bic)),
                )
            })
            .collect()
    }
}

/// Gaussian system criteria for p = 1 ..= p_max on a common sample.
pub fn select_var_lag(series: &[Series], p_max: usize) -> Result<VarLagSelection> {
    if series.len() < 2 {
        return Err(Error::InvalidArgument("a VAR needs at least two variables".into()));
    }
    if p_max == 0 {
        return Err(Error::InvalidArgument("p_max must be at least 1".into()));
    }
    validate_names(series)?;
    let aligned = align(series, None)?;
    let k = series.len();
    check_sample(k, p_max, aligned[0].len())?;
    let mut out = VarLagSelection {
        candidates: (1..=p_max).collect(),
        aic: vec![],
        bic: vec![],
        loglik: vec![],
        chosen_aic: 1,
        chosen_bic: 1,
        nobs: 0,
    };
    for p in 1..=p_max {
        let m = estimate(&aligned, p, p_max - p)?;
        let t = m.nobs as f64;
        let sigma_ml = residual_cross(&m.equations) / t;
        let chol = sigma_ml
            .cholesky()
            .ok_or_else(|| Error::Singular(format!("residual covariance at p = {p}")))?;
        let ln_det = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        let kf = k as f64;
        let loglik = -(t / 2.0) * (kf * (1.0 + (2.0 * PI).ln()) + ln_det);
        let params = (k * (k * p + 1)) as f64;
        out.loglik.push(loglik);
        out.aic.push(-2.0 * loglik + 2.0 * params);
        out.bic.push(-2.0 * loglik + params * t.ln());
        out.nobs = m.nobs;
    }
    out.chosen_aic = argmin(&out.aic) + 1;
    out.chosen_bic = argmin(&out.bic) + 1;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrangerResult {
    pub cause: String,
    pub effect: String,
    pub f: FStat,
    /// Rejection of "cause does not Granger-cause effect".
    pub decisions: Decisions,
}

/// F-test that all `p` lags of `cause` are zero in the `effect` equation.
pub fn granger_test(m: &VarModel, cause: &str, effect: &str) -> Result<GrangerResult> {
    let ci = m.index_of(cause)?;
    let ei = m.index_of(effect)?;
    if ci == ei {
        return Err(Error::InvalidArgument("cause and effect must differ".into()));
    }
    let dropped: Vec<String> = (1..=m.p).map(|l| lag_name(cause, l)).collect();
    let restricted = m.designs[ei].without_columns(|n| dropped.iter().any(|d| d == n));
    let f = f_test(&m.equations[ei], &fit_ols(&restricted)?)?;
    Ok(GrangerResult {
        cause: cause.to_string(),
        effect: effect.to_string(),
        decisions: Decisions::from_p_value(f.p_value),
        f,
    })
}

/// Every ordered pair `(cause, effect)` with `cause != effect`.
pub fn granger_all(m: &VarModel) -> Result<Vec<GrangerResult>> {
    let mut out = Vec::new();
    for effect in &m.variables {
        for cause in &m.variables {
            if cause != effect {
                out.push(granger_test(m, cause, effect)?);
            }
        }
    }
    Ok(out)
}

/// Iterated system forecasts with MSE `sum_{j<h} Psi_j Sigma Psi_j'`.
pub fn forecast_var(m: &VarModel, observed: &[Series], horizon: usize) -> Result<Vec<ForecastPath>> {
    if horizon < 1 {
        return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
    }
    let k = m.k();
    if observed.len() != k {
        return Err(Error::InvalidArgument(format!("expected {k} observed series, got {}", observed.len())));
    }
    let origin = observed[0].end();
    if observed.iter().any(|s| s.end() != origin) {
        return Err(Error::OriginMismatch("observed series end on different quarters".into()));
    }
    if let Some(s) = observed.iter().find(|s| s.len() < m.p) {
        return Err(Error::TooShort { needed: m.p, have: s.len() });
    }
    let history: Vec<Vec<f64>> = (0..m.p)
        .map(|back| {
            observed
                .iter()
                .map(|s| s.values()[s.len() - m.p + back])
                .collect()
        })
        .collect();
    let blocks = m.coefficient_blocks();
    let points = iterate_point(&m.intercepts(), &blocks, &history, horizon);
    let psi = ma_weights(k, &blocks, horizon);
    let mut mse = DMatrix::zeros(k, k);
    let mut se: Vec<Vec<f64>> = vec![Vec::with_capacity(horizon); k];
    for w in &psi {
        mse += w * &m.resid_cov * w.transpose();
        for i in 0..k {
            se[i].push(mse[(i, i)].sqrt());
        }
    }
    let nonstationary = spectral_radius(k, &blocks) >= 1.0;
    Ok(m.variables
        .iter()
        .enumerate()
        .map(|(i, name)| {
            ForecastPath::from_parts(
                name.clone(),
                origin,
                points.iter().map(|v| v[i]).collect(),
                se[i].clone(),
                nonstationary,
            )
        })
        .collect())
}
