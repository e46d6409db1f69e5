//! Univariate AR(p): OLS fitting, information-criterion lag choice, and
//! iterated forecasts with MA-weight error bands.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::companion::{iterate_point, ma_weights, spectral_radius};
use crate::error::{Error, Result};
use crate::linreg::{build_lagged_design, fit_ols, FitResult, RegressionData, Z_95};
use crate::series::{QuarterIndex, Series};

#[derive(Debug, Clone, Serialize)]
pub struct ArModel {
    pub p: usize,
    pub fit: FitResult,
    pub series_name: String,
    /// First and last quarter of the estimation sample (after dropping `p` lags).
    pub sample: (QuarterIndex, QuarterIndex),
    /// Innovation standard deviation, the regression SER.
    pub sigma: f64,
    #[serde(skip)]
    pub design: RegressionData,
}

impl ArModel {
    pub fn intercept(&self) -> f64 {
        self.fit.coef[0]
    }

    /// `phi_1 .. phi_p`.
    pub fn phi(&self) -> &[f64] {
        &self.fit.coef[1..]
    }

    fn blocks(&self) -> Vec<DMatrix<f64>> {
        self.phi().iter().map(|&v| DMatrix::from_element(1, 1, v)).collect()
    }

    /// Largest companion eigenvalue modulus.
    pub fn spectral_radius(&self) -> f64 {
        spectral_radius(1, &self.blocks())
    }

    pub fn is_stationary(&self) -> bool {
        self.spectral_radius() < 1.0
    }

    /// MA weights `psi_0 .. psi_{n-1}`.
    pub fn psi(&self, n: usize) -> Vec<f64> {
        ma_weights(1, &self.blocks(), n).iter().map(|m| m[(0, 0)]).collect()
    }
}

fn lags(p: usize) -> Vec<usize> {
    (1..=p).collect()
}

fn ar_design(s: &Series, p: usize) -> Result<RegressionData> {
    let l = lags(p);
    build_lagged_design(s, &[(s, &l)], true, &[])
}

/// OLS fit of `y_t` on a constant and `y_{t-1} .. y_{t-p}`.
///
/// `sample` restricts the data before lagging, so the estimation sample
/// starts `p` quarters after `sample.0`.
pub fn fit_ar(s: &Series, p: usize, sample: Option<(QuarterIndex, QuarterIndex)>) -> Result<ArModel> {
    if p == 0 {
        return Err(Error::InvalidArgument("lag order must be at least 1".into()));
    }
    let w = match sample {
        Some((a, b)) => s.window(a, b)?,
        None => s.clone(),
    };
    if w.len() < 2 * p + 3 {
        return Err(Error::TooShort {
            needed: 2 * p + 3,
            have: w.len(),
        });
    }
    let design = ar_design(&w, p)?;
    let fit = fit_ols(&design)?;
    let first = design.first_date().expect("lagged design is dated");
    let last = design.last_date().expect("lagged design is dated");
    Ok(ArModel {
        p,
        sigma: fit.ser,
        fit,
        series_name: s.name().to_string(),
        sample: (first, last),
        design,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LagSelection {
    pub candidates: Vec<usize>,
    pub aic: Vec<f64>,
    pub bic: Vec<f64>,
    pub adj_r2: Vec<f64>,
    pub ser: Vec<f64>,
    pub chosen_aic: usize,
    pub chosen_bic: usize,
    /// Common number of observations behind every candidate.
    pub nobs: usize,
}

/// Index of the minimum, earliest on ties.
pub(crate) fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] < v[best] {
            best = i;
        }
    }
    best
}

/// Compare AR(p_min) .. AR(p_max) on the common sample that drops the first
/// `p_max` observations.
pub fn select_ar_lag(s: &Series, p_max: usize, p_min: usize) -> Result<LagSelection> {
    if p_min == 0 || p_min > p_max {
        return Err(Error::InvalidArgument(format!("invalid lag range {p_min}..={p_max}")));
    }
    if s.len() < 2 * p_max + 3 {
        return Err(Error::TooShort {
            needed: 2 * p_max + 3,
            have: s.len(),
        });
    }
    let candidates: Vec<usize> = (p_min..=p_max).collect();
    let mut sel = LagSelection {
        candidates: candidates.clone(),
        aic: vec![],
        bic: vec![],
        adj_r2: vec![],
        ser: vec![],
        chosen_aic: p_min,
        chosen_bic: p_min,
        nobs: 0,
    };
    for &p in &candidates {
        let full = ar_design(s, p)?;
        let data = full.slice_rows((p_max - p)..full.nobs());
        let fit = fit_ols(&data)?;
        if fit.exact_fit {
            return Err(Error::ExactFit {
                context: Some(format!("at p = {p}")),
            });
        }
        sel.nobs = fit.nobs;
        sel.aic.push(fit.aic);
        sel.bic.push(fit.bic);
        sel.adj_r2.push(fit.adj_r2);
        sel.ser.push(fit.ser);
    }
    sel.chosen_aic = candidates[argmin(&sel.aic)];
    sel.chosen_bic = candidates[argmin(&sel.bic)];
    Ok(sel)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastPath {
    pub variable: String,
    /// Last observed quarter.
    pub origin: QuarterIndex,
    /// Target quarters `origin + 1 .. origin + H`.
    pub dates: Vec<QuarterIndex>,
    pub point: Vec<f64>,
    pub se: Vec<f64>,
    pub ci95: Vec<(f64, f64)>,
    /// Set when the fitted model has a unit or explosive root.
    pub nonstationary: bool,
}

impl ForecastPath {
    pub fn empty(variable: impl Into<String>, origin: QuarterIndex) -> Self {
        Self {
            variable: variable.into(),
            origin,
            dates: vec![],
            point: vec![],
            se: vec![],
            ci95: vec![],
            nonstationary: false,
        }
    }

    pub fn horizon(&self) -> usize {
        self.point.len()
    }

    pub(crate) fn from_parts(
        variable: String,
        origin: QuarterIndex,
        point: Vec<f64>,
        se: Vec<f64>,
        nonstationary: bool,
    ) -> Self {
        let dates = (1..=point.len()).map(|h| origin.offset(h as i64)).collect();
        let ci95 = point
            .iter()
            .zip(&se)
            .map(|(p, s)| (p - Z_95 * s, p + Z_95 * s))
            .collect();
        Self {
            variable,
            origin,
            dates,
            point,
            se,
            ci95,
            nonstationary,
        }
    }
}

/// Iterated forecasts from the end of `observed` for horizons `1..=horizon`.
///
/// Standard errors are `sigma * sqrt(sum_{j<h} psi_j^2)` and exclude
/// coefficient estimation uncertainty.
pub fn forecast_ar(m: &ArModel, observed: &Series, horizon: usize) -> Result<ForecastPath> {
    if horizon < 1 {
        return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
    }
    if observed.len() < m.p {
        return Err(Error::TooShort {
            needed: m.p,
            have: observed.len(),
        });
    }
    let history: Vec<Vec<f64>> = observed.values()[observed.len() - m.p..]
        .iter()
        .map(|&v| vec![v])
        .collect();
    let point: Vec<f64> = iterate_point(&[m.intercept()], &m.blocks(), &history, horizon)
        .into_iter()
        .map(|v| v[0])
        .collect();
    let psi = m.psi(horizon);
    let mut acc = 0.0;
    let se = psi
        .iter()
        .map(|w| {
            acc += w * w;
            m.sigma * acc.sqrt()
        })
        .collect();
    Ok(ForecastPath::from_parts(
        m.series_name.clone(),
        observed.end(),
        point,
        se,
        !m.is_stationary(),
    ))
}
