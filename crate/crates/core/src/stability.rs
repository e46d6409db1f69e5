//! Augmented Dickey–Fuller unit-root test and Chow / QLR structural-break
//! tests.

use serde::{Deserialize, Serialize};

use crate::decision::{CriticalValues, Decisions, Level};
use crate::error::{Error, Result};
use crate::linreg::{build_lagged_design, f_test, fit_ols, lag_name, ExtraColumn, FStat, FitResult, RegressionData};
use crate::series::{diff, QuarterIndex, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deterministics {
    InterceptOnly,
    InterceptAndTrend,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdfSpec {
    pub deterministics: Deterministics,
    /// Number of lagged differences in the test regression.
    pub lags: usize,
}

/// Large-sample ADF critical values.
pub fn adf_critical_values(det: Deterministics) -> CriticalValues {
    match det {
        Deterministics::InterceptOnly => CriticalValues {
            ten: -2.57,
            five: -2.86,
            one: -3.43,
        },
        Deterministics::InterceptAndTrend => CriticalValues {
            ten: -3.12,
            five: -3.41,
            one: -3.96,
        },
    }
}

pub fn adf_critical(det: Deterministics, level: Level) -> f64 {
    adf_critical_values(det).at(level)
}

#[derive(Debug, Clone, Serialize)]
pub struct AdfResult {
    /// t-ratio on the lagged level.
    pub t_stat: f64,
    pub spec: AdfSpec,
    pub delta: f64,
    pub gammas: Vec<f64>,
    pub critical: CriticalValues,
    /// Rejection of the unit-root null at each level.
    pub decisions: Decisions,
    pub fit: FitResult,
}

/// Regress `Δy_t` on the deterministic terms, `y_{t-1}` and
/// `Δy_{t-1} .. Δy_{t-lags}`.
pub fn adf_test(s: &Series, spec: AdfSpec) -> Result<AdfResult> {
    let x = s.values();
    if x.iter().all(|&v| v == x[0]) {
        return Err(Error::ZeroVariance);
    }
    let usable = s.len().saturating_sub(1 + spec.lags);
    if usable < spec.lags + 5 || spec.lags * 3 >= usable {
        return Err(Error::TooShort {
            needed: (spec.lags + 5).max(3 * spec.lags + 1) + 1 + spec.lags,
            have: s.len(),
        });
    }
    let d = diff(s)?;
    let diff_lags: Vec<usize> = (1..=spec.lags).collect();
    let mut specs: Vec<(&Series, &[usize])> = vec![(s, &[1])];
    if spec.lags > 0 {
        specs.push((&d, &diff_lags));
    }
    let extras: &[ExtraColumn] = match spec.deterministics {
        Deterministics::InterceptOnly => &[],
        Deterministics::InterceptAndTrend => &[ExtraColumn::Trend],
    };
    let data = build_lagged_design(&d, &specs, true, extras)?;
    let fit = fit_ols(&data)?;
    let level_col = fit.index_of(&lag_name(s.name(), 1)).expect("level lag present");
    let gammas = diff_lags
        .iter()
        .map(|&j| fit.coef[fit.index_of(&lag_name(d.name(), j)).expect("diff lag present")])
        .collect();
    let critical = adf_critical_values(spec.deterministics);
    let t_stat = fit.t_stat[level_col];
    Ok(AdfResult {
        t_stat,
        spec,
        delta: fit.coef[level_col],
        gammas,
        critical,
        decisions: critical.reject_below(t_stat),
        fit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChowResult {
    pub break_date: QuarterIndex,
    pub f: FStat,
    pub q: usize,
}

fn with_interactions(base: &RegressionData, row: usize) -> Result<RegressionData> {
    let t = base.nobs();
    let dummy = |i: usize| if i >= row { 1.0 } else { 0.0 };
    let mut cols = Vec::with_capacity(2 * base.ncols());
    for (j, name) in base.names().iter().enumerate() {
        if base.has_intercept() && j == 0 {
            continue;
        }
        cols.push((name.clone(), base.column(j)));
    }
    for (j, name) in base.names().iter().enumerate() {
        let c = base.column(j);
        cols.push((format!("D*{name}"), (0..t).map(|i| c[i] * dummy(i)).collect()));
    }
    let data = RegressionData::new(base.response_name(), base.response().to_vec(), cols, base.has_intercept())?;
    Ok(match base.first_date() {
        Some(f) => data.with_first_date(f),
        None => data,
    })
}

fn break_row(base: &RegressionData, date: QuarterIndex) -> Result<usize> {
    let first = base
        .first_date()
        .ok_or_else(|| Error::InvalidArgument("regression rows carry no dates".into()))?;
    let r = date.since(first);
    let k = base.ncols();
    if r < (k + 1) as i64 || (base.nobs() as i64 - r) < (k + 1) as i64 {
        return Err(Error::BreakNearEdge { date, needed: k + 1 });
    }
    Ok(r as usize)
}

fn chow_at(base: &RegressionData, base_fit: &FitResult, row: usize) -> Result<FStat> {
    let unrestricted = fit_ols(&with_interactions(base, row)?)?;
    f_test(&unrestricted, base_fit)
}

/// Chow test of coefficient constancy, the alternative being a shift in
/// every coefficient from `break_date` (inclusive) on.
pub fn chow_f(base: &RegressionData, break_date: QuarterIndex) -> Result<ChowResult> {
    let row = break_row(base, break_date)?;
    let base_fit = fit_ols(base)?;
    Ok(ChowResult {
        break_date,
        f: chow_at(base, &base_fit, row)?,
        q: base.ncols(),
    })
}

/// SSR of the fully interacted regression at `break_date`.
pub fn chow_unrestricted_ssr(base: &RegressionData, break_date: QuarterIndex) -> Result<f64> {
    let row = break_row(base, break_date)?;
    Ok(fit_ols(&with_interactions(base, row)?)?.ssr)
}

/// Tabulated QLR critical values with 15% trimming.
pub fn qlr_critical_values(q: usize) -> Result<CriticalValues> {
    match q {
        5 => Ok(CriticalValues {
            ten: 3.26,
            five: 3.66,
            one: 4.53,
        }),
        7 => Ok(CriticalValues {
            ten: 2.84,
            five: 3.15,
            one: 3.82,
        }),
        _ => Err(Error::NotTabulated(format!("QLR with q = {q} restrictions"))),
    }
}

pub fn qlr_critical(q: usize, level: Level) -> Result<f64> {
    Ok(qlr_critical_values(q)?.at(level))
}

#[derive(Debug, Clone, Serialize)]
pub struct QlrResult {
    pub trimming: f64,
    pub candidates: Vec<QuarterIndex>,
    pub f_values: Vec<f64>,
    pub qlr_stat: f64,
    pub break_at: QuarterIndex,
    pub q: usize,
    /// `None` when no table row exists for `q`.
    pub critical: Option<CriticalValues>,
    pub decisions: Option<Decisions>,
}

/// Candidate break rows `round(trim * T) ..= round((1 - trim) * T)`.
pub fn qlr_candidate_rows(nobs: usize, trimming: f64) -> (usize, usize) {
    let t = nobs as f64;
    ((trimming * t).round() as usize, ((1.0 - trimming) * t).round() as usize)
}

/// Maximum Chow F over the trimmed central part of the sample. Ties go to
/// the earliest date.
pub fn qlr_test(base: &RegressionData, trimming: f64) -> Result<QlrResult> {
    if !(trimming > 0.0 && trimming < 0.5) {
        return Err(Error::InvalidArgument(format!("trimming {trimming} outside (0, 0.5)")));
    }
    let first = base
        .first_date()
        .ok_or_else(|| Error::InvalidArgument("regression rows carry no dates".into()))?;
    let (lo, hi) = qlr_candidate_rows(base.nobs(), trimming);
    if lo > hi {
        return Err(Error::InvalidArgument("no candidate break dates after trimming".into()));
    }
    let base_fit = fit_ols(base)?;
    let candidates: Vec<QuarterIndex> = (lo..=hi).map(|r| first.offset(r as i64)).collect();
    let f_values = candidates
        .iter()
        .map(|&d| {
            let row = break_row(base, d)?;
            chow_at(base, &base_fit, row).map(|f| f.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut best = 0;
    for i in 1..f_values.len() {
        if f_values[i] > f_values[best] {
            best = i;
        }
    }
    let q = base.ncols();
    let critical = qlr_critical_values(q).ok();
    let qlr_stat = f_values[best];
    Ok(QlrResult {
        trimming,
        break_at: candidates[best],
        candidates,
        qlr_stat,
        q,
        critical,
        decisions: critical.map(|c| c.reject_above(qlr_stat)),
        f_values,
    })
}
