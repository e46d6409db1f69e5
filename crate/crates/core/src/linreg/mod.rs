//! Ordinary least squares with classical (homoskedastic) inference.

pub mod dist;
mod qr;

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

pub use dist::{tail_prob, Dist, Sides};
pub use qr::RANK_TOL;

use crate::error::{Error, Result};
use crate::series::{overlap, QuarterIndex, Series};

/// Critical value for the 95% coefficient intervals.
pub const Z_95: f64 = 1.96;

/// Residual sum of squares below `EXACT_FIT_TOL * sum(y^2)` counts as an exact fit.
pub const EXACT_FIT_TOL: f64 = 1e-24;

/// Response vector plus named regressor columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionData {
    response_name: String,
    response: Vec<f64>,
    x: DMatrix<f64>,
    names: Vec<String>,
    has_intercept: bool,
    first: Option<QuarterIndex>,
}

impl RegressionData {
    /// `columns` excludes the intercept; with `has_intercept` a column named
    /// `const` is inserted at position 0.
    pub fn new(
        response_name: impl Into<String>,
        response: Vec<f64>,
        columns: Vec<(String, Vec<f64>)>,
        has_intercept: bool,
    ) -> Result<Self> {
        let t = response.len();
        let mut names = Vec::with_capacity(columns.len() + 1);
        let mut data: Vec<f64> = Vec::with_capacity(t * (columns.len() + 1));
        if has_intercept {
            names.push("const".to_string());
            data.extend(std::iter::repeat_n(1.0, t));
        }
        for (name, col) in columns {
            if col.len() != t {
                return Err(Error::InvalidArgument(format!(
                    "column `{name}` has {} rows, response has {t}",
                    col.len()
                )));
            }
            names.push(name);
            data.extend(col);
        }
        let mut seen = HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::DuplicateColumn(dup.clone()));
        }
        if response.iter().chain(&data).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite entry in regression data".into()));
        }
        let k = names.len();
        Ok(Self {
            response_name: response_name.into(),
            response,
            x: DMatrix::from_vec(t, k, data),
            names,
            has_intercept,
            first: None,
        })
    }

    /// Attach the calendar date of the first row; rows are consecutive quarters.
    pub fn with_first_date(mut self, first: QuarterIndex) -> Self {
        self.first = Some(first);
        self
    }

    pub fn response_name(&self) -> &str {
        &self.response_name
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn has_intercept(&self) -> bool {
        self.has_intercept
    }

    pub fn nobs(&self) -> usize {
        self.response.len()
    }

    pub fn ncols(&self) -> usize {
        self.names.len()
    }

    pub fn first_date(&self) -> Option<QuarterIndex> {
        self.first
    }

    pub fn last_date(&self) -> Option<QuarterIndex> {
        self.first.map(|f| f.offset(self.nobs() as i64 - 1))
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.x.column(j).iter().copied().collect()
    }

    /// Keep only the listed columns, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let cols: Vec<_> = keep.iter().map(|&j| self.x.column(j).into_owned()).collect();
        let x = if cols.is_empty() {
            DMatrix::zeros(self.nobs(), 0)
        } else {
            DMatrix::from_columns(&cols)
        };
        Self {
            response_name: self.response_name.clone(),
            response: self.response.clone(),
            x,
            names: keep.iter().map(|&j| self.names[j].clone()).collect(),
            has_intercept: self.has_intercept && keep.contains(&0) && self.names[0] == "const",
            first: self.first,
        }
    }

    /// Drop every column whose name satisfies `pred`.
    pub fn without_columns(&self, pred: impl Fn(&str) -> bool) -> Self {
        let keep: Vec<usize> = (0..self.ncols()).filter(|&j| !pred(&self.names[j])).collect();
        self.select_columns(&keep)
    }

    /// Append a column on the right.
    pub fn with_column(&self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if self.column_index(&name).is_some() {
            return Err(Error::DuplicateColumn(name));
        }
        if values.len() != self.nobs() {
            return Err(Error::InvalidArgument(format!("column `{name}` length mismatch")));
        }
        let mut cols: Vec<DVector<f64>> = self.x.column_iter().map(|c| c.into_owned()).collect();
        cols.push(DVector::from_vec(values));
        let mut names = self.names.clone();
        names.push(name);
        Ok(Self {
            x: DMatrix::from_columns(&cols),
            names,
            ..self.clone()
        })
    }

    /// Rows `range` as a standalone data set (dates shifted accordingly).
    pub fn slice_rows(&self, range: std::ops::Range<usize>) -> Self {
        let len = range.end - range.start;
        Self {
            response_name: self.response_name.clone(),
            response: self.response[range.clone()].to_vec(),
            x: self.x.rows(range.start, len).into_owned(),
            names: self.names.clone(),
            has_intercept: self.has_intercept,
            first: self.first.map(|f| f.offset(range.start as i64)),
        }
    }

    /// Apply `f` to the response, keeping regressors.
    pub fn map_response(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            response: self.response.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }
}

/// Additional deterministic columns for [`build_lagged_design`].
#[derive(Debug, Clone, PartialEq)]
pub enum ExtraColumn {
    /// Linear trend: observation number counted from the dependent series' start (1-based).
    Trend,
    /// Step dummy equal to 1 from `from` onwards.
    Step { from: QuarterIndex },
}

/// Regressor name for lag `j` of series `name`.
pub fn lag_name(name: &str, j: usize) -> String {
    if j == 0 {
        format!("{name}_t")
    } else {
        format!("{name}_t-{j}")
    }
}

/// Build a regression of `dep_t` on lags of the given sources.
///
/// All series are aligned by calendar; the first `max lag` quarters of the
/// common span are dropped so that every row is complete.
pub fn build_lagged_design(
    dep: &Series,
    lag_specs: &[(&Series, &[usize])],
    include_intercept: bool,
    extras: &[ExtraColumn],
) -> Result<RegressionData> {
    overlap(std::iter::once(dep).chain(lag_specs.iter().map(|(s, _)| *s))).ok_or(Error::Misaligned)?;
    // a row at date d needs src[d - j] for every requested lag j
    let mut first = dep.start();
    let mut last = dep.end();
    for (src, lags) in lag_specs {
        if let (Some(&lo), Some(&hi)) = (lags.iter().min(), lags.iter().max()) {
            first = first.max(src.start().offset(hi as i64));
            last = last.min(src.end().offset(lo as i64));
        }
    }
    if first > last {
        let max_lag = lag_specs.iter().flat_map(|(_, l)| l.iter().copied()).max().unwrap_or(0);
        return Err(Error::TooShort {
            needed: max_lag + 1,
            have: dep.len(),
        });
    }
    let n = (last.since(first) + 1) as usize;
    let dates: Vec<QuarterIndex> = (0..n).map(|i| first.offset(i as i64)).collect();

    let mut columns = Vec::new();
    for (src, lags) in lag_specs {
        for &j in *lags {
            if j == 0 && src.name() == dep.name() {
                return Err(Error::DuplicateColumn(lag_name(src.name(), 0)));
            }
            let values = dates
                .iter()
                .map(|d| src.at(d.offset(-(j as i64))).expect("inside common span"))
                .collect();
            columns.push((lag_name(src.name(), j), values));
        }
    }
    for extra in extras {
        match extra {
            ExtraColumn::Trend => columns.push((
                "trend".to_string(),
                dates.iter().map(|d| (d.since(dep.start()) + 1) as f64).collect(),
            )),
            ExtraColumn::Step { from } => columns.push((
                format!("D_{from}"),
                dates.iter().map(|d| if d >= from { 1.0 } else { 0.0 }).collect(),
            )),
        }
    }
    let response = dates.iter().map(|d| dep.at(*d).expect("inside common span")).collect();
    Ok(RegressionData::new(dep.name(), response, columns, include_intercept)?.with_first_date(first))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub response_name: String,
    pub names: Vec<String>,
    pub has_intercept: bool,
    pub coef: Vec<f64>,
    pub se: Vec<f64>,
    pub t_stat: Vec<f64>,
    pub p_value: Vec<f64>,
    pub ci95: Vec<(f64, f64)>,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    pub ssr: f64,
    pub ser: f64,
    pub r2: f64,
    pub adj_r2: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic: f64,
    #[serde(rename = "T")]
    pub nobs: usize,
    pub k: usize,
    /// Residual variance is numerically zero; information criteria and
    /// t-ratios are then degenerate.
    pub exact_fit: bool,
    pub first_date: Option<QuarterIndex>,
    #[serde(skip)]
    response: Vec<f64>,
}

impl FitResult {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn df_resid(&self) -> usize {
        self.nobs - self.k
    }
}

pub fn fit_ols(data: &RegressionData) -> Result<FitResult> {
    let t = data.nobs();
    let k = data.ncols();
    if t <= k {
        return Err(Error::Underdetermined { rows: t, cols: k });
    }
    let y = DVector::from_column_slice(&data.response);
    let sol = qr::lstsq(&data.x, &y).map_err(|j| Error::RankDeficient(data.names[j].clone()))?;

    let fitted_v = &data.x * &sol.coef;
    let fitted: Vec<f64> = fitted_v.iter().copied().collect();
    let residuals: Vec<f64> = data.response.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let df = (t - k) as f64;
    let s2 = ssr / df;
    let tf = t as f64;

    let yy: f64 = data.response.iter().map(|v| v * v).sum();
    let exact_fit = ssr <= EXACT_FIT_TOL * yy;

    let coef: Vec<f64> = sol.coef.iter().copied().collect();
    let se: Vec<f64> = (0..k).map(|i| (s2 * sol.xtx_inv[(i, i)]).sqrt()).collect();
    let t_stat: Vec<f64> = coef.iter().zip(&se).map(|(b, s)| b / s).collect();
    let p_value: Vec<f64> = t_stat
        .iter()
        .map(|&ts| {
            if ts.is_finite() {
                tail_prob(Dist::StudentT(df), ts, Sides::Two).expect("df >= 1")
            } else if ts.is_nan() {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let ci95 = coef.iter().zip(&se).map(|(b, s)| (b - Z_95 * s, b + Z_95 * s)).collect();

    let (tss, adj_den) = if data.has_intercept {
        let mean = data.response.iter().sum::<f64>() / tf;
        (data.response.iter().map(|v| (v - mean).powi(2)).sum::<f64>(), tf - 1.0)
    } else {
        (yy, tf)
    };
    let r2 = if tss > 0.0 { 1.0 - ssr / tss } else { 0.0 };
    let adj_r2 = 1.0 - (1.0 - r2) * adj_den / df;

    let loglik = -(tf / 2.0) * (1.0 + (2.0 * PI).ln() + (ssr / tf).ln());
    let kf = k as f64;
    let aic = -2.0 * loglik + 2.0 * kf;
    let bic = -2.0 * loglik + kf * tf.ln();

    Ok(FitResult {
        response_name: data.response_name.clone(),
        names: data.names.clone(),
        has_intercept: data.has_intercept,
        coef,
        se,
        t_stat,
        p_value,
        ci95,
        residuals,
        fitted,
        ssr,
        ser: s2.sqrt(),
        r2,
        adj_r2,
        loglik,
        aic,
        bic,
        nobs: t,
        k,
        exact_fit,
        first_date: data.first,
        response: data.response.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FStat {
    pub value: f64,
    pub df_num: usize,
    pub df_den: usize,
    pub p_value: f64,
}

/// F-test of the restrictions that turn `unrestricted` into `restricted`.
pub fn f_test(unrestricted: &FitResult, restricted: &FitResult) -> Result<FStat> {
    if unrestricted.nobs != restricted.nobs || unrestricted.response != restricted.response {
        return Err(Error::NotNested("response samples differ".into()));
    }
    if restricted.k >= unrestricted.k {
        return Err(Error::NotNested(format!(
            "restricted model has {} coefficients, unrestricted {}",
            restricted.k, unrestricted.k
        )));
    }
    if let Some(extra) = restricted.names.iter().find(|n| unrestricted.index_of(n).is_none()) {
        return Err(Error::NotNested(format!("`{extra}` absent from the unrestricted model")));
    }
    if unrestricted.exact_fit {
        return Err(Error::ExactFit {
            context: Some("in the unrestricted model".into()),
        });
    }
    let q = unrestricted.k - restricted.k;
    let df_den = unrestricted.df_resid();
    let gap = (restricted.ssr - unrestricted.ssr).max(0.0);
    let value = (gap / q as f64) / (unrestricted.ssr / df_den as f64);
    let p_value = tail_prob(Dist::FisherF(q as f64, df_den as f64), value, Sides::One)?;
    Ok(FStat {
        value,
        df_num: q,
        df_den,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuarterIndex {
        s.parse().unwrap()
    }

    #[test]
    fn exact_line_fit() {
        let t: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let y: Vec<f64> = t.iter().map(|v| 3.0 + 2.0 * v).collect();
        let d = RegressionData::new("y", y, vec![("t".into(), t)], true).unwrap();
        let f = fit_ols(&d).unwrap();
        assert!((f.coef[0] - 3.0).abs() < 1e-12 && (f.coef[1] - 2.0).abs() < 1e-12);
        assert!(f.ssr < 1e-20);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert!(f.exact_fit);
    }

    #[test]
    fn const_only_is_mean() {
        let y = vec![1.0, 4.0, 2.0, 7.0, 6.0];
        let d = RegressionData::new("y", y, vec![], true).unwrap();
        let f = fit_ols(&d).unwrap();
        assert!((f.coef[0] - 4.0).abs() < 1e-12);
        assert!(f.r2.abs() < 1e-12);
    }

    #[test]
    fn rank_deficiency_and_underdetermined() {
        let a: Vec<f64> = (0..8).map(|i| (i * i) as f64).collect();
        let b: Vec<f64> = a.iter().map(|v| 2.0 * v).collect();
        let y: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let d = RegressionData::new("y", y.clone(), vec![("a".into(), a), ("b".into(), b)], true).unwrap();
        assert!(matches!(fit_ols(&d), Err(Error::RankDeficient(_))));

        let d = RegressionData::new("y", y[..2].to_vec(), vec![("a".into(), vec![1.0, 2.0])], true).unwrap();
        assert_eq!(fit_ols(&d).unwrap_err(), Error::Underdetermined { rows: 2, cols: 2 });
    }

    #[test]
    fn duplicate_columns_rejected() {
        let err = RegressionData::new("y", vec![1.0; 3], vec![("a".into(), vec![1.0; 3]), ("a".into(), vec![2.0; 3])], false)
            .unwrap_err();
        assert_eq!(err, Error::DuplicateColumn("a".into()));
    }

    #[test]
    fn lagged_design_single_lag() {
        let s = Series::new("x", q("2000Q1"), (0..10).map(|i| i as f64 * 1.5).collect()).unwrap();
        let d = build_lagged_design(&s, &[(&s, &[1])], true, &[]).unwrap();
        assert_eq!(d.nobs(), 9);
        assert_eq!(d.names(), &["const", "x_t-1"]);
        assert_eq!(d.first_date(), Some(q("2000Q2")));
        assert_eq!(d.response()[0], 1.5);
        assert_eq!(d.column(1)[0], 0.0);
    }

    #[test]
    fn lagged_design_three_variable_system() {
        let mk = |n: &str, k: f64| Series::new(n, q("1991Q2"), (0..40).map(|i| (i as f64 * k).sin()).collect()).unwrap();
        let (e, i, a) = (mk("dEXP", 0.3), mk("dIMP", 0.7), mk("dACTE", 1.1));
        let d = build_lagged_design(&e, &[(&e, &[1, 2]), (&i, &[1, 2]), (&a, &[1, 2])], true, &[]).unwrap();
        assert_eq!(d.ncols(), 7);
        assert_eq!(
            d.names(),
            &["const", "dEXP_t-1", "dEXP_t-2", "dIMP_t-1", "dIMP_t-2", "dACTE_t-1", "dACTE_t-2"]
        );
        let dup = build_lagged_design(&e, &[(&e, &[1]), (&e, &[1])], true, &[]);
        assert!(matches!(dup, Err(Error::DuplicateColumn(_))));
    }

    #[test]
    fn lagged_design_matches_index_arithmetic() {
        let vals: Vec<f64> = (0..25).map(|i| ((i * 7919) % 101) as f64 / 10.0).collect();
        let s = Series::new("r", q("1995Q3"), vals.clone()).unwrap();
        let d = build_lagged_design(&s, &[(&s, &[1, 3])], false, &[ExtraColumn::Trend]).unwrap();
        assert_eq!(d.nobs(), 22);
        for row in 0..22 {
            let t = row + 3;
            assert_eq!(d.response()[row], vals[t]);
            assert_eq!(d.design()[(row, 0)], vals[t - 1]);
            assert_eq!(d.design()[(row, 1)], vals[t - 3]);
            assert_eq!(d.design()[(row, 2)], (t + 1) as f64);
        }
    }

    #[test]
    fn lagged_design_empty_sample() {
        let s = Series::new("x", q("2000Q1"), vec![1.0, 2.0]).unwrap();
        assert!(build_lagged_design(&s, &[(&s, &[2])], true, &[]).is_err());
    }

    #[test]
    fn f_test_irrelevant_orthogonal_regressor() {
        // residual of y on const is (-.5,-.5,.5,.5,...), orthogonal to x
        let y = vec![1.0, 1.0, 2.0, 2.0, 1.0, 1.0, 2.0, 2.0];
        let x = vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0];
        let u = fit_ols(&RegressionData::new("y", y.clone(), vec![("x".into(), x)], true).unwrap()).unwrap();
        let r = fit_ols(&RegressionData::new("y", y, vec![], true).unwrap()).unwrap();
        let f = f_test(&u, &r).unwrap();
        assert!(f.value.abs() < 1e-12);
        assert!((f.p_value - 1.0).abs() < 1e-9);
        assert_eq!((f.df_num, f.df_den), (1, 6));
    }

    #[test]
    fn f_test_exact_fit_guard() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 1.0 + 0.5 * v).collect();
        let u = fit_ols(&RegressionData::new("y", y.clone(), vec![("x".into(), x)], true).unwrap()).unwrap();
        let r = fit_ols(&RegressionData::new("y", y, vec![], true).unwrap()).unwrap();
        assert!(matches!(f_test(&u, &r), Err(Error::ExactFit { .. })));
    }

    #[test]
    fn f_test_rejects_mismatched_samples() {
        let u = fit_ols(&RegressionData::new("y", vec![1.0, 3.0, 2.0, 5.0], vec![("x".into(), vec![0.0, 1.0, 2.0, 3.0])], true).unwrap()).unwrap();
        let r = fit_ols(&RegressionData::new("y", vec![1.0, 3.0, 2.0, 6.0], vec![], true).unwrap()).unwrap();
        assert!(matches!(f_test(&u, &r), Err(Error::NotNested(_))));
        assert!(matches!(f_test(&r, &u), Err(Error::NotNested(_))));
    }
}
