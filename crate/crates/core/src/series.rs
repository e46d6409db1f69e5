//! Quarterly series container, transforms, and descriptive statistics.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A calendar quarter. Ordering is `(year, quarter)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct QuarterIndex {
    year: i32,
    quarter: u8,
}

impl QuarterIndex {
    pub fn new(year: i32, quarter: u8) -> Result<Self> {
        if !(1..=4).contains(&quarter) {
            return Err(Error::BadQuarter(format!("{year}Q{quarter}")));
        }
        Ok(Self { year, quarter })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn quarter(self) -> u8 {
        self.quarter
    }

    fn ordinal(self) -> i64 {
        self.year as i64 * 4 + (self.quarter as i64 - 1)
    }

    fn from_ordinal(n: i64) -> Self {
        Self {
            year: n.div_euclid(4) as i32,
            quarter: (n.rem_euclid(4) + 1) as u8,
        }
    }

    pub fn succ(self) -> Self {
        self.offset(1)
    }

    /// Advance by `n` quarters (negative moves back).
    pub fn offset(self, n: i64) -> Self {
        Self::from_ordinal(self.ordinal() + n)
    }

    /// Number of quarters from `other` to `self`.
    pub fn since(self, other: Self) -> i64 {
        self.ordinal() - other.ordinal()
    }

    /// Report-style label, e.g. `2014:I`.
    pub fn roman(self) -> String {
        let r = ["I", "II", "III", "IV"][self.quarter as usize - 1];
        format!("{}:{}", self.year, r)
    }
}

impl fmt::Display for QuarterIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Q{}", self.year, self.quarter)
    }
}

impl FromStr for QuarterIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadQuarter(s.to_string());
        let t = s.trim();
        let (y, q) = t
            .split_once(['Q', 'q'])
            .or_else(|| t.split_once(':'))
            .ok_or_else(bad)?;
        let year: i32 = y.parse().map_err(|_| bad())?;
        let quarter = match q {
            "1" | "I" => 1,
            "2" | "II" => 2,
            "3" | "III" => 3,
            "4" | "IV" => 4,
            _ => return Err(bad()),
        };
        Self::new(year, quarter).map_err(|_| bad())
    }
}

impl TryFrom<String> for QuarterIndex {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<QuarterIndex> for String {
    fn from(q: QuarterIndex) -> String {
        q.to_string()
    }
}

/// A named quarterly series with no gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    name: String,
    start: QuarterIndex,
    values: Vec<f64>,
}

impl Series {
    pub fn new(name: impl Into<String>, start: QuarterIndex, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(start.offset(i as i64)));
        }
        Ok(Self {
            name: name.into(),
            start,
            values,
        })
    }

    /// Build from dated rows, which must be strictly consecutive quarters.
    pub fn from_rows(
        name: impl Into<String>,
        rows: impl IntoIterator<Item = (QuarterIndex, f64)>,
    ) -> Result<Self> {
        let mut iter = rows.into_iter();
        let (start, first) = iter.next().ok_or(Error::EmptySeries)?;
        let mut values = vec![first];
        let mut expected = start.succ();
        for (date, v) in iter {
            if date < expected {
                return Err(Error::Duplicate(date));
            }
            if date > expected {
                return Err(Error::Gap(expected));
            }
            values.push(v);
            expected = expected.succ();
        }
        Self::new(name, start, values)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn start(&self) -> QuarterIndex {
        self.start
    }

    pub fn end(&self) -> QuarterIndex {
        self.start.offset(self.values.len() as i64 - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn date(&self, i: usize) -> QuarterIndex {
        self.start.offset(i as i64)
    }

    /// Value at a calendar date, if covered.
    pub fn at(&self, date: QuarterIndex) -> Option<f64> {
        let i = date.since(self.start);
        (i >= 0).then(|| self.values.get(i as usize).copied()).flatten()
    }

    pub fn rows(&self) -> impl Iterator<Item = (QuarterIndex, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.date(i), v))
    }

    /// Restrict to `from..=to` (both inclusive).
    pub fn window(&self, from: QuarterIndex, to: QuarterIndex) -> Result<Series> {
        let out_of_range = || Error::OutOfRange {
            from,
            to,
            first: self.start,
            last: self.end(),
        };
        if from > to || from < self.start || to > self.end() {
            return Err(out_of_range());
        }
        let a = from.since(self.start) as usize;
        let b = to.since(self.start) as usize;
        Ok(Series {
            name: self.name.clone(),
            start: from,
            values: self.values[a..=b].to_vec(),
        })
    }

    /// Optional window; `None` bounds default to the series ends.
    pub fn window_opt(&self, from: Option<QuarterIndex>, to: Option<QuarterIndex>) -> Result<Series> {
        self.window(from.unwrap_or(self.start), to.unwrap_or(self.end()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Series> {
        Series::new(self.name.clone(), self.start, self.values.iter().map(|&v| f(v)).collect())
    }
}

/// Common calendar span of several series, or `None` when they do not overlap.
pub fn overlap<'a>(series: impl IntoIterator<Item = &'a Series>) -> Option<(QuarterIndex, QuarterIndex)> {
    let mut span: Option<(QuarterIndex, QuarterIndex)> = None;
    for s in series {
        span = Some(match span {
            None => (s.start(), s.end()),
            Some((a, b)) => (a.max(s.start()), b.min(s.end())),
        });
    }
    span.filter(|(a, b)| a <= b)
}

/// `ln(s_t) - ln(s_{t-1})`.
pub fn log_diff(s: &Series) -> Result<Series> {
    if s.len() < 2 {
        return Err(Error::TooShort { needed: 2, have: s.len() });
    }
    if let Some(i) = s.values.iter().position(|&v| v <= 0.0) {
        return Err(Error::NonPositive(s.date(i)));
    }
    let values = s.values.windows(2).map(|w| w[1].ln() - w[0].ln()).collect();
    Series::new(format!("d_{}", s.name), s.start.succ(), values)
}

/// First difference `s_t - s_{t-1}`.
pub fn diff(s: &Series) -> Result<Series> {
    if s.len() < 2 {
        return Err(Error::TooShort { needed: 2, have: s.len() });
    }
    let values = s.values.windows(2).map(|w| w[1] - w[0]).collect();
    Series::new(format!("d_{}", s.name), s.start.succ(), values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Sample standard deviation (divisor `T - 1`).
    pub sd: f64,
    pub count: usize,
}

pub fn summary(s: &Series) -> Result<SummaryStats> {
    let n = s.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, have: n });
    }
    let mean = s.values.iter().sum::<f64>() / n as f64;
    let ss: f64 = s.values.iter().map(|v| (v - mean).powi(2)).sum();
    Ok(SummaryStats {
        mean,
        sd: (ss / (n - 1) as f64).sqrt(),
        count: n,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfTable {
    pub lags: Vec<usize>,
    pub rho: Vec<f64>,
}

/// Correlogram estimate at a single lag, using the full-sample mean and
/// variance denominator. `lag = 0` gives exactly 1.
pub fn autocorr(s: &Series, lag: usize) -> Result<f64> {
    let x = s.values();
    let n = x.len();
    if lag >= n {
        return Err(Error::TooShort { needed: lag + 1, have: n });
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let denom: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance);
    }
    if lag == 0 {
        return Ok(1.0);
    }
    let num: f64 = (lag..n).map(|t| (x[t] - mean) * (x[t - lag] - mean)).sum();
    Ok((num / denom).clamp(-1.0, 1.0))
}

/// Autocorrelations at lags `1..=max_lag`.
pub fn acf(s: &Series, max_lag: usize) -> Result<AcfTable> {
    if max_lag + 1 >= s.len() {
        return Err(Error::TooShort { needed: max_lag + 2, have: s.len() });
    }
    let lags: Vec<usize> = (1..=max_lag).collect();
    let rho = lags.iter().map(|&j| autocorr(s, j)).collect::<Result<_>>()?;
    Ok(AcfTable { lags, rho })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadLagRow {
    pub p: i64,
    pub corr: f64,
    pub nobs: usize,
}

/// Pearson correlation of `a_t` with `b_{t+p}` over the calendar overlap,
/// for every shift `p` in `p_min..=p_max`.
pub fn lead_lag_corr(a: &Series, b: &Series, p_min: i64, p_max: i64) -> Result<Vec<LeadLagRow>> {
    if p_min > p_max {
        return Err(Error::InvalidArgument(format!("p_min {p_min} > p_max {p_max}")));
    }
    (p_min..=p_max)
        .map(|p| {
            let pairs: Vec<(f64, f64)> = a
                .rows()
                .filter_map(|(d, va)| b.at(d.offset(p)).map(|vb| (va, vb)))
                .collect();
            if pairs.len() < 3 {
                return Err(Error::InsufficientOverlap { p, have: pairs.len() });
            }
            let corr = pearson(&pairs).ok_or(Error::ZeroVariance)?;
            Ok(LeadLagRow { p, corr, nobs: pairs.len() })
        })
        .collect()
}

fn pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    let n = pairs.len() as f64;
    let (ma, mb) = pairs
        .iter()
        .fold((0.0, 0.0), |(sa, sb), (x, y)| (sa + x, sb + y));
    let (ma, mb) = (ma / n, mb / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in pairs {
        sab += (x - ma) * (y - mb);
        saa += (x - ma).powi(2);
        sbb += (y - mb).powi(2);
    }
    if saa == 0.0 || sbb == 0.0 {
        return None;
    }
    Some((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> QuarterIndex {
        s.parse().unwrap()
    }

    #[test]
    fn quarter_arithmetic() {
        assert_eq!(q("1991Q4").succ(), q("1992Q1"));
        assert_eq!(q("2014Q1").roman(), "2014:I");
        assert_eq!(q("2013Q4").since(q("1991Q1")), 91);
        assert_eq!(q("1991Q1").offset(-1), q("1990Q4"));
        assert!(q("1991Q4") < q("1992Q1"));
        assert_eq!(q("2010:I"), q("2010Q1"));
        assert!("1991Q5".parse::<QuarterIndex>().is_err());
        assert!("1991".parse::<QuarterIndex>().is_err());
    }

    #[test]
    fn from_rows_cases() {
        let s = Series::from_rows("x", [(q("1991Q1"), 1.0)]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.start(), q("1991Q1"));

        let err = Series::from_rows("x", [(q("1991Q1"), 1.0), (q("1991Q3"), 2.0)]).unwrap_err();
        assert_eq!(err.to_string(), "gap at 1991Q2");

        let err = Series::from_rows("x", [(q("1991Q1"), 1.0), (q("1991Q1"), 2.0)]).unwrap_err();
        assert_eq!(err, Error::Duplicate(q("1991Q1")));

        let err = Series::from_rows("x", [(q("1991Q1"), f64::NAN)]).unwrap_err();
        assert_eq!(err, Error::NonFinite(q("1991Q1")));

        let rows = (0..92).map(|i| (q("1991Q1").offset(i), i as f64));
        let s = Series::from_rows("EXP", rows).unwrap();
        assert_eq!(s.len(), 92);
        assert_eq!(s.end(), q("2013Q4"));
    }

    #[test]
    fn log_diff_cases() {
        let s = Series::new("x", q("2000Q1"), vec![5.0, 5.0, 5.0]).unwrap();
        assert_eq!(log_diff(&s).unwrap().values(), &[0.0, 0.0]);

        let s = Series::new("x", q("2000Q1"), (0..10).map(|t| (0.01 * t as f64).exp()).collect()).unwrap();
        let d = log_diff(&s).unwrap();
        assert_eq!(d.len(), 9);
        assert_eq!(d.start(), q("2000Q2"));
        assert!(d.values().iter().all(|v| (v - 0.01).abs() < 1e-12));

        let s = Series::new("x", q("2000Q1"), vec![1.0, 0.0, 2.0]).unwrap();
        assert_eq!(log_diff(&s).unwrap_err(), Error::NonPositive(q("2000Q2")));
    }

    #[test]
    fn summary_cases() {
        let s = Series::new("x", q("2000Q1"), vec![1.0, 2.0, 3.0]).unwrap();
        let st = summary(&s).unwrap();
        assert_eq!((st.mean, st.sd, st.count), (2.0, 1.0, 3));
        let s = Series::new("x", q("2000Q1"), vec![4.5; 7]).unwrap();
        let st = summary(&s).unwrap();
        assert_eq!((st.mean, st.sd), (4.5, 0.0));
        let s = Series::new("x", q("2000Q1"), vec![4.5]).unwrap();
        assert!(summary(&s).is_err());
    }

    #[test]
    fn acf_alternating_matches_direct_loop() {
        let x: Vec<f64> = (0..40).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let s = Series::new("x", q("2000Q1"), x.clone()).unwrap();
        // direct loop, written out independently
        let n = x.len();
        let mut m = 0.0;
        for v in &x {
            m += v;
        }
        m /= n as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for t in 0..n {
            den += (x[t] - m) * (x[t] - m);
            if t >= 1 {
                num += (x[t] - m) * (x[t - 1] - m);
            }
        }
        let t = acf(&s, 3).unwrap();
        assert!((t.rho[0] - num / den).abs() < 1e-15);
        assert!((t.rho[0] + 39.0 / 40.0).abs() < 1e-12);
        assert_eq!(autocorr(&s, 0).unwrap(), 1.0);
    }

    #[test]
    fn acf_rejects_constant_and_long_lags() {
        let s = Series::new("x", q("2000Q1"), vec![3.0; 10]).unwrap();
        assert_eq!(acf(&s, 2).unwrap_err(), Error::ZeroVariance);
        let s = Series::new("x", q("2000Q1"), vec![1.0, 2.0, 4.0]).unwrap();
        assert!(acf(&s, 2).is_err());
        assert!(acf(&s, 1).is_ok());
    }

    #[test]
    fn lead_lag_basic() {
        let s = Series::new("x", q("2000Q1"), vec![1.0, 3.0, 2.0, 5.0, 4.0, 6.0]).unwrap();
        let t = lead_lag_corr(&s, &s, 0, 0).unwrap();
        assert!((t[0].corr - 1.0).abs() < 1e-15);
        let err = lead_lag_corr(&s, &s, 4, 4).unwrap_err();
        assert_eq!(err, Error::InsufficientOverlap { p: 4, have: 2 });
    }

    fn arb_series() -> impl Strategy<Value = Series> {
        prop::collection::vec(0.1f64..100.0, 8..40)
            .prop_map(|v| Series::new("x", QuarterIndex::new(1990, 1).unwrap(), v).unwrap())
    }

    proptest! {
        #[test]
        fn rows_round_trip(s in arb_series()) {
            let back = Series::from_rows("x", s.rows().collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(back.start(), s.start());
            for (a, b) in back.values().iter().zip(s.values()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
            let token = s.start().to_string();
            prop_assert_eq!(token.parse::<QuarterIndex>().unwrap(), s.start());
        }

        #[test]
        fn log_diff_scale_invariant(s in arb_series(), k in 0.01f64..1e6) {
            let a = log_diff(&s).unwrap();
            let b = log_diff(&s.map(|v| v * k).unwrap()).unwrap();
            prop_assert_eq!(a.len(), s.len() - 1);
            for (x, y) in a.values().iter().zip(b.values()) {
                prop_assert!((x - y).abs() < 1e-10);
            }
        }

        #[test]
        fn log_diff_matches_compose(s in arb_series()) {
            let logs: Vec<f64> = s.values().iter().map(|v| v.ln()).collect();
            let d = log_diff(&s).unwrap();
            for t in 1..logs.len() {
                prop_assert_eq!(d.values()[t - 1], logs[t] - logs[t - 1]);
            }
        }

        #[test]
        fn acf_bounded_and_affine_invariant(s in arb_series(), a in 0.1f64..50.0, b in -100.0f64..100.0) {
            let max_lag = s.len() - 2;
            let t1 = acf(&s, max_lag).unwrap();
            let t2 = acf(&s.map(|v| a * v + b).unwrap(), max_lag).unwrap();
            for (x, y) in t1.rho.iter().zip(&t2.rho) {
                prop_assert!((-1.0..=1.0).contains(x));
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn lead_lag_symmetry(a in arb_series(), b in arb_series(), p in -3i64..=3) {
            let ab = lead_lag_corr(&a, &b, p, p);
            let ba = lead_lag_corr(&b, &a, -p, -p);
            match (ab, ba) {
                (Ok(x), Ok(y)) => prop_assert!((x[0].corr - y[0].corr).abs() < 1e-12),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "asymmetric validity"),
            }
        }

        #[test]
        fn summary_ss_identity(s in arb_series()) {
            let st = summary(&s).unwrap();
            let ss: f64 = s.values().iter().map(|v| (v - st.mean).powi(2)).sum();
            let lhs = st.sd * st.sd * (st.count - 1) as f64;
            prop_assert!((lhs - ss).abs() <= 1e-10 * ss.max(1e-300));
        }
    }
}
