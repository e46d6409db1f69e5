//! Engle–Granger two-step cointegration test.

use serde::{Deserialize, Serialize};

use crate::decision::{CriticalValues, Decisions};
use crate::error::{Error, Result};
use crate::linreg::{build_lagged_design, fit_ols, lag_name, FitResult, RegressionData};
use crate::series::{diff, overlap, QuarterIndex, Series};

/// Critical values for the residual Dickey–Fuller statistic with one
/// regressor and an intercept in the cointegrating regression.
pub const EG_CRITICAL: CriticalValues = CriticalValues {
    ten: -3.12,
    five: -3.41,
    one: -3.96,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EgOptions {
    /// Lagged residual differences in the second stage (0 = plain Dickey–Fuller).
    pub lags: usize,
    pub sample: Option<(QuarterIndex, QuarterIndex)>,
    pub critical: CriticalValues,
}

impl Default for EgOptions {
    fn default() -> Self {
        Self {
            lags: 0,
            sample: None,
            critical: EG_CRITICAL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CointResult {
    /// Normalization: `y = alpha + theta x + z`.
    pub y_name: String,
    pub x_name: String,
    pub alpha: f64,
    pub theta: f64,
    pub residuals: Series,
    pub adf_stat: f64,
    pub lags: usize,
    pub critical: CriticalValues,
    /// `cointegrated.at(L)` iff `adf_stat < critical(L)`.
    pub cointegrated: Decisions,
    pub stage1: FitResult,
    pub stage2: FitResult,
}

pub fn egadf_test(y: &Series, x: &Series, lags: usize) -> Result<CointResult> {
    egadf_test_with(y, x, &EgOptions { lags, ..EgOptions::default() })
}

pub fn egadf_test_with(y: &Series, x: &Series, opts: &EgOptions) -> Result<CointResult> {
    let (a, b) = overlap([y, x]).ok_or(Error::Misaligned)?;
    let (a, b) = opts.sample.unwrap_or((a, b));
    let (y, x) = (y.window(a, b)?, x.window(a, b)?);
    let needed = 2 * opts.lags + 6;
    if y.len() < needed {
        return Err(Error::TooShort { needed, have: y.len() });
    }
    if x.values().iter().all(|&v| v == x.values()[0]) {
        return Err(Error::ZeroVariance);
    }

    let stage1 = fit_ols(
        &RegressionData::new(y.name(), y.values().to_vec(), vec![(x.name().to_string(), x.values().to_vec())], true)?
            .with_first_date(a),
    )?;
    let (alpha, theta) = (stage1.coef[0], stage1.coef[1]);
    let z_values = y
        .values()
        .iter()
        .zip(x.values())
        .map(|(yv, xv)| yv - alpha - theta * xv)
        .collect();
    let z = Series::new("z", a, z_values)?;
    let dz = diff(&z)?;
    let dz_lags: Vec<usize> = (1..=opts.lags).collect();
    let mut specs: Vec<(&Series, &[usize])> = vec![(&z, &[1])];
    if opts.lags > 0 {
        specs.push((&dz, &dz_lags));
    }
    let stage2 = fit_ols(&build_lagged_design(&dz, &specs, false, &[])?)?;
    let adf_stat = stage2.t_stat[stage2.index_of(&lag_name("z", 1)).expect("level lag present")];
    Ok(CointResult {
        y_name: y.name().to_string(),
        x_name: x.name().to_string(),
        alpha,
        theta,
        residuals: z,
        adf_stat,
        lags: opts.lags,
        critical: opts.critical,
        cointegrated: opts.critical.reject_below(adf_stat),
        stage1,
        stage2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decision::Level;
    use crate::simulate::{gen_ar, gen_cointegrated_pair, ArDgp, CointDgp, SimSettings};

    #[test]
    fn recovers_theta_and_residuals() {
        let d = CointDgp { alpha: 2.0, theta: 3.0, sigma_w: 1.0, phi_u: 0.3, sigma_u: 0.1 };
        let (y, x) = gen_cointegrated_pair(&d, &SimSettings::new(400, 1)).unwrap();
        let r = egadf_test(&y, &x, 1).unwrap();
        assert!((r.theta - 3.0).abs() < 0.05);
        assert!(r.cointegrated.five);
        let sum: f64 = r.residuals.values().iter().sum();
        assert!(sum.abs() < 1e-8 * y.values().iter().map(|v| v.abs()).sum::<f64>());
        for (zi, ei) in r.residuals.values().iter().zip(&r.stage1.residuals) {
            assert!((zi - ei).abs() <= 1e-10 * y.values().iter().fold(0.0f64, |m, v| m.max(v.abs())));
        }
        assert!(!r.stage2.has_intercept);
    }

    #[test]
    fn scaling_x_rescales_theta_only() {
        let d = CointDgp { alpha: 1.0, theta: 0.6, sigma_w: 1.0, phi_u: 0.8, sigma_u: 1.0 };
        let (y, x) = gen_cointegrated_pair(&d, &SimSettings::new(200, 7)).unwrap();
        let r0 = egadf_test(&y, &x, 2).unwrap();
        let r1 = egadf_test(&y, &x.map(|v| 4.0 * v).unwrap(), 2).unwrap();
        assert!((r1.theta - r0.theta / 4.0).abs() < 1e-10 * r0.theta.abs());
        assert!((r1.adf_stat - r0.adf_stat).abs() < 1e-8 * r0.adf_stat.abs());
    }

    #[test]
    fn decision_logic() {
        let d = EG_CRITICAL.reject_below(-2.77065);
        assert!(!d.at(Level::One) && !d.at(Level::Five) && !d.at(Level::Ten));
    }

    #[test]
    fn degenerate_inputs() {
        let y = gen_ar(&ArDgp { intercept: 0.0, phi: vec![1.0], sigma: 1.0 }, &SimSettings::new(50, 1)).unwrap();
        let x = Series::new("x", y.start(), vec![3.0; 50]).unwrap();
        assert_eq!(egadf_test(&y, &x, 0).unwrap_err(), Error::ZeroVariance);
        let x2 = Series::new("x", "2040Q1".parse().unwrap(), vec![1.0; 5]).unwrap();
        assert_eq!(egadf_test(&y, &x2, 0).unwrap_err(), Error::Misaligned);
    }
}
