//! Tail probabilities for the reference distributions used in inference.
//!
//! Student t and Fisher F tails are written in terms of the regularized
//! incomplete beta function so that small tail areas are computed directly
//! rather than as `1 - cdf`.

use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dist {
    StdNormal,
    StudentT(f64),
    FisherF(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sides {
    /// Upper tail `P(X > x)`.
    One,
    /// `P(|X| > |x|)` for symmetric laws; twice the smaller tail otherwise.
    Two,
}

fn check_df(df: f64) -> Result<()> {
    if df.is_finite() && df >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidDf(df))
    }
}

pub fn tail_prob(dist: Dist, x: f64, sides: Sides) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite statistic {x}")));
    }
    let p = match dist {
        Dist::StdNormal => {
            let upper_abs = 0.5 * erfc(x.abs() / std::f64::consts::SQRT_2);
            symmetric(x, upper_abs, sides)
        }
        Dist::StudentT(df) => {
            check_df(df)?;
            let upper_abs = 0.5 * beta_reg(df / 2.0, 0.5, df / (df + x * x));
            symmetric(x, upper_abs, sides)
        }
        Dist::FisherF(d1, d2) => {
            check_df(d1)?;
            check_df(d2)?;
            let (upper, lower) = if x <= 0.0 {
                (1.0, 0.0)
            } else {
                let z = d2 / (d2 + d1 * x);
                (beta_reg(d2 / 2.0, d1 / 2.0, z), beta_reg(d1 / 2.0, d2 / 2.0, 1.0 - z))
            };
            match sides {
                Sides::One => upper,
                Sides::Two => 2.0 * upper.min(lower),
            }
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

fn symmetric(x: f64, upper_abs: f64, sides: Sides) -> f64 {
    match sides {
        Sides::Two => 2.0 * upper_abs,
        Sides::One if x >= 0.0 => upper_abs,
        Sides::One => 1.0 - upper_abs,
    }
}
