use std::fmt;

use serde::{Deserialize, Serialize};

/// Conventional significance levels used by every test in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    #[serde(rename = "10%")]
    Ten,
    #[serde(rename = "5%")]
    Five,
    #[serde(rename = "1%")]
    One,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Ten, Level::Five, Level::One];

    pub fn alpha(self) -> f64 {
        match self {
            Level::Ten => 0.10,
            Level::Five => 0.05,
            Level::One => 0.01,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Ten => "10%",
            Level::Five => "5%",
            Level::One => "1%",
        })
    }
}

impl std::str::FromStr for Level {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s.trim_end_matches('%') {
            "10" | "0.10" | "0.1" => Ok(Level::Ten),
            "5" | "0.05" => Ok(Level::Five),
            "1" | "0.01" => Ok(Level::One),
            _ => Err(crate::Error::InvalidArgument(format!("unsupported significance level `{s}`"))),
        }
    }
}

/// Reject / do-not-reject at each of 10%, 5%, 1%.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decisions {
    pub ten: bool,
    pub five: bool,
    pub one: bool,
}

impl Decisions {
    pub fn from_fn(mut reject: impl FnMut(Level) -> bool) -> Self {
        Self {
            ten: reject(Level::Ten),
            five: reject(Level::Five),
            one: reject(Level::One),
        }
    }

    /// Reject when `p < alpha`.
    pub fn from_p_value(p: f64) -> Self {
        Self::from_fn(|l| p < l.alpha())
    }

    pub fn at(&self, level: Level) -> bool {
        match level {
            Level::Ten => self.ten,
            Level::Five => self.five,
            Level::One => self.one,
        }
    }

    /// Rejection at a stricter level implies rejection at every looser one.
    pub fn is_monotone(&self) -> bool {
        (!self.one || self.five) && (!self.five || self.ten)
    }
}

/// Critical values at 10%, 5%, 1%.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    pub ten: f64,
    pub five: f64,
    pub one: f64,
}

impl CriticalValues {
    pub fn at(&self, level: Level) -> f64 {
        match level {
            Level::Ten => self.ten,
            Level::Five => self.five,
            Level::One => self.one,
        }
    }

    /// Lower-tail tests (unit root): reject when `stat < critical`.
    pub fn reject_below(&self, stat: f64) -> Decisions {
        Decisions::from_fn(|l| stat < self.at(l))
    }

    /// Upper-tail tests (QLR): reject when `stat > critical`.
    pub fn reject_above(&self, stat: f64) -> Decisions {
        Decisions::from_fn(|l| stat > self.at(l))
    }
}
