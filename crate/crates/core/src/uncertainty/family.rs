use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Distribution family for stochastic activity durations. Every family is
/// parameterized by mean and coefficient of variation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    #[default]
    Lognormal,
    /// Symmetric, mode at the mean, half-width `sqrt(6) * sd`.
    Triangular,
    /// Beta(4, 4) scaled to `[mean - 3 sd, mean + 3 sd]`.
    Beta,
    /// Half-width `sqrt(3) * sd`.
    Uniform,
    /// Truncated at zero.
    Normal,
    Deterministic,
    /// `mean - sd` for negative deviates, `mean + sd` otherwise.
    TwoPoint,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Lognormal,
        Family::Triangular,
        Family::Beta,
        Family::Uniform,
        Family::Normal,
        Family::Deterministic,
        Family::TwoPoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Lognormal => "lognormal",
            Family::Triangular => "triangular",
            Family::Beta => "beta",
            Family::Uniform => "uniform",
            Family::Normal => "normal",
            Family::Deterministic => "deterministic",
            Family::TwoPoint => "two-point",
        }
    }

    /// Largest cv for which the support stays non-negative.
    pub fn max_cv(self) -> f64 {
        match self {
            Family::Triangular => 1.0 / 6f64.sqrt(),
            Family::Beta => 1.0 / 3.0,
            Family::Uniform => 1.0 / 3f64.sqrt(),
            _ => 1.0,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown distribution family `{s}`")))
    }
}

/// Location and scale of the normal underlying a lognormal with the given
/// mean and coefficient of variation.
pub fn lognormal_params(mean: f64, cv: f64) -> Result<(f64, f64)> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::Domain(format!(
            "lognormal mean must be positive, got {mean}"
        )));
    }
    if !(cv > 0.0 && cv.is_finite()) {
        return Err(Error::Domain(format!(
            "lognormal cv must be positive, got {cv}"
        )));
    }
    let scale2 = cv.mul_add(cv, 1.0).ln();
    Ok((mean.ln() - scale2 / 2.0, scale2.sqrt()))
}

/// Standard normal CDF.
pub(crate) fn phi(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DurationSpec {
    pub family: Family,
    pub mean: f64,
    pub cv: f64,
}

impl DurationSpec {
    pub fn new(family: Family, mean: f64, cv: f64) -> Result<Self> {
        if !(mean >= 0.0 && mean.is_finite()) {
            return Err(Error::Domain(format!(
                "mean must be non-negative, got {mean}"
            )));
        }
        if !(0.0..1.0).contains(&cv) {
            return Err(Error::Domain(format!("cv must lie in [0, 1), got {cv}")));
        }
        if cv > family.max_cv() {
            return Err(Error::Domain(format!(
                "cv {cv} exceeds {:.4}, the largest value with non-negative {family} support",
                family.max_cv()
            )));
        }
        Ok(DurationSpec { family, mean, cv })
    }

    pub fn deterministic(mean: f64) -> Self {
        DurationSpec {
            family: Family::Deterministic,
            mean,
            cv: 0.0,
        }
    }

    pub fn sd(&self) -> f64 {
        self.cv * self.mean
    }

    pub fn is_deterministic(&self) -> bool {
        self.family == Family::Deterministic || self.cv == 0.0 || self.mean == 0.0
    }

    /// Maps one standard-normal deviate to a duration. The map is
    /// non-decreasing in `z` for every family and never returns a negative
    /// value.
    pub fn sample(&self, z: f64) -> f64 {
        if self.is_deterministic() {
            return self.mean;
        }
        let sd = self.sd();
        let x = match self.family {
            Family::Deterministic => self.mean,
            Family::Lognormal => {
                let scale2 = self.cv.mul_add(self.cv, 1.0).ln();
                (self.mean.ln() - scale2 / 2.0 + scale2.sqrt() * z).exp()
            }
            Family::Normal => sd.mul_add(z, self.mean),
            Family::Uniform => {
                let u = phi(z);
                self.mean + 3f64.sqrt() * sd * (2.0 * u - 1.0)
            }
            Family::Triangular => {
                let u = phi(z);
                let half = 6f64.sqrt() * sd;
                if u < 0.5 {
                    self.mean - half + half * (2.0 * u).sqrt()
                } else {
                    self.mean + half - half * (2.0 * (1.0 - u)).sqrt()
                }
            }
            Family::Beta => {
                let u = phi(z);
                let x = beta44().inverse_cdf(u);
                self.mean - 3.0 * sd + 6.0 * sd * x
            }
            Family::TwoPoint => {
                if z < 0.0 {
                    self.mean - sd
                } else {
                    self.mean + sd
                }
            }
        };
        x.max(0.0)
    }
}

fn beta44() -> &'static Beta {
    static BETA: std::sync::OnceLock<Beta> = std::sync::OnceLock::new();
    BETA.get_or_init(|| Beta::new(4.0, 4.0).expect("valid shape"))
}
