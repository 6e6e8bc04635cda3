//! Ordinary least-squares line fits, used for growth slopes and power laws.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

impl LinearFit {
    /// Least-squares line through `(x, y)`. Needs at least two distinct abscissae.
    pub fn least_squares(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidSequence {
                name: "fit data",
                reason: "x and y lengths differ",
            });
        }
        if x.len() < 2 {
            return Err(Error::InvalidSequence {
                name: "fit data",
                reason: "at least two points are required",
            });
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSequence {
                name: "fit data",
                reason: "non-finite value",
            });
        }
        let n = x.len() as f64;
        let mx = x.iter().sum::<f64>() / n;
        let my = y.iter().sum::<f64>() / n;
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for (xi, yi) in x.iter().zip(y) {
            let dx = xi - mx;
            let dy = yi - my;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        if sxx == 0.0 {
            return Err(Error::InvalidSequence {
                name: "fit data",
                reason: "abscissae are all equal",
            });
        }
        let slope = sxy / sxx;
        let r_squared = if syy == 0.0 {
            1.0
        } else {
            (sxy * sxy) / (sxx * syy)
        };
        Ok(Self {
            slope,
            intercept: my - slope * mx,
            r_squared,
        })
    }

    /// Fit `ln y` against `ln x`; the slope is the power-law exponent.
    pub fn log_log(x: &[f64], y: &[f64]) -> Result<Self> {
        let lx = log_all(x)?;
        let ly = log_all(y)?;
        Self::least_squares(&lx, &ly)
    }

    /// Fit `ln y` against `x`; the slope is the exponential rate.
    pub fn semi_log(x: &[f64], y: &[f64]) -> Result<Self> {
        let ly = log_all(y)?;
        Self::least_squares(x, &ly)
    }
}

fn log_all(v: &[f64]) -> Result<Vec<f64>> {
    v.iter()
        .map(|&a| {
            if a > 0.0 {
                Ok(a.ln())
            } else {
                Err(Error::InvalidSequence {
                    name: "fit data",
                    reason: "logarithmic fit needs positive values",
                })
            }
        })
        .collect()
}
