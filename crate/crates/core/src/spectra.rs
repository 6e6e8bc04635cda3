//! Fluctuation-dissipation prefactors and the equilibrium field spectral
//! density of a homogeneous, isotropic medium.
//!
//! Units: `hbar = k_B = c = 1`. The contact term `(2 pi / eps) delta(R)` of the
//! coincident-point density is a distribution and is not represented; every
//! function here requires a separation `R > 0`.

use num_complex::Complex64;

use crate::error::{require_finite, require_non_negative, Error, Result};

/// Thermal state of a body, `temperature >= 0` in energy units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub temperature: f64,
}

impl ThermalState {
    pub const ZERO: Self = Self { temperature: 0.0 };

    pub fn new(temperature: f64) -> Result<Self> {
        require_non_negative("temperature", temperature)?;
        Ok(Self { temperature })
    }
}

/// Dielectric value of the medium and the separation between the two field points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumPoint {
    pub epsilon: Complex64,
    pub r: f64,
}

impl MediumPoint {
    pub fn new(epsilon: Complex64, r: f64) -> Result<Self> {
        let p = Self { epsilon, r };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_finite("epsilon.re", self.epsilon.re)?;
        require_non_negative("epsilon.im", self.epsilon.im)?;
        require_non_negative("r", self.r)
    }
}

/// `(abscissa, value)` record of a spectral trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSample {
    pub abscissa: f64,
    pub value: f64,
}

/// Densities along a sequence of vanishing losses, with the lossless value they approach.
#[derive(Debug, Clone, PartialEq)]
pub struct LosslessTrace {
    /// `(delta, density)` pairs in the order the deltas were given.
    pub samples: Vec<SpectrumSample>,
    /// Vacuum value `(2 w^2 / R) sin(w R)` at the same temperature factor.
    pub limit: f64,
}

/// `coth(omega / 2T)`, equal to 1 at `T = 0`.
pub fn thermal_factor(omega: f64, t: ThermalState) -> Result<f64> {
    require_non_negative("temperature", t.temperature)?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain {
            model: "thermal_factor",
            reason: "requires finite omega > 0",
            at: omega,
        });
    }
    Ok(coth_half(omega, t.temperature))
}

/// `coth(omega / 2T)` for either sign of `omega`; at `T = 0` this is `sign(omega)`.
pub fn thermal_factor_signed(omega: f64, temperature: f64) -> f64 {
    if omega == 0.0 {
        return 0.0;
    }
    omega.signum() * coth_half(omega.abs(), temperature)
}

fn coth_half(omega: f64, temperature: f64) -> f64 {
    if temperature == 0.0 {
        return 1.0;
    }
    let x = omega / (2.0 * temperature);
    // tanh saturates to 1 instead of overflowing for large x.
    1.0 / x.tanh()
}

/// Scalar weight `(w^2 / 2) coth(w / 2T) Im eps` of the current spectral function.
pub fn current_correlator_prefactor(omega: f64, t: ThermalState, im_eps: f64) -> Result<f64> {
    require_non_negative("im_eps", im_eps)?;
    Ok(0.5 * omega * omega * thermal_factor(omega, t)? * im_eps)
}

/// `sqrt(-eps)` on the branch with non-negative real part; for real `eps > 0`
/// this is the `Im eps -> 0+` limit, `-i sqrt(eps)`.
pub fn decaying_root(epsilon: Complex64) -> Complex64 {
    let w = (-epsilon).sqrt();
    if w.re == 0.0 && w.im > 0.0 {
        Complex64::new(0.0, -w.im)
    } else {
        w
    }
}

/// Contracted field spectral density `<E(r) . E(r')>_w` at separation `R > 0`:
/// `2 coth(w / 2T) Im[(w^2 / R) exp(-w R sqrt(-eps))]`.
pub fn field_spectral_density(point: MediumPoint, omega: f64, t: ThermalState) -> Result<f64> {
    point.validate()?;
    if point.r == 0.0 {
        return Err(Error::Domain {
            model: "field_spectral_density",
            reason: "R = 0 carries the contact term; only R > 0 is evaluated",
            at: point.r,
        });
    }
    let factor = thermal_factor(omega, t)?;
    let phase = (-(omega * point.r) * decaying_root(point.epsilon)).exp();
    Ok(2.0 * factor * (omega * omega / point.r * phase).im)
}

/// Vacuum density `(2 w^2 / R) sin(w R)` times the thermal factor.
pub fn vacuum_spectral_density(omega: f64, r: f64, t: ThermalState) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain {
            model: "vacuum_spectral_density",
            reason: "requires R > 0",
            at: r,
        });
    }
    let factor = thermal_factor(omega, t)?;
    Ok(2.0 * factor * (omega * omega / r * (omega * r).sin()))
}

/// Field density at `eps = 1 + i delta` for each `delta` (zero-point limit),
/// together with the vacuum value they converge to.
pub fn lossless_limit_trace(omega: f64, r: f64, deltas: &[f64]) -> Result<LosslessTrace> {
    if deltas.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
        return Err(Error::InvalidSequence {
            name: "deltas",
            reason: "loss parameters must be finite and >= 0",
        });
    }
    if deltas.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::InvalidSequence {
            name: "deltas",
            reason: "loss parameters must be descending",
        });
    }
    let limit = vacuum_spectral_density(omega, r, ThermalState::ZERO)?;
    let samples = deltas
        .iter()
        .map(|&delta| {
            let point = MediumPoint::new(Complex64::new(1.0, delta), r)?;
            Ok(SpectrumSample {
                abscissa: delta,
                value: field_spectral_density(point, omega, ThermalState::ZERO)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LosslessTrace { samples, limit })
}

/// Density as a function of separation at fixed `eps` and frequency.
pub fn density_profile(
    epsilon: Complex64,
    omega: f64,
    t: ThermalState,
    radii: &[f64],
) -> Result<Vec<SpectrumSample>> {
    radii
        .iter()
        .map(|&r| {
            Ok(SpectrumSample {
                abscissa: r,
                value: field_spectral_density(MediumPoint::new(epsilon, r)?, omega, t)?,
            })
        })
        .collect()
}
