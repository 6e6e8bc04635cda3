//! Dielectric and polarizability response models.
//!
//! All frequencies are in units of a caller-chosen reference frequency and all
//! lengths in units of `c / omega_ref`, with `hbar = k_B = c = 1`. The models are:
//!
//! * the lossless plasma model `1 - omega_p^2 / omega^2`,
//! * the Drude model `eps_L(omega) - omega_p^2 / (omega (omega + i gamma))`,
//! * the Drude model of a plate whose carriers drift with velocity `v0`
//!   (full tensor and its longitudinal part, which only sees the
//!   Doppler-shifted frequency `omega - k.v0`),
//! * a single-resonance particle polarizability,
//! * the quasi-static surface response `(eps - 1) / (eps + 1)`.
//!
//! [`kk_residual`] measures how far a model is from satisfying the
//! Kramers-Kronig relation for `Re eps`.

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{require_finite, require_non_negative, require_positive, Error, Result};

/// Lattice (background) permittivity `eps_L(omega)`.
#[derive(Clone)]
pub enum LatticeResponse {
    Constant(Complex64),
    Dispersive(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>),
}

impl LatticeResponse {
    pub fn real(value: f64) -> Self {
        Self::Constant(Complex64::new(value, 0.0))
    }

    pub fn dispersive<F>(f: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self::Dispersive(Arc::new(f))
    }

    #[inline]
    pub fn at(&self, omega: f64) -> Complex64 {
        match self {
            Self::Constant(v) => *v,
            Self::Dispersive(f) => f(omega),
        }
    }

    /// The constant value, when the response is frequency independent.
    pub fn as_constant(&self) -> Option<Complex64> {
        match self {
            Self::Constant(v) => Some(*v),
            Self::Dispersive(_) => None,
        }
    }
}

impl Default for LatticeResponse {
    fn default() -> Self {
        Self::real(1.0)
    }
}

impl fmt::Debug for LatticeResponse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(v) => write!(f, "Constant({v})"),
            Self::Dispersive(_) => f.write_str("Dispersive(<fn>)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmaParams {
    pub omega_p: f64,
}

impl PlasmaParams {
    pub fn new(omega_p: f64) -> Result<Self> {
        let p = Self { omega_p };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("omega_p", self.omega_p)
    }
}

#[derive(Debug, Clone)]
pub struct DrudeParams {
    pub omega_p: f64,
    /// Relaxation frequency; any temperature dependence is resolved by the caller.
    pub gamma: f64,
    pub eps_lattice: LatticeResponse,
}

impl DrudeParams {
    /// Drude metal with vacuum background (`eps_L = 1`).
    pub fn new(omega_p: f64, gamma: f64) -> Result<Self> {
        Self::with_lattice(omega_p, gamma, LatticeResponse::default())
    }

    pub fn with_lattice(omega_p: f64, gamma: f64, eps_lattice: LatticeResponse) -> Result<Self> {
        let p = Self {
            omega_p,
            gamma,
            eps_lattice,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("omega_p", self.omega_p)?;
        require_non_negative("gamma", self.gamma)?;
        if let LatticeResponse::Constant(v) = self.eps_lattice {
            require_finite("eps_lattice.re", v.re)?;
            if !(v.im >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "eps_lattice.im",
                    value: v.im,
                    reason: "Im eps_L must be >= 0 (passive lattice)",
                });
            }
        }
        Ok(())
    }

    fn carrier_term(&self, doppler: f64) -> Complex64 {
        let wp2 = self.omega_p * self.omega_p;
        Complex64::new(wp2, 0.0) / (Complex64::new(doppler, self.gamma) * doppler)
    }
}

/// Drude plate whose carriers drift with velocity `v0`.
#[derive(Debug, Clone)]
pub struct DriftParams {
    pub drude: DrudeParams,
    pub v0: [f64; 3],
}

impl DriftParams {
    /// Drift along `+x` with speed `v0` (negative values drift along `-x`).
    pub fn along_x(drude: DrudeParams, v0: f64) -> Result<Self> {
        let p = Self {
            drude,
            v0: [v0, 0.0, 0.0],
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.drude.validate()?;
        for (name, v) in ["v0.x", "v0.y", "v0.z"].into_iter().zip(self.v0) {
            require_finite(name, v)?;
        }
        Ok(())
    }

    pub fn speed(&self) -> f64 {
        self.v0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleParams {
    /// Static polarizability (length^3).
    pub alpha0: f64,
    pub omega0: f64,
    /// Decay rate of the particle excitation.
    pub eta: f64,
}

impl ParticleParams {
    pub fn new(alpha0: f64, omega0: f64, eta: f64) -> Result<Self> {
        let p = Self {
            alpha0,
            omega0,
            eta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("alpha0", self.alpha0)?;
        require_positive("omega0", self.omega0)?;
        require_positive("eta", self.eta)
    }
}

/// Lossless plasma model `1 - omega_p^2 / omega^2`.
pub fn plasma_epsilon(omega: f64, p: &PlasmaParams) -> Result<f64> {
    p.validate()?;
    require_finite("omega", omega)?;
    if omega == 0.0 {
        return Err(Error::Domain {
            model: "plasma_epsilon",
            reason: "double pole at zero frequency",
            at: omega,
        });
    }
    Ok(1.0 - (p.omega_p / omega).powi(2))
}

/// Drude permittivity at `omega > 0`.
pub fn drude_epsilon(omega: f64, p: &DrudeParams) -> Result<Complex64> {
    p.validate()?;
    require_finite("omega", omega)?;
    if !(omega > 0.0) {
        return Err(Error::Domain {
            model: "drude_epsilon",
            reason: "defined for omega > 0 (pole at omega = 0)",
            at: omega,
        });
    }
    Ok(p.eps_lattice.at(omega) - p.carrier_term(omega))
}

/// Permittivity tensor of the drifting-carrier Drude plate,
///
/// `eps_ik = eps_L d_ik - wp^2 / (w (w - k.v0 + i g)) (d_ik + v0_i k_k / (w - k.v0))`.
pub fn drift_epsilon_tensor(
    omega: f64,
    k: [f64; 3],
    p: &DriftParams,
) -> Result<Matrix3<Complex64>> {
    p.validate()?;
    require_finite("omega", omega)?;
    if omega == 0.0 {
        return Err(Error::Domain {
            model: "drift_epsilon_tensor",
            reason: "pole at omega = 0",
            at: omega,
        });
    }
    let k_dot_v0: f64 = k.iter().zip(p.v0).map(|(a, b)| a * b).sum();
    let doppler = omega - k_dot_v0;
    if doppler == 0.0 {
        return Err(Error::DopplerPole { omega, k_dot_v0 });
    }
    let d = &p.drude;
    let prefactor =
        Complex64::new(d.omega_p * d.omega_p, 0.0) / (Complex64::new(doppler, d.gamma) * omega);
    let eps_l = d.eps_lattice.at(omega);
    Ok(Matrix3::from_fn(|i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        let bracket = delta + p.v0[i] * k[j] / doppler;
        eps_l * delta - prefactor * bracket
    }))
}

/// Longitudinal permittivity `eps_L(w) - wp^2 / ((w_- + i g) w_-)` with the
/// Doppler-shifted frequency `w_- = omega - k.v0`.
pub fn drift_epsilon_longitudinal(omega: f64, k_dot_v0: f64, p: &DriftParams) -> Result<Complex64> {
    p.validate()?;
    require_finite("omega", omega)?;
    require_finite("k_dot_v0", k_dot_v0)?;
    let doppler = omega - k_dot_v0;
    if doppler == 0.0 {
        return Err(Error::DopplerPole { omega, k_dot_v0 });
    }
    Ok(p.drude.eps_lattice.at(omega) - p.drude.carrier_term(doppler))
}

/// Particle polarizability `alpha0 w0^2 / (w0^2 - w^2 - i w eta)`.
pub fn particle_polarizability(omega: f64, p: &ParticleParams) -> Complex64 {
    let w0sq = p.omega0 * p.omega0;
    Complex64::new(p.alpha0 * w0sq, 0.0) / Complex64::new(w0sq - omega * omega, -omega * p.eta)
}

/// Quasi-static surface response `(eps - 1) / (eps + 1)` of the drifting plate
/// for an evanescent wave with in-plane wave number `k_x` along the drift axis.
pub fn surface_response(omega: f64, k_x: f64, p: &DriftParams) -> Result<Complex64> {
    let eps = drift_epsilon_longitudinal(omega, k_x * p.v0[0], p)?;
    let denom = eps + 1.0;
    if denom == Complex64::new(0.0, 0.0) {
        return Err(Error::SurfacePole { omega, k_x });
    }
    Ok((eps - 1.0) / denom)
}

/// Positive frequency `w` at which `Re eps_D(w) = -1`, the surface-plasmon
/// condition of the Drude model, located by bisection. `None` when the model
/// supports no surface plasmon (e.g. `gamma` too large).
pub fn surface_plasmon_frequency(p: &DrudeParams) -> Option<f64> {
    let g = |w: f64| drude_epsilon(w, p).map(|e| e.re + 1.0).unwrap_or(f64::NAN);
    let scale = p.omega_p.max(p.gamma).max(f64::MIN_POSITIVE);
    let mut lo = 1e-9 * scale;
    let mut hi = 1e3 * scale;
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo < 0.0 && ghi > 0.0) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Kramers-Kronig residual of `model` at `omega_test`:
///
/// `| Re eps(w) - 1 - (2/pi) P int_0^W w' Im eps(w') / (w'^2 - w^2) dw' |`
///
/// with the principal value handled by subtracting the singular part at
/// `omega_test` and integrating the remainder on `omega_grid` with the
/// trapezoidal rule; the subtracted part is integrated analytically. The
/// result is checked against the same computation on the grid with every
/// interval bisected.
pub fn kk_residual<F>(model: F, omega_grid: &[f64], omega_test: f64) -> Result<f64>
where
    F: Fn(f64) -> Complex64,
{
    validate_grid(omega_grid, omega_test)?;
    let coarse = kk_terms(&model, omega_grid, omega_test);

    let mut refined = Vec::with_capacity(2 * omega_grid.len());
    for w in omega_grid.windows(2) {
        refined.push(w[0]);
        refined.push(0.5 * (w[0] + w[1]));
    }
    refined.push(*omega_grid.last().expect("validated nonempty"));
    let fine = kk_terms(&model, &refined, omega_test);

    let change = (fine.residual - coarse.residual).abs();
    let floor = 1e-3
        * coarse
            .re_minus_one
            .abs()
            .max(coarse.hilbert.abs())
            .max(f64::MIN_POSITIVE);
    if change > 0.1 * coarse.residual && change > floor {
        return Err(Error::GridTooCoarse {
            residual: coarse.residual,
            refined: fine.residual,
        });
    }
    Ok(coarse.residual)
}

struct KkTerms {
    re_minus_one: f64,
    hilbert: f64,
    residual: f64,
}

fn validate_grid(grid: &[f64], omega_test: f64) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::InvalidSequence {
            name: "omega_grid",
            reason: "needs at least three points",
        });
    }
    if !(grid[0] > 0.0) || grid.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidSequence {
            name: "omega_grid",
            reason: "frequencies must be finite and positive",
        });
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSequence {
            name: "omega_grid",
            reason: "frequencies must be strictly ascending",
        });
    }
    let top = grid[grid.len() - 1];
    if !(omega_test > grid[0] && omega_test < top) {
        return Err(Error::Domain {
            model: "kk_residual",
            reason: "omega_test must lie strictly inside the grid",
            at: omega_test,
        });
    }
    Ok(())
}

fn kk_terms<F: Fn(f64) -> Complex64>(model: &F, grid: &[f64], a: f64) -> KkTerms {
    let weight = |w: f64| w * model(w).im;
    let h_a = weight(a);
    let top = grid[grid.len() - 1];
    // Remainder (h(w) - h(a)) / (w^2 - a^2) is regular at w = a.
    let close = |w: f64| (w - a).abs() <= 1e-9 * a;
    let mut rem: Vec<f64> = grid
        .iter()
        .map(|&w| {
            if close(w) {
                f64::NAN
            } else {
                (weight(w) - h_a) / (w * w - a * a)
            }
        })
        .collect();
    for i in 0..rem.len() {
        if rem[i].is_nan() {
            // Symmetric neighbours straddle the test point; average them.
            let left = if i > 0 { rem[i - 1] } else { rem[i + 1] };
            let right = if i + 1 < rem.len() { rem[i + 1] } else { left };
            rem[i] = 0.5 * (left + right);
        }
    }
    let mut integral = rem[0] * grid[0];
    for i in 1..grid.len() {
        integral += 0.5 * (rem[i] + rem[i - 1]) * (grid[i] - grid[i - 1]);
    }
    let singular = h_a / (2.0 * a) * ((top - a) / (top + a)).abs().ln();
    let hilbert = std::f64::consts::FRAC_2_PI * (integral + singular);
    let re_minus_one = model(a).re - 1.0;
    KkTerms {
        re_minus_one,
        hilbert,
        residual: (re_minus_one - hilbert).abs(),
    }
}
