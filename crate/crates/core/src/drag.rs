//! Drag force on a polarizable particle held above a plate carrying a dc current.
//!
//! The force is
//!
//! `F_x = (1/pi^2) int_0^inf dw alpha''(w) int int dk_x dk_y
//!        [coth(w_-/2T_el) - coth(w/2T_p)] Im Gamma(w, k_x) q k_x exp(-2 q z0)`
//!
//! with `w_- = w - k_x v0` and `q = |k|`. The `k_y` integral is done by a
//! sinh-substituted trapezoidal rule (exponentially convergent), the `k_x` and
//! `w` integrals by nested adaptive Gauss-Kronrod quadrature seeded at the
//! Doppler line and the plasmon resonances. `F_x > 0` means the particle is
//! pulled along the drift.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::fit::LinearFit;
use crate::materials::{
    particle_polarizability, surface_plasmon_frequency, surface_response, DriftParams,
    ParticleParams,
};
use crate::quad::Integrator;
use crate::spectra::thermal_factor_signed;

/// `k_x` cutoff in units of `1 / z0`; `exp(-2 k z0)` is below `1e-17` beyond it.
const K_CUTOFF: f64 = 20.0;
/// Frequency margin, in units of the larger temperature, past which the thermal
/// bracket is exponentially small.
const THERMAL_MARGIN: f64 = 50.0;
/// Resonance seeds are placed this many widths `gamma / |v0|` around each line.
const RESONANCE_WIDTHS: [f64; 2] = [3.0, 10.0];
/// Step of the trapezoidal rule in the `sinh` variable.
const SINH_STEP: f64 = 0.1;
/// Minimum coefficient of determination of the asymptotic fits.
const MIN_R_SQUARED: f64 = 0.99;

/// Particle above a drifting Drude plate.
#[derive(Debug, Clone)]
pub struct DragConfig {
    /// Plate response; the drift must be along `x` and the lattice constant real.
    pub plate: DriftParams,
    pub particle: ParticleParams,
    /// Particle-plate separation.
    pub z0: f64,
    /// Electron temperature of the plate.
    pub t_el: f64,
    /// Particle temperature.
    pub t_p: f64,
    /// Lattice temperature; carried for bookkeeping, it enters no formula here.
    pub t_lattice: f64,
}

impl DragConfig {
    pub fn new(
        plate: DriftParams,
        particle: ParticleParams,
        z0: f64,
        t_el: f64,
        t_p: f64,
    ) -> Result<Self> {
        let cfg = Self {
            plate,
            particle,
            z0,
            t_el,
            t_p,
            t_lattice: 0.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.plate.validate()?;
        self.particle.validate()?;
        require_positive("z0", self.z0)?;
        require_non_negative("t_el", self.t_el)?;
        require_non_negative("t_p", self.t_p)?;
        require_non_negative("t_lattice", self.t_lattice)?;
        if self.plate.v0[1] != 0.0 || self.plate.v0[2] != 0.0 {
            return Err(Error::InvalidParameter {
                name: "v0",
                value: self.plate.speed(),
                reason: "drift velocity must point along x",
            });
        }
        match self.plate.drude.eps_lattice.as_constant() {
            Some(v) if v.im == 0.0 => Ok(()),
            _ => Err(Error::InvalidParameter {
                name: "eps_lattice",
                value: f64::NAN,
                reason: "the drag force requires a real, frequency-independent lattice constant",
            }),
        }
    }

    pub fn v0(&self) -> f64 {
        self.plate.v0[0]
    }

    /// Copy with a different drift speed along `x`.
    pub fn with_v0(&self, v0: f64) -> Self {
        let mut c = self.clone();
        c.plate.v0 = [v0, 0.0, 0.0];
        c
    }

    /// Copy with a different separation.
    pub fn with_z0(&self, z0: f64) -> Self {
        Self { z0, ..self.clone() }
    }
}

/// Drag force and quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragResult {
    pub f_x: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Log-log exponents of the force in the slow and fast drift regimes.
#[derive(Debug, Clone, PartialEq)]
pub struct DragAsymptotics {
    /// Fit over `kappa <= 0.1`.
    pub small: LinearFit,
    /// Fit over `kappa >= 10`.
    pub large: LinearFit,
    /// `(v0, F_x)` of every requested speed, in input order.
    pub forces: Vec<(f64, DragResult)>,
}

/// Dimensionless drift `kappa = v0 / (omega0 z0)`.
pub fn kappa(v0: f64, omega0: f64, z0: f64) -> f64 {
    v0 / (omega0 * z0)
}

/// Pointwise integrand of the drag force (before the `1/pi^2` prefactor).
pub fn drag_integrand(omega: f64, k_x: f64, k_y: f64, cfg: &DragConfig) -> Result<f64> {
    cfg.validate()?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Domain {
            model: "drag_integrand",
            reason: "requires finite omega > 0",
            at: omega,
        });
    }
    let alpha_im = particle_polarizability(omega, &cfg.particle).im;
    let gamma_im = surface_response(omega, k_x, &cfg.plate)?.im;
    let omega_minus = omega - k_x * cfg.v0();
    let bracket =
        thermal_factor_signed(omega_minus, cfg.t_el) - thermal_factor_signed(omega, cfg.t_p);
    let q = k_x.hypot(k_y);
    Ok(alpha_im * bracket * gamma_im * q * k_x * (-2.0 * q * cfg.z0).exp())
}

/// `Q(k_x) = int dk_y q exp(-2 q z0)`, `q = sqrt(k_x^2 + k_y^2)`, over the real line.
pub fn evanescent_weight(k_x: f64, z0: f64) -> f64 {
    let c = k_x.abs();
    if c == 0.0 {
        return 0.5 / (z0 * z0);
    }
    // k_y = c sinh(s): integrand c^2 cosh^2(s) exp(-2 z0 c cosh(s)), even in s.
    let a = 2.0 * z0 * c;
    let term = |s: f64| {
        let ch = s.cosh();
        ch * ch * (-a * (ch - 1.0)).exp()
    };
    // The integrand peaks near cosh(s) = 2 / a; sum until well past the peak.
    let s_peak = (2.0 / a).max(1.0).acosh();
    let mut sum = 0.5 * term(0.0);
    let mut s = SINH_STEP;
    loop {
        let t = term(s);
        sum += t;
        if s > s_peak && t < 1e-18 * sum {
            break;
        }
        s += SINH_STEP;
    }
    2.0 * SINH_STEP * sum * c * c * (-a).exp()
}

/// Parameters of the closed-form integrand used inside the quadrature.
struct Kernel {
    wp2: f64,
    gamma: f64,
    /// `eps_L + 1`.
    a: f64,
    v0: f64,
    z0: f64,
    t_el: f64,
    t_p: f64,
}

impl Kernel {
    fn new(cfg: &DragConfig) -> Self {
        let eps_l = cfg
            .plate
            .drude
            .eps_lattice
            .as_constant()
            .expect("validated constant lattice")
            .re;
        Self {
            wp2: cfg.plate.drude.omega_p.powi(2),
            gamma: cfg.plate.drude.gamma,
            a: eps_l + 1.0,
            v0: cfg.v0(),
            z0: cfg.z0,
            t_el: cfg.t_el,
            t_p: cfg.t_p,
        }
    }

    /// `Im Gamma / w_-` for real `eps_L`: `2 gamma w_p^2 / ((A x^2 - w_p^2)^2 + A^2 gamma^2 x^2)`.
    /// Finite at `w_- = 0`, so the Doppler line needs no special treatment.
    fn im_gamma_over_x(&self, x: f64) -> f64 {
        let r = self.a * x * x - self.wp2;
        let s = self.a * self.gamma * x;
        2.0 * self.gamma * self.wp2 / (r * r + s * s)
    }

    /// `[coth(x / 2T_el) - coth(w / 2T_p)] x` with the removable singularity at `x = 0` resolved.
    fn bracket_times_x(&self, omega: f64, x: f64) -> f64 {
        // Same operations as the particle term, so equal temperatures at
        // w_- = w cancel exactly.
        let electron = if self.t_el > 0.0 && (x / (2.0 * self.t_el)).abs() < 1e-8 {
            2.0 * self.t_el
        } else {
            thermal_factor_signed(x, self.t_el) * x
        };
        electron - thermal_factor_signed(omega, self.t_p) * x
    }

    /// Integrand in `k_x` at fixed `w`, already integrated over `k_y`.
    fn kx_integrand(&self, omega: f64, k_x: f64) -> f64 {
        let x = omega - k_x * self.v0;
        let b = self.bracket_times_x(omega, x);
        if b == 0.0 {
            return 0.0;
        }
        b * self.im_gamma_over_x(x) * k_x * evanescent_weight(k_x, self.z0)
    }
}

/// `k_x` interval carrying the integrand at frequency `w`, or `None` when empty.
fn kx_support(k: &Kernel, omega: f64, k_max: f64) -> Option<(f64, f64)> {
    if k.t_el > 0.0 || k.t_p > 0.0 {
        return Some((-k_max, k_max));
    }
    // At zero temperature only the anomalous-Doppler region w_- < 0 contributes.
    if k.v0 == 0.0 {
        return None;
    }
    let edge = omega / k.v0;
    let (lo, hi) = if k.v0 > 0.0 {
        (edge, k_max)
    } else {
        (-k_max, edge)
    };
    (lo < hi).then_some((lo, hi))
}

/// Sorted subdivision seeds in `(lo, hi)` with the endpoints attached.
fn seeds(lo: f64, hi: f64, candidates: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> = candidates
        .into_iter()
        .filter(|p| p.is_finite() && *p > lo && *p < hi)
        .collect();
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Drag force `F_x` with relative tolerance `tol`.
///
/// Returns [`Error::NonConvergence`] when either quadrature level exhausts its
/// budget above the tolerance.
pub fn drag_force(cfg: &DragConfig, tol: f64) -> Result<DragResult> {
    cfg.validate()?;
    require_positive("tol", tol)?;
    let kernel = Kernel::new(cfg);
    let v0 = kernel.v0;
    let k_max = K_CUTOFF / cfg.z0;
    let w_res = surface_plasmon_frequency(&cfg.plate.drude)
        .unwrap_or_else(|| (kernel.wp2 / kernel.a).sqrt());
    let t_max = cfg.t_el.max(cfg.t_p);
    let omega_max = k_max * v0.abs() + THERMAL_MARGIN * t_max;
    if omega_max == 0.0 {
        return Ok(DragResult {
            f_x: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }

    let plan = Plan {
        kernel: &kernel,
        particle: cfg.particle,
        k_max,
        w_res,
        omega_max,
    };

    // Pilot pass for the magnitude S of the integrand; it sets absolute floors
    // so that regions contributing below tol * S do not stall the refinement.
    let pilot = plan.run(PILOT_INNER, 0.0, PILOT_OUTER, 0.0, true);
    let magnitude = pilot.outer.value.abs();
    let alpha_mass = Integrator::new(1e-6, 0.0)
        .integrate_with_breakpoints(
            |w| particle_polarizability(w, &plan.particle).im,
            &plan.omega_seeds(),
        )
        .value;
    let outer_floor = ABS_FLOOR * tol * magnitude;
    let inner_floor = if alpha_mass > 0.0 {
        0.1 * outer_floor / alpha_mass
    } else {
        0.0
    };

    let main = plan.run(0.1 * tol, inner_floor, tol, outer_floor, false);
    let evaluations = pilot.evaluations + main.evaluations;
    if let Some(r) = main.inner_failure {
        return Err(Error::NonConvergence {
            value: r.value,
            error: r.error,
            tolerance: 0.1 * tol,
            evaluations,
        });
    }
    let scale = 1.0 / (PI * PI);
    if !main.outer.converged {
        return Err(Error::NonConvergence {
            value: scale * main.outer.value,
            error: scale * main.outer.error,
            tolerance: tol,
            evaluations,
        });
    }
    // alpha''-weighted inner errors relative to the weighted inner magnitudes.
    let inner_ratio = if main.weighted_abs > 0.0 {
        main.weighted_error / main.weighted_abs
    } else {
        0.0
    };
    Ok(DragResult {
        f_x: scale * main.outer.value,
        abs_error_estimate: scale * (main.outer.error + inner_ratio * main.outer.abs_value),
        evaluations,
    })
}

/// Relative tolerances of the pilot pass.
const PILOT_INNER: f64 = 1e-4;
const PILOT_OUTER: f64 = 1e-3;
/// Absolute floor of the main pass, as a fraction of `tol * S`.
const ABS_FLOOR: f64 = 1e-3;

/// Integration domain and subdivision seeds of one force evaluation.
struct Plan<'a> {
    kernel: &'a Kernel,
    particle: ParticleParams,
    k_max: f64,
    w_res: f64,
    omega_max: f64,
}

struct NestedOutcome {
    outer: crate::quad::Integral,
    inner_failure: Option<crate::quad::Integral>,
    weighted_error: f64,
    weighted_abs: f64,
    evaluations: usize,
}

impl Plan<'_> {
    fn omega_seeds(&self) -> Vec<f64> {
        let p = self.particle;
        seeds(
            0.0,
            self.omega_max,
            [p.omega0 - p.eta, p.omega0, p.omega0 + p.eta],
        )
    }

    fn kx_seeds(&self, omega: f64, lo: f64, hi: f64) -> Vec<f64> {
        let v0 = self.kernel.v0;
        let mut candidates = vec![0.0];
        if v0 != 0.0 {
            candidates.push(omega / v0);
            let width = self.kernel.gamma / v0.abs();
            for line in [omega - self.w_res, omega + self.w_res] {
                let center = line / v0;
                candidates.push(center);
                for n in RESONANCE_WIDTHS {
                    candidates.push(center - n * width);
                    candidates.push(center + n * width);
                }
            }
        }
        seeds(lo, hi, candidates)
    }

    /// Nested `w`/`k_x` quadrature; with `magnitude` the integrand is replaced by its modulus.
    fn run(
        &self,
        inner_rel: f64,
        inner_abs: f64,
        outer_rel: f64,
        outer_abs: f64,
        magnitude: bool,
    ) -> NestedOutcome {
        let inner_quad = Integrator::new(inner_rel, inner_abs);
        let mut evaluations = 0usize;
        let mut inner_failure = None;
        let mut weighted_error = 0.0;
        let mut weighted_abs = 0.0;
        let outer = Integrator::new(outer_rel, outer_abs).integrate_with_breakpoints(
            |omega| {
                let alpha_im = particle_polarizability(omega, &self.particle).im;
                let Some((lo, hi)) = kx_support(self.kernel, omega, self.k_max) else {
                    return 0.0;
                };
                let pts = self.kx_seeds(omega, lo, hi);
                let r = inner_quad.integrate_with_breakpoints(
                    |kx| {
                        let f = self.kernel.kx_integrand(omega, kx);
                        if magnitude {
                            f.abs()
                        } else {
                            f
                        }
                    },
                    &pts,
                );
                evaluations += r.evaluations;
                if !r.converged && inner_failure.is_none() {
                    inner_failure = Some(r);
                }
                weighted_error += alpha_im.abs() * r.error;
                weighted_abs += alpha_im.abs() * r.abs_value;
                alpha_im * r.value
            },
            &self.omega_seeds(),
        );
        evaluations += outer.evaluations;
        NestedOutcome {
            outer,
            inner_failure,
            weighted_error,
            weighted_abs,
            evaluations,
        }
    }
}

/// Fit `F_x ~ v0^p` separately over `kappa <= 0.1` and `kappa >= 10` at zero temperature.
pub fn drag_asymptotics(
    template: &DragConfig,
    v0_values: &[f64],
    tol: f64,
) -> Result<DragAsymptotics> {
    template.validate()?;
    if template.t_el != 0.0 || template.t_p != 0.0 {
        return Err(Error::InvalidParameter {
            name: "temperature",
            value: template.t_el.max(template.t_p),
            reason: "the asymptotic exponents refer to T_el = T_p = 0",
        });
    }
    if v0_values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidSequence {
            name: "v0_values",
            reason: "drift speeds must be finite and > 0",
        });
    }
    let forces = v0_values
        .par_iter()
        .map(|&v0| Ok((v0, drag_force(&template.with_v0(v0), tol)?)))
        .collect::<Result<Vec<_>>>()?;

    let k = |v0: f64| kappa(v0, template.particle.omega0, template.z0);
    let regime = |name: &'static str, keep: &dyn Fn(f64) -> bool| -> Result<LinearFit> {
        let (x, y): (Vec<f64>, Vec<f64>) = forces
            .iter()
            .filter(|(v0, _)| keep(k(*v0)))
            .map(|(v0, r)| (*v0, r.f_x))
            .unzip();
        if x.len() < 2 {
            return Err(Error::InvalidSequence {
                name: "v0_values",
                reason: "each regime needs at least two speeds",
            });
        }
        let fit = LinearFit::log_log(&x, &y)?;
        if fit.r_squared < MIN_R_SQUARED {
            return Err(Error::FitQuality {
                regime: name,
                r_squared: fit.r_squared,
            });
        }
        Ok(fit)
    };
    let small = regime("kappa <= 0.1", &|kap| kap <= 0.1)?;
    let large = regime("kappa >= 10", &|kap| kap >= 10.0)?;
    Ok(DragAsymptotics {
        small,
        large,
        forces,
    })
}
