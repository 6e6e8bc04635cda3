//! Energy stored in the unstable channels, the friction force, and its
//! stationary (Pendry) limit.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::grid::{GridWarning, KGrid};
use super::modes::{approximate_rate, growth_rate, GrowthModel};
use super::quanta::{QuantaChannel, QuantaState};
use super::{ShearSystem, WaveVector};
use crate::error::{require_positive, Error, Result};
use crate::quad::{Integral, Integrator};

/// Relative agreement required between the double and single Pendry integrals.
const PENDRY_AGREEMENT: f64 = 1e-6;

/// Grid sum together with its coverage diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GridEstimate {
    pub value: f64,
    pub warnings: Vec<GridWarning>,
}

/// Precomputed channels of a grid, evaluated at many times.
#[derive(Debug, Clone)]
pub struct GridDynamics {
    sys: ShearSystem,
    channels: Vec<(QuantaChannel, f64)>,
    warnings: Vec<GridWarning>,
}

impl GridDynamics {
    pub fn new(sys: &ShearSystem, grid: &KGrid) -> Result<Self> {
        sys.validate()?;
        let nodes: Vec<_> = grid.nodes().collect();
        let channels = nodes
            .par_iter()
            .map(|&(k_x, k_y, w)| Ok((QuantaChannel::new(sys, WaveVector::new(k_x, k_y)?)?, w)))
            .collect::<Result<Vec<_>>>()?;
        let warnings = if sys.v > 0.0 {
            grid.coverage(sys)
        } else {
            vec![GridWarning::NoUnstableWindow]
        };
        Ok(Self {
            sys: *sys,
            channels,
            warnings,
        })
    }

    pub fn warnings(&self) -> &[GridWarning] {
        &self.warnings
    }

    /// Largest growth rate over the grid nodes.
    pub fn max_growth_rate(&self) -> f64 {
        self.channels
            .iter()
            .map(|(c, _)| c.growth_rate())
            .fold(0.0, f64::max)
    }

    /// Weighted sums `(sum w N, sum w dN/dt)` at time `t`.
    fn sums(&self, t: f64) -> Result<(f64, f64)> {
        let states = self
            .channels
            .par_iter()
            .map(|(c, w)| c.state(t).map(|s: QuantaState| (w * s.n1, w * s.dn_dt)))
            .collect::<Result<Vec<_>>>()?;
        // Sequential reduction keeps the result independent of the thread count.
        Ok(states
            .iter()
            .fold((0.0, 0.0), |acc, s| (acc.0 + s.0, acc.1 + s.1)))
    }

    /// `E(t) = sum_k 2 omega_sp N_k(t)` with `area / (2 pi)^2` modes per unit `d^2k`.
    pub fn energy(&self, t: f64, area: f64) -> Result<f64> {
        require_positive("area", area)?;
        let (n, _) = self.sums(t)?;
        Ok(2.0 * self.sys.omega_sp * n * area / (4.0 * PI * PI))
    }

    /// Friction force per unit area, `(2 omega_sp / v) sum_k dN_k/dt / (2 pi)^2`; zero at rest.
    pub fn force_per_area(&self, t: f64) -> Result<f64> {
        if self.sys.v == 0.0 {
            crate::error::require_non_negative("t", t)?;
            return Ok(0.0);
        }
        let (_, dn) = self.sums(t)?;
        Ok(2.0 * self.sys.omega_sp / self.sys.v * dn / (4.0 * PI * PI))
    }

    /// `(E(t), F(t)/A)` in one pass.
    pub fn energy_and_force(&self, t: f64, area: f64) -> Result<(f64, f64)> {
        require_positive("area", area)?;
        let (n, dn) = self.sums(t)?;
        let w = self.sys.omega_sp;
        let energy = 2.0 * w * n * area / (4.0 * PI * PI);
        let force = if self.sys.v == 0.0 {
            0.0
        } else {
            2.0 * w / self.sys.v * dn / (4.0 * PI * PI)
        };
        Ok((energy, force))
    }
}

/// Energy in the grid channels at time `t` for a sheet of the given area.
pub fn total_energy(sys: &ShearSystem, grid: &KGrid, t: f64, area: f64) -> Result<GridEstimate> {
    let dynamics = GridDynamics::new(sys, grid)?;
    Ok(GridEstimate {
        value: dynamics.energy(t, area)?,
        warnings: dynamics.warnings,
    })
}

/// Friction force per unit area at time `t`, from the analytic `dN/dt`.
pub fn friction_force(sys: &ShearSystem, grid: &KGrid, t: f64) -> Result<GridEstimate> {
    let dynamics = GridDynamics::new(sys, grid)?;
    Ok(GridEstimate {
        value: dynamics.force_per_area(t)?,
        warnings: dynamics.warnings,
    })
}

/// Stationary force per unit area on a grid: `dN/dt` replaced by `2 omega''_k-`.
pub fn stationary_force_grid(
    sys: &ShearSystem,
    grid: &KGrid,
    model: GrowthModel,
) -> Result<GridEstimate> {
    sys.validate()?;
    if sys.v == 0.0 {
        return Ok(GridEstimate {
            value: 0.0,
            warnings: vec![GridWarning::NoUnstableWindow],
        });
    }
    let sum: f64 = grid
        .nodes()
        .map(|(k_x, k_y, w)| w * 2.0 * growth_rate(sys, WaveVector { k_x, k_y }, model))
        .sum();
    Ok(GridEstimate {
        value: 2.0 * sys.omega_sp / sys.v * sum / (4.0 * PI * PI),
        warnings: grid.coverage(sys),
    })
}

/// Stationary force from the closed form and from the double integral it derives from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendryForce {
    /// `(omega_sp^3 / (4 pi v^2)) int dk_y exp(-2 d sqrt(k_y^2 + (2 omega_sp / v)^2))`.
    pub force_per_area: f64,
    /// `(2 omega_sp / v) (2 pi)^-2 int int 2 omega''_k- dk_x dk_y`.
    pub double_integral: f64,
}

fn require_moving(sys: &ShearSystem) -> Result<()> {
    sys.validate()?;
    require_positive("v", sys.v)
}

fn converged(i: Integral, tolerance: f64) -> Result<Integral> {
    if i.converged {
        Ok(i)
    } else {
        Err(Error::NonConvergence {
            value: i.value,
            error: i.error,
            tolerance,
            evaluations: i.evaluations,
        })
    }
}

/// Closed-form `k_y` integral of the stationary force per unit area.
pub fn pendry_single_integral(sys: &ShearSystem, rel_tol: f64) -> Result<Integral> {
    require_moving(sys)?;
    let c = sys.peak_kx();
    let d = sys.d;
    let quad = Integrator::new(rel_tol, 0.0);
    // The factor exp(-2 d c) is pulled out so the integrand is O(1) at k_y = 0.
    let half = converged(
        quad.integrate_to_infinity(|ky| (-2.0 * d * (ky.hypot(c) - c)).exp(), 0.0),
        rel_tol,
    )?;
    let scale = 2.0 * sys.omega_sp.powi(3) / (4.0 * PI * sys.v * sys.v) * (-2.0 * d * c).exp();
    Ok(Integral {
        value: scale * half.value,
        error: scale * half.error,
        abs_value: scale * half.abs_value,
        evaluations: half.evaluations,
        converged: true,
    })
}

/// Stationary force as the double integral of `2 omega''_k-` over the window,
/// with the weak-coupling factor `exp(-k d)` evaluated at the window centre
/// `k_x = 2 omega_sp / v` for each `k_y`.
pub fn stationary_double_integral(sys: &ShearSystem, rel_tol: f64) -> Result<Integral> {
    require_moving(sys)?;
    let c = sys.peak_kx();
    let d = sys.d;
    let scale_kx = sys.omega_sp / sys.v;
    // Far in k_y the window is narrower than the rounding of k_x near c; an
    // absolute floor relative to the k_y = 0 value (pi/2 w^2 / v) ends the recursion there.
    let peak_inner = 0.5 * PI * sys.omega_sp * scale_kx;
    let inner_quad = Integrator::new(0.01 * rel_tol, 0.01 * rel_tol * peak_inner);
    let mut inner_failure = None;
    let mut inner_evals = 0;
    // exp(-2 d c) is factored out: the window area scales as e^2, so the inner
    // integral is evaluated with the rescaled coupling e / exp(-d c).
    let outer = Integrator::new(rel_tol, 0.0).integrate_to_infinity(
        |ky| {
            let e = (-d * (ky.hypot(c) - c)).exp();
            let half = scale_kx * e;
            // k_x = c + half sin(theta) absorbs the square-root edges of the window.
            let r = inner_quad.integrate(
                |theta| {
                    let kx = c + half * theta.sin();
                    2.0 * approximate_rate(sys, kx, e) * half * theta.cos()
                },
                -0.5 * PI,
                0.5 * PI,
            );
            inner_evals += r.evaluations;
            if !r.converged && inner_failure.is_none() {
                inner_failure = Some(r);
            }
            r.value
        },
        0.0,
    );
    if let Some(r) = inner_failure {
        converged(r, 0.01 * rel_tol)?;
    }
    let outer = converged(outer, rel_tol)?;
    let scale = 2.0 * 2.0 * sys.omega_sp / sys.v / (4.0 * PI * PI) * (-2.0 * d * c).exp();
    Ok(Integral {
        value: scale * outer.value,
        error: scale * outer.error,
        abs_value: scale * outer.abs_value,
        evaluations: outer.evaluations + inner_evals,
        converged: true,
    })
}

/// Stationary friction force per unit area, cross-checked against the double integral.
pub fn pendry_force(sys: &ShearSystem) -> Result<PendryForce> {
    let single = pendry_single_integral(sys, 1e-12)?.value;
    let double = stationary_double_integral(sys, 1e-10)?.value;
    if (single - double).abs() > PENDRY_AGREEMENT * single.abs() {
        return Err(Error::CrossCheck {
            what: "stationary friction force",
            left: single,
            right: double,
        });
    }
    Ok(PendryForce {
        force_per_area: single,
        double_integral: double,
    })
}
