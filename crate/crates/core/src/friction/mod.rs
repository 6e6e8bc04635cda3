//! Nonperturbative quantum friction between two sheared plasmonic sheets.
//!
//! Each pair of in-plane wave vectors `(k, -k)` couples the surface plasmons of
//! the two sheets through a real, non-Hermitian 4x4 mode matrix. Its spectrum
//! is real (stable) or contains a purely imaginary pair (parametric
//! instability); in the latter case the number of quanta and the friction force
//! grow exponentially in time. The stationary, golden-rule friction force is
//! recovered by replacing `dN/dt` by twice the growth rate.

mod evolution;
mod force;
mod grid;
mod modes;
mod quanta;

pub use evolution::{evolution_operator, EvolutionMethod, ModeEvolution, CONDITION_LIMIT};
pub use force::{
    friction_force, pendry_force, pendry_single_integral, stationary_double_integral,
    stationary_force_grid, total_energy, GridDynamics, GridEstimate, PendryForce,
};
pub use grid::{GridWarning, KGrid};
pub use modes::{
    eigenvalues_closed_form, growth_rate, instability_window, mode_matrix, unstable_kx_interval,
    GrowthModel, InstabilityWindow,
};
pub use quanta::{
    quanta_number, quanta_rate, quanta_trace, QuantaChannel, QuantaState, QuantaTrace,
};

use crate::error::{require_finite, require_non_negative, require_positive, Result};

/// Two identical sheets a distance `d` apart, sheared with speed `v` along `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearSystem {
    /// Surface-plasmon frequency `omega_p / sqrt(2)`.
    pub omega_sp: f64,
    pub d: f64,
    pub v: f64,
}

impl ShearSystem {
    pub fn new(omega_sp: f64, d: f64, v: f64) -> Result<Self> {
        let s = Self { omega_sp, d, v };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("omega_sp", self.omega_sp)?;
        require_positive("d", self.d)?;
        require_non_negative("v", self.v)
    }

    /// Wave number `2 omega_sp / v` of the fastest-growing channel; infinite at rest.
    pub fn peak_kx(&self) -> f64 {
        2.0 * self.omega_sp / self.v
    }

    /// Interplate coupling factor `exp(-k d)`.
    pub fn decay(&self, k_par: f64) -> f64 {
        (-k_par * self.d).exp()
    }

    /// Coupling `g = (omega_sp / 2) exp(-k d)`.
    pub fn coupling(&self, k: WaveVector) -> f64 {
        0.5 * self.omega_sp * self.decay(k.k_par())
    }

    /// Doppler detuning `k . v` (motion along `x`).
    pub fn detuning(&self, k: WaveVector) -> f64 {
        k.k_x * self.v
    }
}

/// In-plane wave vector `(k_x, k_y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    pub k_x: f64,
    pub k_y: f64,
}

impl WaveVector {
    pub fn new(k_x: f64, k_y: f64) -> Result<Self> {
        require_finite("k_x", k_x)?;
        require_finite("k_y", k_y)?;
        Ok(Self { k_x, k_y })
    }

    pub fn k_par(&self) -> f64 {
        self.k_x.hypot(self.k_y)
    }

    pub fn reversed(&self) -> Self {
        Self {
            k_x: -self.k_x,
            k_y: -self.k_y,
        }
    }
}
