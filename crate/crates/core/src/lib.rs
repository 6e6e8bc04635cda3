//! Fluctuational electrodynamics in and out of equilibrium.
//!
//! * [`materials`] — plasma, Drude and drifting-electron dielectric responses,
//!   particle polarizability, and a Kramers-Kronig consistency check.
//! * [`spectra`] — fluctuation-dissipation prefactors and the field spectral
//!   density of a homogeneous medium.
//! * [`friction`] — nonperturbative quantum friction between sheared plasmonic
//!   sheets and its stationary limit.
//! * [`drag`] — drag force on a polarizable particle above a current-carrying plate.
//!
//! Units are `hbar = k_B = c = 1` throughout.

// `!(x > 0.0)` is the NaN-rejecting form used throughout parameter validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod drag;
pub mod error;
pub mod fit;
pub mod friction;
pub mod linalg;
pub mod materials;
pub mod quad;
pub mod spectra;

pub use drag::{DragConfig, DragResult};
pub use error::{Error, Result};
pub use friction::{KGrid, ModeEvolution, QuantaTrace, ShearSystem, WaveVector};
pub use materials::{DriftParams, DrudeParams, LatticeResponse, ParticleParams, PlasmaParams};
pub use num_complex::Complex64;
pub use quad::{Integral, Integrator};
pub use spectra::{MediumPoint, ThermalState};
