//! Subcommand parameter sets and the scenario runners behind them.

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use fluctem_core::drag::{drag_force, DragConfig};
use fluctem_core::friction::{
    pendry_single_integral, quanta_trace, stationary_double_integral, GridDynamics, KGrid,
    ShearSystem, WaveVector,
};
use fluctem_core::materials::{drude_epsilon, kk_residual, plasma_epsilon};
use fluctem_core::spectra::{density_profile, lossless_limit_trace};
use fluctem_core::{
    Complex64, DriftParams, DrudeParams, LatticeResponse, ParticleParams, PlasmaParams,
    ThermalState,
};

use crate::output::{num, Table};
use crate::CliError;

// ---------------------------------------------------------------- spectra

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectraMode {
    /// Density at eps = 1 + i delta for a decreasing list of deltas.
    Lossless,
    /// Density against separation at fixed eps.
    Profile,
}

#[derive(Debug, Default, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SpectraFlags {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<SpectraMode>,
    /// Angular frequency.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Separation of the field points (lossless mode).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    /// Loss parameters, comma separated (lossless mode).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    /// Separations, comma separated (profile mode).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_re: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_im: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectraParams {
    pub mode: SpectraMode,
    pub omega: f64,
    pub r: f64,
    pub deltas: Vec<f64>,
    pub radii: Vec<f64>,
    pub eps_re: f64,
    pub eps_im: f64,
    pub temperature: f64,
    /// Unused; accepted so the common `--tol` flag is harmless.
    pub tol: f64,
}

impl Default for SpectraParams {
    fn default() -> Self {
        Self {
            mode: SpectraMode::Lossless,
            omega: 1.0,
            r: 1.0,
            deltas: vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
            radii: (1..=20).map(|i| 0.25 * i as f64).collect(),
            eps_re: 1.0,
            eps_im: 0.0,
            temperature: 0.0,
            tol: 0.0,
        }
    }
}

pub fn run_spectra(p: &SpectraParams) -> Result<Table, CliError> {
    match p.mode {
        SpectraMode::Lossless => {
            let mut deltas = p.deltas.clone();
            deltas.sort_by(|a, b| b.total_cmp(a));
            let trace = lossless_limit_trace(p.omega, p.r, &deltas)?;
            let mut t = Table::new(&["delta", "density", "lossless_limit"]);
            for s in trace.samples {
                t.push(vec![num(s.abscissa), num(s.value), num(trace.limit)]);
            }
            Ok(t)
        }
        SpectraMode::Profile => {
            let mut radii = p.radii.clone();
            radii.sort_by(f64::total_cmp);
            let samples = density_profile(
                Complex64::new(p.eps_re, p.eps_im),
                p.omega,
                ThermalState::new(p.temperature)?,
                &radii,
            )?;
            let mut t = Table::new(&["r", "density"]);
            for s in samples {
                t.push(vec![num(s.abscissa), num(s.value)]);
            }
            Ok(t)
        }
    }
}

// ------------------------------------------------------ friction-dynamics

#[derive(Debug, Default, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct FrictionFlags {
    /// Surface-plasmon frequency of the sheets.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_sp: Option<f64>,
    /// Relative sheet velocity.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    /// Sheet separations, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_values: Option<Vec<f64>>,
    /// Last time sample.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    /// Number of equally spaced time samples in [0, t_max].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_times: Option<usize>,
    /// k_x nodes of the force grid.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_kx: Option<usize>,
    /// k_y nodes of the force grid.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_ky: Option<usize>,
    /// Sheet area used for the energy column.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrictionParams {
    pub omega_sp: f64,
    pub v: f64,
    pub d_values: Vec<f64>,
    pub t_max: f64,
    pub n_times: usize,
    pub n_kx: usize,
    pub n_ky: usize,
    pub area: f64,
    /// Unused; accepted so the common `--tol` flag is harmless.
    pub tol: f64,
}

impl Default for FrictionParams {
    fn default() -> Self {
        Self {
            omega_sp: 1.0,
            v: 1.0,
            d_values: vec![0.6, 0.8, 1.0, 1.2],
            t_max: 100.0,
            n_times: 101,
            n_kx: 32,
            n_ky: 32,
            area: 1.0,
            tol: 0.0,
        }
    }
}

pub fn run_friction(p: &FrictionParams) -> Result<Table, CliError> {
    if p.n_times < 1 {
        return Err(CliError::Config(
            "invalid parameter `n_times` = 0: needs at least one sample".into(),
        ));
    }
    if !(p.t_max >= 0.0 && p.t_max.is_finite()) {
        return Err(CliError::Config(format!(
            "invalid parameter `t_max` = {}: must be finite and >= 0",
            p.t_max
        )));
    }
    let times: Vec<f64> = if p.n_times == 1 {
        vec![0.0]
    } else {
        (0..p.n_times)
            .map(|i| p.t_max * i as f64 / (p.n_times - 1) as f64)
            .collect()
    };
    let mut d_values = p.d_values.clone();
    d_values.sort_by(f64::total_cmp);
    let systems = d_values
        .iter()
        .map(|&d| ShearSystem::new(p.omega_sp, d, p.v))
        .collect::<Result<Vec<_>, _>>()?;

    let mut t = Table::new(&["d", "t", "n_k", "dn_dt", "energy", "force_per_area"]);
    for sys in &systems {
        let k = WaveVector::new(sys.peak_kx(), 0.0)?;
        let trace = quanta_trace(sys, k, &times)?;
        let grid = KGrid::around_window(sys, p.n_kx, p.n_ky)?;
        let dynamics = GridDynamics::new(sys, &grid)?;
        t.notes.extend(
            dynamics
                .warnings()
                .iter()
                .map(|w| format!("d = {}: {w}", sys.d)),
        );
        let grid_rows = times
            .par_iter()
            .map(|&time| dynamics.energy_and_force(time, p.area))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, (energy, force)) in grid_rows.into_iter().enumerate() {
            t.push(vec![
                num(sys.d),
                num(trace.times[i]),
                num(trace.n[i]),
                num(trace.dndt[i]),
                num(energy),
                num(force),
            ]);
        }
    }
    Ok(t)
}

// ----------------------------------------------------------- pendry-force

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PendrySweep {
    V,
    D,
}

#[derive(Debug, Default, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct PendryFlags {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_sp: Option<f64>,
    /// Separation (held fixed in a velocity sweep).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    /// Velocity (held fixed in a separation sweep).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<f64>,
    /// Swept quantity.
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<PendrySweep>,
    /// Swept values, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PendryParams {
    pub omega_sp: f64,
    pub d: f64,
    pub v: f64,
    pub sweep: PendrySweep,
    pub values: Vec<f64>,
    /// Relative tolerance of both quadratures.
    pub tol: f64,
}

impl Default for PendryParams {
    fn default() -> Self {
        Self {
            omega_sp: 1.0,
            d: 1.0,
            v: 0.5,
            sweep: PendrySweep::V,
            values: (1..=20).map(|i| 0.1 * i as f64).collect(),
            tol: 1e-10,
        }
    }
}

pub fn run_pendry(p: &PendryParams) -> Result<Table, CliError> {
    let mut values = p.values.clone();
    values.sort_by(f64::total_cmp);
    let systems = values
        .iter()
        .map(|&x| match p.sweep {
            PendrySweep::V => ShearSystem::new(p.omega_sp, p.d, x),
            PendrySweep::D => ShearSystem::new(p.omega_sp, x, p.v),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rows = systems
        .par_iter()
        .map(|sys| {
            let single = pendry_single_integral(sys, p.tol)?;
            let double = stationary_double_integral(sys, p.tol)?;
            Ok((*sys, single, double))
        })
        .collect::<Result<Vec<_>, fluctem_core::Error>>()?;
    let mut t = Table::new(&[
        "v",
        "d",
        "force_per_area",
        "error_estimate",
        "double_integral",
        "relative_difference",
    ]);
    for (sys, single, double) in rows {
        t.push(vec![
            num(sys.v),
            num(sys.d),
            num(single.value),
            num(single.error),
            num(double.value),
            num(((double.value - single.value) / single.value).abs()),
        ]);
    }
    Ok(t)
}

// ------------------------------------------------------------- drag-force

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DragSweep {
    /// Single configuration.
    None,
    V0,
    Z0,
}

#[derive(Debug, Default, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct DragFlags {
    /// Plasma frequency of the plate electrons.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_p: Option<f64>,
    /// Electron damping rate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Real, frequency-independent lattice permittivity.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_lattice: Option<f64>,
    /// Electron drift speed along x.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
    /// Static polarizability of the particle.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha0: Option<f64>,
    /// Particle resonance frequency.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    /// Particle damping rate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Particle-plate separation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z0: Option<f64>,
    /// Electron temperature.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_el: Option<f64>,
    /// Particle temperature.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_p: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<DragSweep>,
    /// Swept values, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DragParams {
    pub omega_p: f64,
    pub gamma: f64,
    pub eps_lattice: f64,
    pub v0: f64,
    pub alpha0: f64,
    pub omega0: f64,
    pub eta: f64,
    pub z0: f64,
    pub t_el: f64,
    pub t_p: f64,
    pub sweep: DragSweep,
    pub values: Vec<f64>,
    /// Relative tolerance of the force.
    pub tol: f64,
}

impl Default for DragParams {
    fn default() -> Self {
        Self {
            omega_p: 3.0,
            gamma: 0.3,
            eps_lattice: 1.0,
            v0: 1.0,
            alpha0: 1.0,
            omega0: 1.0,
            eta: 0.5,
            z0: 1.0,
            t_el: 0.0,
            t_p: 0.0,
            sweep: DragSweep::None,
            values: Vec::new(),
            tol: 1e-6,
        }
    }
}

impl DragParams {
    fn config(&self) -> Result<DragConfig, fluctem_core::Error> {
        let drude = DrudeParams::with_lattice(
            self.omega_p,
            self.gamma,
            LatticeResponse::real(self.eps_lattice),
        )?;
        DragConfig::new(
            DriftParams::along_x(drude, self.v0)?,
            ParticleParams::new(self.alpha0, self.omega0, self.eta)?,
            self.z0,
            self.t_el,
            self.t_p,
        )
    }
}

/// One row per configuration; a numerical failure is reported in the `status`
/// column and turns the exit code to non-convergence after the table is written.
pub fn run_drag(p: &DragParams) -> Result<(Table, usize), CliError> {
    let base = p.config()?;
    let mut values = p.values.clone();
    values.sort_by(f64::total_cmp);
    let configs = match p.sweep {
        DragSweep::None => vec![base],
        DragSweep::V0 => values.iter().map(|&v| base.with_v0(v)).collect(),
        DragSweep::Z0 => values.iter().map(|&z| base.with_z0(z)).collect(),
    };
    for c in &configs {
        c.validate()?;
    }
    let results: Vec<_> = configs.par_iter().map(|c| drag_force(c, p.tol)).collect();
    let mut t = Table::new(&[
        "v0",
        "z0",
        "f_x",
        "abs_error_estimate",
        "evaluations",
        "status",
    ]);
    let mut failures = 0;
    for (c, r) in configs.iter().zip(results) {
        match r {
            Ok(r) => t.push(vec![
                num(c.v0()),
                num(c.z0),
                num(r.f_x),
                num(r.abs_error_estimate),
                r.evaluations.to_string(),
                "ok".into(),
            ]),
            Err(e) => {
                failures += 1;
                t.push(vec![
                    num(c.v0()),
                    num(c.z0),
                    "NaN".into(),
                    "NaN".into(),
                    "0".into(),
                    e.to_string(),
                ]);
            }
        }
    }
    Ok((t, failures))
}

// --------------------------------------------------------------- kk-check

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KkModel {
    Drude,
    Plasma,
}

#[derive(Debug, Default, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct KkFlags {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<KkModel>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_p: Option<f64>,
    /// Damping rate (Drude model).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Upper end of the uniform frequency grid.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_max: Option<f64>,
    /// Number of grid points in (0, omega_max].
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_points: Option<usize>,
    /// Test frequencies, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_test: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KkParams {
    pub model: KkModel,
    pub omega_p: f64,
    pub gamma: f64,
    pub omega_max: f64,
    pub n_points: usize,
    pub omega_test: Vec<f64>,
    /// Unused; accepted so the common `--tol` flag is harmless.
    pub tol: f64,
}

impl Default for KkParams {
    fn default() -> Self {
        Self {
            model: KkModel::Drude,
            omega_p: 1.0,
            gamma: 0.2,
            omega_max: 100.0,
            n_points: 20_000,
            omega_test: vec![0.5],
            tol: 0.0,
        }
    }
}

pub fn run_kk(p: &KkParams) -> Result<Table, CliError> {
    if !(p.omega_max > 0.0 && p.omega_max.is_finite()) {
        return Err(CliError::Config(format!(
            "invalid parameter `omega_max` = {}: must be finite and > 0",
            p.omega_max
        )));
    }
    let grid: Vec<f64> = (1..=p.n_points)
        .map(|i| p.omega_max * i as f64 / p.n_points as f64)
        .collect();
    let mut tests = p.omega_test.clone();
    tests.sort_by(f64::total_cmp);
    let mut t = Table::new(&["omega_test", "residual"]);
    for &w in &tests {
        let residual = match p.model {
            KkModel::Drude => {
                let params = DrudeParams::new(p.omega_p, p.gamma)?;
                kk_residual(
                    |x| drude_epsilon(x, &params).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
                    &grid,
                    w,
                )?
            }
            KkModel::Plasma => {
                let params = PlasmaParams::new(p.omega_p)?;
                kk_residual(
                    |x| Complex64::new(plasma_epsilon(x, &params).unwrap_or(f64::NAN), 0.0),
                    &grid,
                    w,
                )?
            }
        };
        t.push(vec![num(w), num(residual)]);
    }
    Ok(t)
}
