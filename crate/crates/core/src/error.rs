//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the response models, spectra, friction and drag solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates an invariant of its type.
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Evaluation requested outside the domain of a model.
    #[error("{model}: {reason} (at {at})")]
    Domain {
        model: &'static str,
        reason: &'static str,
        at: f64,
    },

    /// The Doppler-shifted frequency `omega - k.v0` vanishes, a real pole of the
    /// drifting-electron response.
    #[error("Doppler pole: omega - k.v0 = 0 (omega = {omega}, k.v0 = {k_dot_v0})")]
    DopplerPole { omega: f64, k_dot_v0: f64 },

    /// `epsilon = -1` exactly, where the surface response diverges.
    #[error("surface-response pole: epsilon = -1 at omega = {omega}, k_x = {k_x}")]
    SurfacePole { omega: f64, k_x: f64 },

    /// Refining the frequency grid changed the Kramers-Kronig residual too much.
    #[error(
        "frequency grid too coarse: residual {residual} changes to {refined} under refinement"
    )]
    GridTooCoarse { residual: f64, refined: f64 },

    /// An input sequence is empty, unsorted or otherwise malformed.
    #[error("invalid sequence `{name}`: {reason}")]
    InvalidSequence {
        name: &'static str,
        reason: &'static str,
    },

    /// `N_k,1` and `N_k,2` disagree, which can only come from a numerical defect.
    #[error("surface quanta differ: N1 = {n1}, N2 = {n2} at t = {t}")]
    SymmetryViolation { n1: f64, n2: f64, t: f64 },

    /// Adaptive quadrature exhausted its budget above the requested tolerance.
    #[error("quadrature did not converge: estimate {value} +/- {error} after {evaluations} evaluations (tolerance {tolerance})")]
    NonConvergence {
        value: f64,
        error: f64,
        tolerance: f64,
        evaluations: usize,
    },

    /// Two independent evaluations of the same quantity disagree.
    #[error("cross-check failed for {what}: {left} vs {right}")]
    CrossCheck {
        what: &'static str,
        left: f64,
        right: f64,
    },

    /// A log-log or linear fit is too poor to report a meaningful slope.
    #[error("fit quality too low for {regime}: R^2 = {r_squared}")]
    FitQuality {
        regime: &'static str,
        r_squared: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and >= 0",
        })
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}
