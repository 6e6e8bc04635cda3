//! Number of surface quanta created from vacuum in a `(k, -k)` channel.

use super::evolution::ModeEvolution;
use super::{ShearSystem, WaveVector};
use crate::error::{require_non_negative, Error, Result};
use crate::linalg::CMatrix4;

/// Relative tolerance of the `N_1 = N_2` consistency check.
const SYMMETRY_TOL: f64 = 1e-8;

/// Quanta in each sheet and the rate of change of those in sheet 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantaState {
    pub t: f64,
    pub n1: f64,
    pub n2: f64,
    pub dn_dt: f64,
}

/// `N_k(t)` and `dN_k/dt` sampled at ascending times.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantaTrace {
    pub times: Vec<f64>,
    pub n: Vec<f64>,
    pub dndt: Vec<f64>,
}

/// Evolutions of the `k` and `-k` halves of a channel; reusable across times.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantaChannel {
    pub forward: ModeEvolution,
    pub backward: ModeEvolution,
}

impl QuantaChannel {
    pub fn new(sys: &ShearSystem, k: WaveVector) -> Result<Self> {
        Ok(Self {
            forward: ModeEvolution::new(sys, k)?,
            backward: ModeEvolution::new(sys, k.reversed())?,
        })
    }

    /// Growth rate of the channel (identical for `k` and `-k`).
    pub fn growth_rate(&self) -> f64 {
        self.forward.growth_rate
    }

    pub fn state(&self, t: f64) -> Result<QuantaState> {
        require_non_negative("t", t)?;
        let mut n1 = 0.0;
        let mut n2 = 0.0;
        let mut dn_dt = 0.0;
        for half in [&self.forward, &self.backward] {
            let u = half.at(t);
            let du = half.derivative(&u);
            n1 += row_weight(&u, 0);
            n2 += row_weight(&u, 1);
            dn_dt += row_rate(&u, &du, 0);
        }
        if (n1 - n2).abs() > SYMMETRY_TOL * (1.0 + n1.abs()) {
            return Err(Error::SymmetryViolation { n1, n2, t });
        }
        Ok(QuantaState { t, n1, n2, dn_dt })
    }
}

/// `|U_r3|^2 + |U_r4|^2`.
fn row_weight(u: &CMatrix4, r: usize) -> f64 {
    u[(r, 2)].norm_sqr() + u[(r, 3)].norm_sqr()
}

/// `d/dt (|U_r3|^2 + |U_r4|^2)`.
fn row_rate(u: &CMatrix4, du: &CMatrix4, r: usize) -> f64 {
    2.0 * (u[(r, 2)].conj() * du[(r, 2)] + u[(r, 3)].conj() * du[(r, 3)]).re
}

/// `N_k,1(t)`, checked against `N_k,2(t)`.
pub fn quanta_number(sys: &ShearSystem, k: WaveVector, t: f64) -> Result<f64> {
    Ok(QuantaChannel::new(sys, k)?.state(t)?.n1)
}

/// Analytic `dN_k/dt` from `dU/dt = -i M U`.
pub fn quanta_rate(sys: &ShearSystem, k: WaveVector, t: f64) -> Result<f64> {
    Ok(QuantaChannel::new(sys, k)?.state(t)?.dn_dt)
}

/// `N_k(t)` and `dN_k/dt` at each of `times` (ascending, `>= 0`).
pub fn quanta_trace(sys: &ShearSystem, k: WaveVector, times: &[f64]) -> Result<QuantaTrace> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::InvalidSequence {
            name: "times",
            reason: "times must be finite and >= 0",
        });
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidSequence {
            name: "times",
            reason: "times must be ascending",
        });
    }
    let channel = QuantaChannel::new(sys, k)?;
    let mut trace = QuantaTrace {
        times: times.to_vec(),
        n: Vec::with_capacity(times.len()),
        dndt: Vec::with_capacity(times.len()),
    };
    for &t in times {
        let s = channel.state(t)?;
        // Round-off can leave a tiny negative value at t = 0.
        trace.n.push(s.n1.max(0.0));
        trace.dndt.push(s.dn_dt);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::LinearFit;

    fn peak_system(e: f64) -> (ShearSystem, WaveVector) {
        // omega_sp = v = 1, peak at k_x = 2, so exp(-2 d) = e.
        let sys = ShearSystem::new(1.0, -e.ln() / 2.0, 1.0).unwrap();
        (sys, WaveVector::new(2.0, 0.0).unwrap())
    }

    #[test]
    fn vacuum_at_zero() {
        let (sys, k) = peak_system(0.1);
        assert!(quanta_number(&sys, k, 0.0).unwrap().abs() < 1e-14);
    }

    #[test]
    fn sheets_share_quanta() {
        let sys = ShearSystem::new(0.9, 0.5, 0.7).unwrap();
        let ch = QuantaChannel::new(&sys, WaveVector::new(2.4, 0.6).unwrap()).unwrap();
        for t in [0.5, 3.0, 20.0, 60.0] {
            let s = ch.state(t).unwrap();
            assert!((s.n1 - s.n2).abs() <= 1e-10 * (1.0 + s.n1));
        }
    }

    #[test]
    fn late_time_slope_is_twice_growth_rate() {
        for e in [0.3, 0.1, 0.03] {
            let (sys, k) = peak_system(e);
            let rate = 0.5 * e;
            let times: Vec<f64> = (0..=20)
                .map(|i| (5.0 + 5.0 * i as f64 / 20.0) / rate)
                .collect();
            let tr = quanta_trace(&sys, k, &times).unwrap();
            let fit = LinearFit::semi_log(&tr.times, &tr.n).unwrap();
            assert!(
                (fit.slope / (2.0 * rate) - 1.0).abs() < 0.01,
                "e = {e}: {}",
                fit.slope
            );
        }
    }

    #[test]
    fn analytic_rate_matches_finite_difference() {
        let (sys, k) = peak_system(0.1);
        let ch = QuantaChannel::new(&sys, k).unwrap();
        let t = 40.0;
        let h = 1e-4;
        let fd = (ch.state(t + h).unwrap().n1 - ch.state(t - h).unwrap().n1) / (2.0 * h);
        let an = ch.state(t).unwrap().dn_dt;
        assert!((fd / an - 1.0).abs() < 1e-6);
    }

    #[test]
    fn stable_channel_stays_bounded() {
        // Diagonalizable with real spectrum: |U_ij| <= cond(S), so N <= 4 cond(S)^2.
        let sys = ShearSystem::new(1.0, 0.5, 1.0).unwrap();
        let k = WaveVector::new(1.0, 0.3).unwrap();
        let ch = QuantaChannel::new(&sys, k).unwrap();
        assert_eq!(ch.growth_rate(), 0.0);
        let bound = 4.0 * ch.forward.condition.max(ch.backward.condition).powi(2);
        let times: Vec<f64> = (0..=500).map(|i| 50.0 * i as f64 / 500.0).collect();
        let tr = quanta_trace(&sys, k, &times).unwrap();
        let max = tr.n.iter().cloned().fold(0.0, f64::max);
        assert!(max > 0.0 && max <= bound, "{max} vs {bound}");
        // Same horizon in an unstable channel exceeds any such bound.
        let (sys, k) = peak_system(0.3);
        assert!(quanta_number(&sys, k, 50.0).unwrap() > 1e5);
    }

    #[test]
    fn rejects_bad_times() {
        let (sys, k) = peak_system(0.1);
        assert!(quanta_trace(&sys, k, &[1.0, 0.5]).is_err());
        assert!(quanta_trace(&sys, k, &[-1.0]).is_err());
    }
}
