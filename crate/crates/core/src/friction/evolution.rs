//! Bogoliubov evolution `U(t) = exp(-i t M)` of one wave-vector channel.

use num_complex::Complex64;

use super::modes::{eigenvalues_closed_form, mode_matrix};
use super::{ShearSystem, WaveVector};
use crate::error::{require_non_negative, Result};
use crate::linalg::{condition_number, expm, null_vector, CMatrix4, CVector4};

/// Eigenvector matrices with a larger two-norm condition number are treated as
/// degenerate (exceptional point) and the direct exponential is used instead.
pub const CONDITION_LIMIT: f64 = 1e5;

/// How `U(t)` is evaluated for a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionMethod {
    /// `S diag(exp(-i lambda t)) S^-1` from the closed-form spectrum.
    Diagonalization,
    /// Scaling-and-squaring exponential of `-i t M`, used near exceptional points.
    MatrixExponential,
}

/// Eigenstructure of the mode matrix for one wave vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeEvolution {
    pub matrix: CMatrix4,
    /// `(omega_k+, omega_k-, -omega_k-, -omega_k+)`.
    pub eigenvalues: [Complex64; 4],
    /// Eigenvector matrix; columns follow `eigenvalues`.
    pub s: CMatrix4,
    pub s_inv: Option<CMatrix4>,
    /// Two-norm condition number of `s` (infinite when singular).
    pub condition: f64,
    /// `Im omega_k-` when unstable, else 0.
    pub growth_rate: f64,
    /// Growth time `1 / (2 omega''_k-)`, absent for stable channels.
    pub tau: Option<f64>,
    pub method: EvolutionMethod,
}

impl ModeEvolution {
    pub fn new(sys: &ShearSystem, k: WaveVector) -> Result<Self> {
        sys.validate()?;
        let k = WaveVector::new(k.k_x, k.k_y)?;
        let matrix = mode_matrix(sys, k);
        let eigenvalues = eigenvalues_closed_form(sys, k);
        let mut s = CMatrix4::zeros();
        for (j, &lambda) in eigenvalues.iter().enumerate() {
            let shifted = matrix - CMatrix4::identity() * lambda;
            let col: CVector4 = null_vector(&shifted);
            s.set_column(j, &col);
        }
        let condition = condition_number(&s);
        let s_inv = if condition.is_finite() && condition <= CONDITION_LIMIT {
            s.try_inverse()
        } else {
            None
        };
        let method = if s_inv.is_some() {
            EvolutionMethod::Diagonalization
        } else {
            EvolutionMethod::MatrixExponential
        };
        let growth_rate = eigenvalues[1].im.max(0.0);
        let tau = (growth_rate > 0.0).then(|| 0.5 / growth_rate);
        Ok(Self {
            matrix,
            eigenvalues,
            s,
            s_inv,
            condition,
            growth_rate,
            tau,
            method,
        })
    }

    /// `U(t)` for `t >= 0`.
    pub fn evolution_operator(&self, t: f64) -> Result<CMatrix4> {
        require_non_negative("t", t)?;
        Ok(self.at(t))
    }

    pub(crate) fn at(&self, t: f64) -> CMatrix4 {
        match &self.s_inv {
            Some(s_inv) => {
                let mut scaled = self.s;
                for (j, lambda) in self.eigenvalues.iter().enumerate() {
                    let phase = (Complex64::new(0.0, -t) * lambda).exp();
                    for i in 0..4 {
                        scaled[(i, j)] *= phase;
                    }
                }
                scaled * s_inv
            }
            None => expm(&(self.matrix * Complex64::new(0.0, -t))),
        }
    }

    /// `dU/dt = -i M U(t)`.
    pub(crate) fn derivative(&self, u: &CMatrix4) -> CMatrix4 {
        self.matrix * u * Complex64::new(0.0, -1.0)
    }
}

/// `U(t)` for a single wave vector.
pub fn evolution_operator(sys: &ShearSystem, k: WaveVector, t: f64) -> Result<CMatrix4> {
    ModeEvolution::new(sys, k)?.evolution_operator(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::friction::modes::unstable_kx_interval;
    use crate::linalg::max_abs_diff;

    /// Independent oracle: `exp(-i t M) = C(M^2) - i M S(M^2)` with
    /// `C(x) = cos(t sqrt x)`, `S(x) = sin(t sqrt x) / sqrt x`, interpolated on the
    /// two distinct eigenvalues of `M^2` (the minimal polynomial of `M^2` has degree 2
    /// away from exceptional points).
    fn oracle(sys: &ShearSystem, k: WaveVector, t: f64) -> CMatrix4 {
        let m = mode_matrix(sys, k);
        let ev = eigenvalues_closed_form(sys, k);
        let x1 = ev[0] * ev[0];
        let x2 = ev[1] * ev[1];
        let cos = |x: Complex64| (x.sqrt() * t).cos();
        let sinc = |x: Complex64| {
            let r = x.sqrt();
            if r.norm() < 1e-300 {
                Complex64::new(t, 0.0)
            } else {
                (r * t).sin() / r
            }
        };
        let interp = |f: &dyn Fn(Complex64) -> Complex64| {
            let slope = (f(x1) - f(x2)) / (x1 - x2);
            let m2 = m * m;
            m2 * slope + CMatrix4::identity() * (f(x2) - slope * x2)
        };
        interp(&cos) - m * interp(&sinc) * Complex64::new(0.0, 1.0)
    }

    #[test]
    fn identity_at_zero() {
        let sys = ShearSystem::new(1.0, 0.7, 0.4).unwrap();
        let u = evolution_operator(&sys, WaveVector::new(4.9, 0.3).unwrap(), 0.0).unwrap();
        assert!(max_abs_diff(&u, &CMatrix4::identity()) < 1e-12);
        assert!(evolution_operator(&sys, WaveVector::new(4.9, 0.3).unwrap(), -1.0).is_err());
    }

    #[test]
    fn decoupled_rest_evolution() {
        let sys = ShearSystem::new(1.2, 1.0, 0.0).unwrap();
        let k = WaveVector::new(900.0, 0.0).unwrap();
        let ev = ModeEvolution::new(&sys, k).unwrap();
        let t = 2.3;
        let u = ev.evolution_operator(t).unwrap();
        let p = Complex64::new(0.0, -1.2 * t).exp();
        let want = CMatrix4::from_diagonal(&CVector4::new(p, p, p.conj(), p.conj()));
        assert!(max_abs_diff(&u, &want) < 1e-12);
    }

    #[test]
    fn matches_interpolation_oracle() {
        let cases = [
            (
                ShearSystem::new(1.0, 1.0, 0.0).unwrap(),
                WaveVector::new(0.5, 0.2).unwrap(),
            ),
            (
                ShearSystem::new(1.0, 0.6, 1.0).unwrap(),
                WaveVector::new(2.0, 0.0).unwrap(),
            ),
            (
                ShearSystem::new(0.8, 1.3, 0.5).unwrap(),
                WaveVector::new(1.0, -0.7).unwrap(),
            ),
        ];
        for (sys, k) in cases {
            for t in [0.3, 4.0, 17.0] {
                let u = evolution_operator(&sys, k, t).unwrap();
                let o = oracle(&sys, k, t);
                let scale = 1.0 + o.iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(max_abs_diff(&u, &o) < 1e-11 * scale, "{sys:?} {k:?} t={t}");
            }
        }
    }

    #[test]
    fn group_property() {
        let sys = ShearSystem::new(1.1, 0.9, 0.3).unwrap();
        let ev = ModeEvolution::new(&sys, WaveVector::new(2.0, 1.0).unwrap()).unwrap();
        let lhs = ev.at(2.0);
        let rhs = ev.at(0.7) * ev.at(1.3);
        assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
    }

    #[test]
    fn exceptional_point_uses_exponential() {
        let sys = ShearSystem::new(1.0, 0.8, 1.0).unwrap();
        let (lo, _) = unstable_kx_interval(&sys, 0.0).unwrap();
        let ev = ModeEvolution::new(&sys, WaveVector::new(lo, 0.0).unwrap()).unwrap();
        assert_eq!(ev.method, EvolutionMethod::MatrixExponential);
        let u = ev.at(3.0);
        for r in 0..2 {
            let inv = u[(r, 0)].norm_sqr() + u[(r, 1)].norm_sqr()
                - u[(r, 2)].norm_sqr()
                - u[(r, 3)].norm_sqr();
            assert!((inv - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn stable_and_unstable_metadata() {
        let sys = ShearSystem::new(1.0, 0.6, 1.0).unwrap();
        let unstable = ModeEvolution::new(&sys, WaveVector::new(2.0, 0.0).unwrap()).unwrap();
        assert!(unstable.growth_rate > 0.0);
        assert_eq!(unstable.tau, Some(0.5 / unstable.growth_rate));
        let stable = ModeEvolution::new(&sys, WaveVector::new(0.5, 0.0).unwrap()).unwrap();
        assert_eq!(stable.growth_rate, 0.0);
        assert_eq!(stable.tau, None);
        assert_eq!(stable.method, EvolutionMethod::Diagonalization);
    }
}
