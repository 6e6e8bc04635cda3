//! Mode matrix, closed-form spectrum and the unstable range of wave vectors.

use num_complex::Complex64;

use super::{ShearSystem, WaveVector};
use crate::error::{Error, Result};
use crate::linalg::CMatrix4;

/// Which expression to use for the growth rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrowthModel {
    /// Weak-coupling expression, a semicircle in `k_x` centred at `2 omega_sp / v`.
    #[default]
    Approximate,
    /// Imaginary part of the exact eigenvalue `omega_k-`.
    Exact,
}

/// Mode matrix acting on `(b_k1, b_k2, b+_-k1, b+_-k2)` in the frame co-rotating
/// with the Doppler detuning.
pub fn mode_matrix(sys: &ShearSystem, k: WaveVector) -> CMatrix4 {
    let w = sys.omega_sp;
    let half_kv = 0.5 * sys.detuning(k);
    let g = sys.coupling(k);
    #[rustfmt::skip]
    let m = nalgebra::Matrix4::new(
        w - half_kv,  g,              0.0,            g,
        g,            w + half_kv,    g,              0.0,
        0.0,          -g,             -(w + half_kv), -g,
        -g,           0.0,            -g,             -(w - half_kv),
    );
    m.map(|x| Complex64::new(x, 0.0))
}

/// Squared eigenfrequencies `(omega_k+^2, omega_k-^2)`.
///
/// `omega_k-^2` is formed from the factorisation
/// `omega_k+^2 omega_k-^2 = (w^2 - (kv/2)^2)^2 - w^4 exp(-2kd)` so that it keeps
/// full relative accuracy near the edges of the unstable range.
pub(crate) fn squared_frequencies(sys: &ShearSystem, k: WaveVector) -> (f64, f64) {
    let w2 = sys.omega_sp * sys.omega_sp;
    let kv = sys.detuning(k);
    let e = sys.decay(k.k_par());
    let base = w2 + 0.25 * kv * kv;
    let split = w2 * (e * e + (kv / sys.omega_sp).powi(2)).sqrt();
    let plus = base + split;
    let detuned = w2 - 0.25 * kv * kv;
    let minus = (detuned - w2 * e) * (detuned + w2 * e) / plus;
    (plus, minus)
}

/// Closed-form eigenvalues ordered `(omega_k+, omega_k-, -omega_k-, -omega_k+)`.
/// A negative radicand gives `omega_k- = +i |.|^(1/2)`.
pub fn eigenvalues_closed_form(sys: &ShearSystem, k: WaveVector) -> [Complex64; 4] {
    let (plus, minus) = squared_frequencies(sys, k);
    let wp = Complex64::new(plus.sqrt(), 0.0);
    let wm = if minus >= 0.0 {
        Complex64::new(minus.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-minus).sqrt())
    };
    [wp, wm, -wm, -wp]
}

/// Unstable range of `|k . v| / omega_sp` for a given `|k|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstabilityWindow {
    /// Coupling factor `exp(-k d)` at this `|k|`.
    pub decay: f64,
    /// Weak-coupling bounds `(2 - e, 2 + e)`.
    pub approximate: (f64, f64),
    /// Exact bounds `(2 sqrt(1 - e), 2 sqrt(1 + e))` where the radicand of
    /// `omega_k-` changes sign.
    pub exact: (f64, f64),
    /// `|k . v| / omega_sp` of the queried wave vector.
    pub ratio: f64,
}

impl InstabilityWindow {
    pub fn contains_approximate(&self) -> bool {
        self.approximate.0 < self.ratio && self.ratio < self.approximate.1
    }

    pub fn contains_exact(&self) -> bool {
        self.exact.0 < self.ratio && self.ratio < self.exact.1
    }
}

/// Unstable window for wave vectors of length `k_par` along `direction`
/// (normalised internally). `None` at rest or when `direction` is orthogonal
/// to the shear, since then `k . v = 0` can never reach the window.
pub fn instability_window(
    sys: &ShearSystem,
    k_par: f64,
    direction: [f64; 2],
) -> Result<Option<InstabilityWindow>> {
    sys.validate()?;
    crate::error::require_non_negative("k_par", k_par)?;
    let norm = direction[0].hypot(direction[1]);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidParameter {
            name: "direction",
            value: norm,
            reason: "direction must be a nonzero finite 2-vector",
        });
    }
    let cos = direction[0] / norm;
    if sys.v == 0.0 || cos == 0.0 {
        return Ok(None);
    }
    let e = sys.decay(k_par);
    Ok(Some(InstabilityWindow {
        decay: e,
        approximate: (2.0 - e, 2.0 + e),
        exact: (2.0 * (1.0 - e).sqrt(), 2.0 * (1.0 + e).sqrt()),
        ratio: (k_par * cos * sys.v).abs() / sys.omega_sp,
    }))
}

/// Growth rate `omega''_k-` (zero outside the unstable range).
pub fn growth_rate(sys: &ShearSystem, k: WaveVector, model: GrowthModel) -> f64 {
    match model {
        GrowthModel::Approximate => {
            if sys.v == 0.0 {
                return 0.0;
            }
            let e = sys.decay(k.k_par());
            approximate_rate(sys, k.k_x, e)
        }
        GrowthModel::Exact => {
            let (_, minus) = squared_frequencies(sys, k);
            if minus < 0.0 {
                (-minus).sqrt()
            } else {
                0.0
            }
        }
    }
}

/// Weak-coupling growth rate with the coupling factor `e` supplied by the caller.
pub(crate) fn approximate_rate(sys: &ShearSystem, k_x: f64, e: f64) -> f64 {
    if !(e > 0.0) {
        return 0.0;
    }
    let scale = sys.omega_sp / sys.v;
    let s = (k_x.abs() - 2.0 * scale) / (scale * e);
    if s.abs() >= 1.0 {
        0.0
    } else {
        0.5 * sys.omega_sp * e * (1.0 - s * s).sqrt()
    }
}

/// Exact unstable interval of `k_x > 0` at fixed `k_y`: the interval around
/// `2 omega_sp / v` where `omega_k-^2 < 0`. Its endpoints are exceptional points.
pub fn unstable_kx_interval(sys: &ShearSystem, k_y: f64) -> Option<(f64, f64)> {
    if sys.v == 0.0 {
        return None;
    }
    let center = sys.peak_kx();
    // Sign of omega_k-^2 up to a positive factor.
    let phi = |k_x: f64| {
        let w2 = sys.omega_sp * sys.omega_sp;
        let kv = k_x * sys.v;
        (w2 - 0.25 * kv * kv).abs() - w2 * sys.decay(k_x.hypot(k_y))
    };
    if phi(center) >= 0.0 {
        return None;
    }
    let upper = 3.0 * sys.omega_sp / sys.v;
    if phi(upper) <= 0.0 || phi(0.0) < 0.0 {
        return None;
    }
    let bisect = |mut stable: f64, mut unstable: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (stable + unstable);
            if mid == stable || mid == unstable {
                break;
            }
            if phi(mid) < 0.0 {
                unstable = mid;
            } else {
                stable = mid;
            }
        }
        unstable
    };
    Some((bisect(0.0, center), bisect(upper, center)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys_with_decay(e: f64, k_par: f64, v: f64) -> ShearSystem {
        ShearSystem::new(1.0, -e.ln() / k_par, v).unwrap()
    }

    #[test]
    fn decoupled_rest_matrix_is_diagonal() {
        let sys = ShearSystem::new(1.3, 1.0, 0.0).unwrap();
        let m = mode_matrix(&sys, WaveVector::new(800.0, 0.0).unwrap());
        let expect = [1.3, 1.3, -1.3, -1.3];
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { expect[i] } else { 0.0 };
                assert_eq!(m[(i, j)], Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn transcribed_entries() {
        // omega_sp = 1, k.v = 2, exp(-k d) = 0.1
        let sys = sys_with_decay(0.1, 2.0, 1.0);
        let m = mode_matrix(&sys, WaveVector::new(2.0, 0.0).unwrap()).map(|z| z.re);
        let rows = [
            [0.0, 0.05, 0.0, 0.05],
            [0.05, 2.0, 0.05, 0.0],
            [0.0, -0.05, -2.0, -0.05],
            [-0.05, 0.0, -0.05, 0.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((m[(i, j)] - rows[i][j]).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn unstable_eigenvalue_oracle() {
        // Oracle (40 digits): sqrt(2 - sqrt(4.01)) = 0.04998439206470875489...
        let sys = sys_with_decay(0.1, 2.0, 1.0);
        let ev = eigenvalues_closed_form(&sys, WaveVector::new(2.0, 0.0).unwrap());
        assert!(ev[1].re.abs() < 1e-18);
        assert!((ev[1].im - 0.049_984_392_064_708_755).abs() < 1e-15);
        assert_eq!(ev[2], -ev[1]);
    }

    #[test]
    fn rest_spectrum_is_real() {
        let sys = ShearSystem::new(1.7, 0.8, 0.0).unwrap();
        let k = WaveVector::new(0.4, -0.3).unwrap();
        let e = sys.decay(0.5);
        let ev = eigenvalues_closed_form(&sys, k);
        assert!((ev[0].re - 1.7 * (1.0 + e).sqrt()).abs() < 1e-14);
        assert!((ev[1].re - 1.7 * (1.0 - e).sqrt()).abs() < 1e-14);
        assert!(ev.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn window_examples() {
        let rest = ShearSystem::new(1.0, 1.0, 0.0).unwrap();
        assert!(instability_window(&rest, 1.0, [1.0, 0.0])
            .unwrap()
            .is_none());

        let sys = sys_with_decay(0.1, 2.0, 1.0);
        let w = instability_window(&sys, 2.0, [1.0, 0.0]).unwrap().unwrap();
        assert!((w.approximate.0 - 1.9).abs() < 1e-15);
        assert!((w.approximate.1 - 2.1).abs() < 1e-15);
        assert!(w.contains_approximate() && w.contains_exact());
        // Endpoints agree to O(e^2).
        assert!((w.exact.0 - w.approximate.0).abs() < 0.1 * 0.1);
        assert!((w.exact.1 - w.approximate.1).abs() < 0.1 * 0.1);

        assert!(instability_window(&sys, 2.0, [0.0, 1.0]).unwrap().is_none());
        assert!(instability_window(&sys, 2.0, [0.0, 0.0]).is_err());
    }

    #[test]
    fn exact_window_is_sign_change_of_radicand() {
        let sys = ShearSystem::new(1.0, 0.9, 0.6).unwrap();
        let (lo, hi) = unstable_kx_interval(&sys, 0.2).unwrap();
        let rate =
            |kx: f64| growth_rate(&sys, WaveVector { k_x: kx, k_y: 0.2 }, GrowthModel::Exact);
        assert!(rate(lo * (1.0 - 1e-9)) == 0.0 && rate(lo * (1.0 + 1e-9)) > 0.0);
        assert!(rate(hi * (1.0 + 1e-9)) == 0.0 && rate(hi * (1.0 - 1e-9)) > 0.0);
        assert!(lo < sys.peak_kx() && sys.peak_kx() < hi);
    }

    #[test]
    fn growth_rate_examples() {
        let sys = sys_with_decay(0.1, 2.0, 1.0);
        let peak = WaveVector::new(2.0, 0.0).unwrap();
        let approx = growth_rate(&sys, peak, GrowthModel::Approximate);
        assert!((approx - 0.05).abs() < 1e-15);
        let exact = growth_rate(&sys, peak, GrowthModel::Exact);
        assert!((approx / exact - 1.0).abs() < 1e-3);

        // Window edges of the weak-coupling expression.
        let e = 0.1;
        assert_eq!(approximate_rate(&sys, 2.0 + e, e), 0.0);
        assert_eq!(approximate_rate(&sys, 2.0 - e, e), 0.0);

        let rest = ShearSystem::new(1.0, 1.0, 0.0).unwrap();
        assert_eq!(growth_rate(&rest, peak, GrowthModel::Approximate), 0.0);
        assert_eq!(growth_rate(&rest, peak, GrowthModel::Exact), 0.0);
    }
}
