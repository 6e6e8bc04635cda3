//! Wave-vector grids concentrated on the unstable window.

use super::modes::unstable_kx_interval;
use super::ShearSystem;
use crate::error::{require_positive, Error, Result};

/// Minimum number of `k_x` nodes inside the unstable window at `k_y = 0`.
pub const MIN_WINDOW_POINTS: usize = 16;

/// Half-widths of the window spanned on each side of `2 omega_sp / v`.
const WINDOW_SPAN: f64 = 3.0;

/// Channels whose coupling `exp(-2 k d)` relative to the peak channel falls
/// below this value are outside the `k_y` range.
const KY_CUTOFF: f64 = 1e-6;

/// Non-fatal diagnostics attached to grid sums.
#[derive(Debug, Clone, PartialEq)]
pub enum GridWarning {
    /// Fewer than [`MIN_WINDOW_POINTS`] `k_x` nodes fall inside the unstable window.
    SparseWindow { points: usize, required: usize },
    /// The system has no unstable channel at `k_y = 0`.
    NoUnstableWindow,
}

impl std::fmt::Display for GridWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::SparseWindow { points, required } => write!(
                f,
                "unstable window sampled by {points} k_x points (at least {required} recommended)"
            ),
            Self::NoUnstableWindow => write!(f, "no unstable channel at k_y = 0"),
        }
    }
}

/// Tensor-product grid with `k_x > 0` and `k_y` symmetric about zero.
///
/// Nodes are uniform; `k_y` is stored for `k_y >= 0` only and every node
/// carries the trapezoidal weight of the full symmetric range.
#[derive(Debug, Clone, PartialEq)]
pub struct KGrid {
    pub kx: Vec<f64>,
    pub ky: Vec<f64>,
    pub kx_weights: Vec<f64>,
    pub ky_weights: Vec<f64>,
}

impl KGrid {
    /// Uniform grid on `[kx_lo, kx_hi] x [-ky_max, ky_max]`.
    pub fn uniform(kx_lo: f64, kx_hi: f64, n_kx: usize, ky_max: f64, n_ky: usize) -> Result<Self> {
        require_positive("kx_lo", kx_lo)?;
        if !(kx_hi > kx_lo) || !kx_hi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "kx_hi",
                value: kx_hi,
                reason: "must be finite and > kx_lo",
            });
        }
        require_positive("ky_max", ky_max)?;
        for (name, n) in [("n_kx", n_kx), ("n_ky", n_ky)] {
            if n < 2 {
                return Err(Error::InvalidParameter {
                    name,
                    value: n as f64,
                    reason: "needs at least 2 nodes",
                });
            }
        }
        let (kx, kx_weights) = trapezoid(kx_lo, kx_hi, n_kx);
        let (ky, mut ky_weights) = trapezoid(0.0, ky_max, n_ky);
        // Mirror onto k_y < 0: the half-cell of the k_y = 0 node becomes a full cell.
        for w in ky_weights.iter_mut() {
            *w *= 2.0;
        }
        Ok(Self {
            kx,
            ky,
            kx_weights,
            ky_weights,
        })
    }

    /// Grid spanning `2 omega_sp / v +- 3 e_c omega_sp / v` in `k_x` (clamped to
    /// `k_x > 0`), with `e_c = exp(-2 omega_sp d / v)`, and `|k_y|` up to where the
    /// coupling `exp(-2 k d)` has dropped by [`KY_CUTOFF`] relative to `k_y = 0`.
    pub fn around_window(sys: &ShearSystem, n_kx: usize, n_ky: usize) -> Result<Self> {
        sys.validate()?;
        if sys.v == 0.0 {
            return Err(Error::InvalidParameter {
                name: "v",
                value: 0.0,
                reason: "the unstable window exists only for v > 0",
            });
        }
        let c = sys.peak_kx();
        let half = WINDOW_SPAN * sys.decay(c) * sys.omega_sp / sys.v;
        let lo = (c - half).max(1e-3 * c);
        let reach = c + (1.0 / KY_CUTOFF).ln() / (2.0 * sys.d);
        let ky_max = (reach * reach - c * c).sqrt();
        Self::uniform(lo, c + half, n_kx, ky_max, n_ky)
    }

    pub fn len(&self) -> usize {
        self.kx.len() * self.ky.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(k_x, k_y, weight)` of every node.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.kx
            .iter()
            .zip(&self.kx_weights)
            .flat_map(move |(&x, &wx)| {
                self.ky
                    .iter()
                    .zip(&self.ky_weights)
                    .map(move |(&y, &wy)| (x, y, wx * wy))
            })
    }

    /// Coverage diagnostics of this grid for `sys`.
    pub fn coverage(&self, sys: &ShearSystem) -> Vec<GridWarning> {
        match unstable_kx_interval(sys, 0.0) {
            None => vec![GridWarning::NoUnstableWindow],
            Some((lo, hi)) => {
                let points = self.kx.iter().filter(|&&x| lo < x && x < hi).count();
                if points < MIN_WINDOW_POINTS {
                    vec![GridWarning::SparseWindow {
                        points,
                        required: MIN_WINDOW_POINTS,
                    }]
                } else {
                    Vec::new()
                }
            }
        }
    }
}

fn trapezoid(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = (b - a) / (n - 1) as f64;
    let nodes = (0..n).map(|i| a + h * i as f64).collect();
    let weights = (0..n)
        .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
        .collect();
    (nodes, weights)
}
