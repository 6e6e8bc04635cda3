//! Small dense complex matrix helpers for the 4x4 mode problem.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;

pub type CMatrix4 = Matrix4<Complex64>;
pub type CVector4 = Vector4<Complex64>;

/// Padé(13) coefficients of the scaling-and-squaring exponential.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371_920_351_148_152;

/// Induced 1-norm (maximum absolute column sum).
pub fn norm1(a: &CMatrix4) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé approximant.
pub fn expm(a: &CMatrix4) -> CMatrix4 {
    let norm = norm1(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(0.5f64.powi(squarings));
    let b = &PADE13;
    let ident = CMatrix4::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let c = |k: usize| Complex64::new(b[k], 0.0);

    let u_inner = a6 * (a6 * c(13) + a4 * c(11) + a2 * c(9))
        + a6 * c(7)
        + a4 * c(5)
        + a2 * c(3)
        + ident * c(1);
    let u = a * u_inner;
    let v = a6 * (a6 * c(12) + a4 * c(10) + a2 * c(8))
        + a6 * c(6)
        + a4 * c(4)
        + a2 * c(2)
        + ident * c(0);

    let p = v + u;
    let q = v - u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is nonsingular after scaling");
    for _ in 0..squarings {
        r = r * r;
    }
    r
}

/// Unit-norm vector spanning the (numerical) null space of `a`, taken as the
/// right singular vector of the smallest singular value.
pub fn null_vector(a: &CMatrix4) -> CVector4 {
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("four singular values");
    let row = v_t.row(idx);
    let mut v = CVector4::from_iterator(row.iter().map(|z| z.conj()));
    // Fix the global phase so the largest component is real and positive.
    let (imax, _) = v
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("nonempty");
    let phase = v[imax] / v[imax].norm();
    v /= phase;
    v / Complex64::new(v.norm(), 0.0)
}

/// Two-norm condition number from the singular values; infinite when singular.
pub fn condition_number(a: &CMatrix4) -> f64 {
    let s = a.singular_values();
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix4, b: &CMatrix4) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expm_of_diagonal() {
        let d = CMatrix4::from_diagonal(&CVector4::new(
            c(0.0, -1.0),
            c(0.5, 0.0),
            c(-3.0, 2.0),
            c(20.0, 0.0),
        ));
        let e = expm(&d);
        for i in 0..4 {
            let exact = d[(i, i)].exp();
            assert!((e[(i, i)] - exact).norm() < 1e-13 * exact.norm());
        }
        assert!(e[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn expm_of_nilpotent_jordan_block() {
        let mut n = CMatrix4::zeros();
        n[(0, 1)] = c(1.0, 0.0);
        n[(1, 2)] = c(1.0, 0.0);
        let e = expm(&(n * c(3.0, 0.0)));
        assert!((e[(0, 1)] - c(3.0, 0.0)).norm() < 1e-13);
        assert!((e[(0, 2)] - c(4.5, 0.0)).norm() < 1e-13);
        assert!((e[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn expm_rotation_generator() {
        // exp(t [[0, -1], [1, 0]]) is a rotation by t, embedded in the top block.
        let t = 17.3;
        let mut a = CMatrix4::zeros();
        a[(0, 1)] = c(-t, 0.0);
        a[(1, 0)] = c(t, 0.0);
        let e = expm(&a);
        assert!((e[(0, 0)].re - t.cos()).abs() < 1e-12);
        assert!((e[(1, 0)].re - t.sin()).abs() < 1e-12);
        assert!((e[(3, 3)].re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn null_vector_of_rank_deficient_matrix() {
        let mut a = CMatrix4::identity();
        a[(2, 2)] = c(0.0, 0.0);
        a[(0, 2)] = c(1.0, 1.0);
        let v = null_vector(&a);
        assert!((a * v).norm() < 1e-14);
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn condition_number_of_singular_and_identity() {
        assert!((condition_number(&CMatrix4::identity()) - 1.0).abs() < 1e-14);
        let mut a = CMatrix4::identity();
        a[(3, 3)] = c(0.0, 0.0);
        assert!(condition_number(&a) > 1e15);
    }
}
