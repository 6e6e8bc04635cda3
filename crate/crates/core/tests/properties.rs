//! Randomized invariants of the friction modes and the drifting-plate response.

use fluctem_core::drag::{drag_integrand, DragConfig};
use fluctem_core::friction::{
    eigenvalues_closed_form, ModeEvolution, QuantaChannel, ShearSystem, WaveVector,
};
use fluctem_core::materials::{drift_epsilon_longitudinal, drift_epsilon_tensor};
use fluctem_core::{Complex64, DriftParams, DrudeParams, LatticeResponse, ParticleParams};
use proptest::prelude::*;

fn system() -> impl Strategy<Value = (ShearSystem, WaveVector)> {
    (
        0.3f64..3.0,
        0.1f64..2.0,
        0.0f64..3.0,
        -6.0f64..6.0,
        -2.0f64..2.0,
    )
        .prop_map(|(w, d, v, kx, ky)| {
            (
                ShearSystem::new(w, d, v).unwrap(),
                WaveVector::new(kx, ky).unwrap(),
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn spectrum_closed_under_minus_conjugate((sys, k) in system()) {
        let ev = eigenvalues_closed_form(&sys, k);
        for l in ev {
            let partner = -l.conj();
            let nearest = ev.iter().map(|m| (m - partner).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest <= 1e-12 * (1.0 + l.norm()));
        }
    }

    #[test]
    fn evolution_starts_at_identity_and_composes((sys, k) in system(), t1 in 0.0f64..15.0, t2 in 0.0f64..15.0) {
        let ev = ModeEvolution::new(&sys, k).unwrap();
        let u0 = ev.evolution_operator(0.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let id = if i == j { 1.0 } else { 0.0 };
                prop_assert!((u0[(i, j)] - Complex64::new(id, 0.0)).norm() < 1e-10);
            }
        }
        let a = ev.evolution_operator(t1 + t2).unwrap();
        let b = ev.evolution_operator(t1).unwrap() * ev.evolution_operator(t2).unwrap();
        let scale = a.iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!((a - b).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-9 * scale);
    }

    #[test]
    fn bogoliubov_rows_preserved((sys, k) in system(), t in 0.0f64..20.0) {
        let u = ModeEvolution::new(&sys, k).unwrap().evolution_operator(t).unwrap();
        for r in 0..2 {
            let inv = u[(r, 0)].norm_sqr() + u[(r, 1)].norm_sqr() - u[(r, 2)].norm_sqr() - u[(r, 3)].norm_sqr();
            prop_assert!((inv - 1.0).abs() < 1e-8 * (1.0 + u[(r, 2)].norm_sqr()));
        }
    }

    #[test]
    fn sheets_hold_equal_quanta((sys, k) in system(), t in 0.0f64..20.0) {
        let s = QuantaChannel::new(&sys, k).unwrap().state(t).unwrap();
        prop_assert!(s.n1 >= -1e-12);
        prop_assert!((s.n1 - s.n2).abs() <= 1e-8 * (1.0 + s.n1));
    }

    #[test]
    fn projection_equals_longitudinal(
        wp in 0.1f64..5.0, g in 0.0f64..1.0, el in 1.0f64..12.0,
        v in prop::array::uniform3(-1.0f64..1.0),
        k in prop::array::uniform3(-3.0f64..3.0),
        w in 0.05f64..5.0,
    ) {
        let plate = DriftParams { drude: DrudeParams::with_lattice(wp, g, LatticeResponse::real(el)).unwrap(), v0: v };
        let kv: f64 = (0..3).map(|i| k[i] * v[i]).sum();
        let k2: f64 = k.iter().map(|x| x * x).sum();
        prop_assume!(k2 > 1e-6);
        let (t, l) = (drift_epsilon_tensor(w, k, &plate), drift_epsilon_longitudinal(w, kv, &plate));
        prop_assume!(t.is_ok() && l.is_ok());
        let (t, l) = (t.unwrap(), l.unwrap());
        let mut p = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                p += t[(i, j)] * (k[i] * k[j] / k2);
            }
        }
        prop_assert!((p - l).norm() <= 1e-12 * l.norm());
    }

    #[test]
    fn drag_integrand_odd_under_drift_reversal(
        v0 in 0.05f64..3.0, w in 0.01f64..5.0, kx in -5.0f64..5.0, ky in -3.0f64..3.0,
    ) {
        let cfg = |v: f64| DragConfig::new(
            DriftParams::along_x(DrudeParams::new(3.0, 0.3).unwrap(), v).unwrap(),
            ParticleParams::new(1.0, 1.0, 0.5).unwrap(),
            1.0, 0.0, 0.0,
        ).unwrap();
        // (v0, k_x) -> (-v0, -k_x) leaves the Doppler shift unchanged and flips the k_x weight.
        let (a, b) = (drag_integrand(w, kx, ky, &cfg(v0)), drag_integrand(w, -kx, ky, &cfg(-v0)));
        prop_assume!(a.is_ok() && b.is_ok());
        let (a, b) = (a.unwrap(), b.unwrap());
        prop_assert!((a + b).abs() <= 1e-12 * (a.abs() + b.abs()).max(1e-300));
    }
}
