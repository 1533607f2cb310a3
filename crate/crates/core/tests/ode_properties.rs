use std::f64::consts::PI;

use floquet_core::ode::propagate_solution;
use floquet_core::{
    integrate_fundamental, integrate_shifted, parse_potential, shift_half_period, Complex64,
    IntegrationConfig, PotentialExpr,
};

fn pot(s: &str) -> PotentialExpr {
    parse_potential(s).unwrap()
}

const FAMILY: [&str; 3] = ["cos(2*x)", "cos(2*x)+0.3i*sin(2*x)", "exp(2i*x)"];

#[test]
fn wronskian_drift_small_at_default_resolution() {
    let cfg = IntegrationConfig::default();
    for s in FAMILY {
        let p = pot(s);
        for e in [-2.0, 0.5, 3.0, 12.0, 30.0] {
            let t = integrate_fundamental(&p, e, &cfg).unwrap();
            assert!(t.wronskian_drift <= 1e-9, "{s} E={e}: {}", t.wronskian_drift);
        }
    }
}

// The determinant of the RK4 step for a trace-free system is 1 + O(h^6), so
// the accumulated drift is fifth order.
#[test]
fn wronskian_drift_convergence_order() {
    for s in FAMILY {
        let p = pot(s);
        for e in [0.5, 2.0, 6.25] {
            let drift = |n: usize| {
                integrate_fundamental(&p, e, &IntegrationConfig::with_steps(n))
                    .unwrap()
                    .wronskian_drift
            };
            for n in [64, 128] {
                let ratio = drift(n) / drift(2 * n);
                assert!(
                    (16.0..=64.0).contains(&ratio),
                    "{s} E={e} n={n}: ratio {ratio}"
                );
            }
        }
    }
}

#[test]
fn free_particle_closed_form() {
    let cfg = IntegrationConfig::default();
    let p = pot("0");
    for e in [0.25f64, 1.0, 2.0, 6.25, 16.0] {
        let t = integrate_fundamental(&p, e, &cfg).unwrap();
        let w = e.sqrt();
        assert!((t.end.u1 - (w * PI).cos()).norm() <= 1e-9, "E={e}");
        assert!((t.end.u2 - (w * PI).sin() / w).norm() <= 1e-9, "E={e}");
        assert!((t.end.u2p - (w * PI).cos()).norm() <= 1e-9, "E={e}");
        assert!((t.end.u1p + w * (w * PI).sin()).norm() <= 1e-8, "E={e}");
    }
}

#[test]
fn linear_combination_of_fundamental_pair() {
    let cfg = IntegrationConfig::default();
    let a = Complex64::new(0.7, -0.2);
    let b = Complex64::new(-1.3, 0.4);
    for s in FAMILY {
        let p = pot(s);
        for e in [-1.0, 1.5, 7.0] {
            let t = integrate_fundamental(&p, e, &cfg).unwrap();
            let psi = propagate_solution(&p, e, [a, b], &cfg).unwrap();
            assert!((psi[0] - (a * t.end.u1 + b * t.end.u2)).norm() <= 1e-10, "{s} E={e}");
            assert!((psi[1] - (a * t.end.u1p + b * t.end.u2p)).norm() <= 1e-10, "{s} E={e}");
        }
    }
}

#[test]
fn shifted_pair_matches_fundamental_of_shifted_potential() {
    let cfg = IntegrationConfig::default();
    for s in FAMILY {
        let p = pot(s);
        let q = shift_half_period(&p);
        for e in [-1.0, 2.0, 9.5] {
            let v = integrate_shifted(&p, e, &cfg).unwrap().forward.end;
            let u = integrate_fundamental(&q, e, &cfg).unwrap().half.unwrap();
            for (a, b) in [(v.u1, u.u1), (v.u1p, u.u1p), (v.u2, u.u2), (v.u2p, u.u2p)] {
                assert!((a - b).norm() <= 1e-10, "{s} E={e}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn shifted_pair_of_zero_potential() {
    let cfg = IntegrationConfig::default();
    let sh = integrate_shifted(&pot("0"), 1.0, &cfg).unwrap();
    assert!(sh.forward.end.u1.norm() <= 1e-10);
    assert!(sh.backward.end.u1.norm() <= 1e-10);
    assert!((sh.forward.end.u2 - 1.0).norm() <= 1e-10);
    assert!((sh.backward.end.u2 + 1.0).norm() <= 1e-10);
}

#[test]
fn mathieu_values_are_real_and_symmetric() {
    let t = integrate_fundamental(&pot("cos(2*x)"), 1.0, &IntegrationConfig::default()).unwrap();
    for z in [t.end.u1, t.end.u1p, t.end.u2, t.end.u2p] {
        assert!(z.im.abs() <= 1e-12);
    }
    assert!((t.end.u1 - t.end.u2p).norm() <= 1e-9);
}
