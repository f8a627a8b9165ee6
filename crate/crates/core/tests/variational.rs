use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use timelike::frames::MobiusFrame;
use timelike::variational::*;

fn d_star_point(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let s = 2.0 + rng.gen_range(-1.5f64..1.5).exp();
        let lambda = rng.gen_range(0.1..0.9);
        let r = (s * s - 4.0).sqrt();
        let t = -s + lambda * (s - r);
        let (e1, e2) = (0.5 * (t - s), 0.5 * (t + s));
        let xi = rotation_rates(e1, e2);
        if in_d_star(e1, e2) && xi[0] > 0.05 && (xi[1] - xi[0]).abs() > 0.05 {
            return (e1, e2);
        }
    }
}

#[test]
fn first_integrals_hold_along_extremals() {
    for (e1, e2) in [(0.5, 1.5), (-1.0, 0.8), (-0.3, 2.5)] {
        let params = CriticalParams::new(e1, e2).unwrap();
        let omega = params.curvature_period().unwrap();
        let path = critical_path(&params, &MobiusFrame::identity(), 0.0, omega, 1e-12).unwrap();
        assert!(path.first_integral_residual() < 1e-8, "({e1}, {e2}): {}", path.first_integral_residual());
        assert!(path.momentum_drift() < 1e-8 * omega.max(1.0), "({e1}, {e2}): {}", path.momentum_drift());
        assert!(path.curvature_error < 1e-8);
    }
}

#[test]
fn period_map_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let (e1, e2) = d_star_point(&mut rng);
        let mono = period_map(e1, e2).unwrap();
        let closed = period_map_closed_form(e1, e2).unwrap();
        for j in 0..2 {
            assert!((mono.psi[j] - closed[j]).abs() < 1e-6, "({e1}, {e2}): {:?} vs {closed:?}", mono.psi);
        }
        assert!(in_period_image(mono.psi[0], mono.psi[1]), "({e1}, {e2}) -> {:?}", mono.psi);
    }
}

#[test]
fn curvatures_stay_on_the_phase_portrait() {
    for (e1, e2) in [(0.5, 1.5), (-1.0, 0.8), (0.0, 2.0)] {
        let sol = curvature_solution(&CriticalParams::new(e1, e2).unwrap());
        for i in 0..40 {
            let u = -3.0 + 0.15 * i as f64;
            assert!(sol.phase_residual(u) < 1e-9, "({e1}, {e2}) at {u}");
            let (a, b) = sol.el_residual(u);
            assert!(a.abs().max(b.abs()) < 1e-8);
            assert!(sol.lax_residual(u) < 1e-8, "({e1}, {e2}) at {u}: {}", sol.lax_residual(u));
        }
    }
}

#[test]
fn type_three_reports_its_solution() {
    let sol = curvature_solution(&CriticalParams::new(0.0, 1.0).unwrap());
    assert!(!sol.warnings.is_empty());
    assert!(sol.period().is_none());
    assert!((sol.k(0.0) - 1.0).abs() < 1e-15);
}

#[test]
fn inversion_round_trips() {
    let inv = invert_period_map_f64(0.75, 2.0 / 3.0).unwrap();
    let psi = period_map(inv.e1, inv.e2).unwrap().psi;
    assert!((psi[0] - 0.75).abs() < 1e-9 && (psi[1] - 2.0 / 3.0).abs() < 1e-9, "{psi:?}");
}

#[test]
fn invalid_parameters_are_domain_errors() {
    assert!(CriticalParams::new(2.0, 1.0).is_err());
    assert!(CriticalParams::new(-1.0, -0.5).is_err());
    assert!(period_map(0.5, 1.5).is_err());
    assert!(invert_period_map_f64(0.5, 0.9).is_err());
    assert!(invert_period_map_f64(0.3, 0.2).is_err());
}

#[test]
fn irrational_targets_do_not_close() {
    let params = CriticalParams::new(-1.986377 + 0.02, 0.027511).unwrap();
    let (frame, curve) = recurrence_gap(&params, 12).unwrap();
    assert!(frame > 1e-3 && curve > 1e-3);
}
