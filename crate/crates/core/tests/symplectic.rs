use nalgebra::Matrix4;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use timelike::frames::{frenet_matrix, integrate_frenet, MobiusFrame};
use timelike::homogeneous::{curvatures_from_params, parametrize, HomogeneousClass, HomogeneousParams, Rational};
use timelike::symplectic::*;
use timelike::variational::{curvature_solution, CriticalParams};
use timelike::verify::random_sp_algebra;

#[test]
fn covering_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let x = random_sp_algebra(&mut rng, 0.7).exp();
        let y = random_sp_algebra(&mut rng, 0.7).exp();
        let lhs = rho(&(x * y)).unwrap();
        let rhs = rho(&x).unwrap() * rho(&y).unwrap();
        assert!((lhs - rhs).amax() < 1e-11 * rhs.amax().max(1.0));
    }
}

#[test]
fn differential_matches_the_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let a = random_sp_algebra(&mut rng, 0.7);
        let b = random_sp_algebra(&mut rng, 0.7);
        let g = rho(&a.exp()).unwrap();
        assert!((g - rho_star(&a).exp()).amax() < 1e-11 * g.amax().max(1.0));
        let bracket = rho_star(&(a * b - b * a));
        let (ra, rb) = (rho_star(&a), rho_star(&b));
        assert!((bracket - (ra * rb - rb * ra)).amax() < 1e-12);
    }
}

#[test]
fn lifted_frenet_covers_frenet() {
    for (h, k) in [(0.0, 1.0), (-1.3, 0.4), (2.5, -3.0)] {
        let l = lifted_frenet(h, k);
        assert!(sp_algebra_defect(&l) < 1e-15);
        assert!((rho_star(&l) - frenet_matrix(h, k)).amax() < 1e-15);
    }
}

// Moduli of the eigenvalues of a matrix in sp(4,R) with spectrum ±iμ1, ±iμ2.
fn rotation_moduli(a: &Matrix4<f64>) -> (f64, f64) {
    let a2 = a * a;
    let s = -a2.trace() / 2.0;
    let q = (a2 * a2).trace() / 2.0;
    let p = (s * s - q) / 2.0;
    let r = (s * s - 4.0 * p).max(0.0).sqrt();
    (((s + r) / 2.0).sqrt(), ((s - r) / 2.0).sqrt())
}

#[test]
fn lifted_frenet_spectrum_of_closed_c2i() {
    for (m, n) in [(1, 3), (2, 5), (3, 7)] {
        let (k, h) = curvatures_from_params(HomogeneousClass::C2i, &HomogeneousParams::new(0.5, m as f64 / n as f64)).unwrap();
        let (big, small) = rotation_moduli(&lifted_frenet(h, k));
        let want = (n + m) as f64 / (n - m) as f64;
        assert!((big / small - want).abs() < 1e-9, "{m}/{n}: {}", big / small);
    }
}

#[test]
fn spin_of_closed_c2i_curves() {
    let spin = |a: f64, m: i64, n: i64| {
        let c = parametrize(HomogeneousClass::C2i, &HomogeneousParams::with_rational(a, Rational::new(m, n).unwrap())).unwrap();
        symplectic_spin(&c).unwrap().spin
    };
    assert_eq!(spin(0.5, 2, 5), Spin::Half);
    assert_eq!(spin(0.7, 1, 3), Spin::One);
    for a in [0.3, 0.5, 0.8] {
        assert_eq!(spin(a, 2, 5), Spin::Half, "a = {a}");
    }
}

fn lift_error_per_unit_strain(k: &dyn Fn(f64) -> f64, h: &dyn Fn(f64) -> f64, length: f64) -> (f64, f64) {
    let outputs: Vec<f64> = (1..=40).map(|i| length * i as f64 / 40.0).collect();
    let d = directrices(k, h, &Matrix4::identity(), 0.0, &outputs, 1e-12).unwrap();
    let f = integrate_frenet(k, h, &MobiusFrame::identity(), 0.0, &outputs, 1e-12).unwrap();
    let err = d.lifts.iter().zip(&f.frames).zip(&outputs).map(|((x, m), u)| (rho(x).unwrap() - m.m).amax() / u).fold(0.0, f64::max);
    (err, d.symplectic_drift)
}

#[test]
fn directrix_lift_covers_the_frame() {
    let (k, h) = curvatures_from_params(HomogeneousClass::C2i, &HomogeneousParams::new(0.5, 0.4)).unwrap();
    let (err, drift) = lift_error_per_unit_strain(&|_| k, &|_| h, 40.0);
    assert!(err < 1e-7, "C2i: {err}");
    assert!(drift < 1e-10, "C2i: {drift}");

    let params = CriticalParams::new(-1.986377, 0.027511).unwrap();
    let sol = curvature_solution(&params);
    let omega = params.curvature_period().unwrap();
    let (err, drift) = lift_error_per_unit_strain(&|u| sol.k(u), &|u| sol.h(u), 2.0 * omega);
    assert!(err < 1e-7, "critical: {err}");
    assert!(drift < 1e-10, "critical: {drift}");
}

#[test]
fn contact_structure() {
    let p = [0.5, -0.5, 0.5, 0.5];
    let (e1, e2) = contact_frame(&p);
    assert!(contact_eval(&p, &e1).unwrap().abs() < 1e-15);
    assert!(contact_eval(&p, &e2).unwrap().abs() < 1e-15);
    let reeb = [-p[2], -p[3], p[0], p[1]];
    assert!((contact_eval(&p, &reeb).unwrap() - 1.0).abs() < 1e-15);
    assert!(contact_eval(&p, &p).is_err());
    assert!(contact_eval(&[1.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]).is_err());
}
