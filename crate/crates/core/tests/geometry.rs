use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use timelike::geometry::*;

const BASES: [BasisKind; 3] = [BasisKind::Mobius, BasisKind::Poincare, BasisKind::Lie];

#[test]
fn transitions_are_isometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for from in BASES {
        for to in BASES {
            for _ in 0..50 {
                let u: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
                let v: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
                let a = gram_product(&u, &v, &from.gram());
                let b = gram_product(&convert(&u, from, to), &convert(&v, from, to), &to.gram());
                assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()), "{from:?} -> {to:?}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn transitions_compose() {
    let t = basis_transition(BasisKind::Lie, BasisKind::Poincare) * basis_transition(BasisKind::Mobius, BasisKind::Lie);
    assert!((t - basis_transition(BasisKind::Mobius, BasisKind::Poincare)).amax() < 1e-14);
}

#[test]
fn ray_normalize_is_idempotent() {
    let p = EinsteinPoint::new([0.6, 0.8, 0.0, 0.6, 0.8]).unwrap();
    let q = ray_normalize(&Vec5::poincare(p.x)).unwrap();
    assert!(p.x.iter().zip(q.x).all(|(a, b)| (a - b).abs() < 1e-15));
}

#[test]
fn non_null_vectors_are_rejected() {
    assert!(ray_normalize(&Vec5::poincare([1.0, 0.0, 0.0, 0.0, 0.0])).is_err());
    assert!(ray_normalize(&Vec5::poincare([0.0; 5])).is_err());
}

#[test]
fn centerline_stays_inside_the_toroid() {
    for i in 0..64 {
        let phi = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
        let p = EinsteinPoint::new([phi.cos(), phi.sin(), 1.0, 0.0, 0.0]).unwrap();
        assert!(toroid_distance(&toroidal_projection(&p)) < 1.0);
    }
}

#[test]
fn embedded_models_lie_in_their_chambers() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..1000 {
        let y: [f64; 2] = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let r = (1.0 + y[0] * y[0] + y[1] * y[1]).sqrt();
        let th: f64 = rng.gen_range(0.0..6.28);
        let p = embed(Model::AntiDeSitter, &[r * th.cos(), r * th.sin(), y[0], y[1]]).unwrap();
        assert_eq!(chamber(&p).ads, Side::Positive);

        let c: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        assert_eq!(chamber(&embed(Model::Minkowski, &c).unwrap()).minkowski, Side::Positive);

        let w1: f64 = rng.gen_range(-3.0..3.0);
        let d: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let s = (1.0 + w1 * w1).sqrt() / n;
        let p = embed(Model::DeSitter, &[w1, d[0] * s, d[1] * s, d[2] * s]).unwrap();
        assert_eq!(chamber(&p).de_sitter, DsSide::Positive);
    }
}

#[test]
fn off_quadric_points_are_domain_errors() {
    assert!(embed(Model::AntiDeSitter, &[1.0, 1.0, 0.0, 0.0]).is_err());
    assert!(embed(Model::DeSitter, &[0.0, 0.5, 0.0, 0.0]).is_err());
    assert!(embed(Model::Minkowski, &[1.0, 2.0]).is_err());
}
