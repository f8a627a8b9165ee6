use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use timelike::curves::Domain;
use timelike::homogeneous::*;
use timelike::jet::{diag_product, Jet, Jet5};
use HomogeneousClass::*;

const POINCARE: [f64; 5] = [-1.0, -1.0, 1.0, 1.0, 1.0];
const MARGIN: f64 = 0.05;

fn sample(class: HomogeneousClass, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let (ar, br) = match class {
        C1 => ((-1.0, 1.0), (0.0, 4.0)),
        C3 => ((0.25, 3.0), (1.0, 4.0)),
        _ => ((0.0, 1.0), (0.0, 4.0)),
    };
    loop {
        let (a, b) = (rng.gen_range(ar.0..ar.1), rng.gen_range(br.0..br.1));
        let ok = [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0), (0.0, 0.0)]
            .iter()
            .all(|(da, db)| in_domain(class, a + da * MARGIN, b + db * MARGIN));
        if ok {
            return (a, b);
        }
    }
}

fn derivatives(v: &Jet5, n: usize) -> Jet5 {
    let mut out = *v;
    for _ in 0..n {
        out = out.map(|x| x.d());
    }
    out
}

#[test]
fn orbit_scalar_products_are_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for class in [C1, C2i, C2ii, C3, C4] {
        let (a, b) = sample(class, &mut rng);
        let curve = parametrize(class, &HomogeneousParams::new(a, b)).unwrap();
        let (t0, t1) = (curve.domain.start(), curve.domain.end());
        let products = |t: f64| {
            let g = curve.lift(&Jet::variable(t));
            let mut out = vec![];
            for i in 0..=3 {
                for j in i..=3 {
                    out.push(diag_product(&derivatives(&g, i), &derivatives(&g, j), &POINCARE).value());
                }
            }
            out
        };
        let base = products(t0);
        let scale = base.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for s in 1..=8 {
            let p = products(t0 + (t1 - t0) * s as f64 / 8.0);
            for (x, y) in p.iter().zip(&base) {
                assert!((x - y).abs() < 1e-9 * scale, "{class} (a, b) = ({a}, {b}): {x} vs {y}");
            }
        }
    }
}

#[test]
fn parameters_round_trip_through_curvatures() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for class in [C1, C2i, C2ii, C3, C4] {
        for _ in 0..100 {
            let (a, b) = sample(class, &mut rng);
            let (k, h) = curvatures_from_params(class, &HomogeneousParams::new(a, b)).unwrap();
            assert_eq!(classify(k, h).unwrap(), class, "(a, b) = ({a}, {b})");
            let p = params_from_curvatures(class, k, h).unwrap();
            assert!((p.a - a).abs() < 1e-8 && (p.b - b).abs() < 1e-8, "{class}: ({a}, {b}) -> ({}, {})", p.a, p.b);
        }
    }
}

#[test]
fn c2i_reference_curvatures_invert() {
    let (k, h) = curvatures_from_params(C2i, &HomogeneousParams::new(0.5, 2.0 / 3.0)).unwrap();
    let p = params_from_curvatures(C2i, k, h).unwrap();
    assert!((p.a - 0.5).abs() < 1e-8 && (p.b - 2.0 / 3.0).abs() < 1e-8);
}

#[test]
fn rational_c2i_curves_close() {
    for (m, n) in [(1, 2), (2, 5), (3, 7)] {
        let c = parametrize(C2i, &HomogeneousParams::with_rational(0.5, Rational::new(m, n).unwrap())).unwrap();
        let Domain::Periodic { start, period } = c.domain else { panic!("expected a periodic domain") };
        assert!((period - 2.0 * std::f64::consts::PI * n as f64).abs() < 1e-12);
        for t in [start, start + 0.3, start + 1.7] {
            let (p, q) = (c.point(t).x, c.point(t + period).x);
            assert!(p.iter().zip(q).all(|(x, y)| (x - y).abs() < 1e-12));
        }
    }
}

#[test]
fn domain_violations_are_rejected() {
    assert!(parametrize(C2i, &HomogeneousParams::new(0.5, 1.5)).is_err());
    assert!(curvatures_from_params(C3, &HomogeneousParams::new(0.2, 2.0)).is_err());
}

#[test]
fn every_class_has_its_own_stratum() {
    let cases = [(C1, 0.5, 0.2), (C2i, 0.5, 0.6), (C2ii, 0.9, 1.2), (C3, 1.0, 2.0), (C4, 0.9, 1.5)];
    for (class, a, b) in cases {
        let (k, h) = curvatures_from_params(class, &HomogeneousParams::new(a, b)).unwrap();
        assert_eq!(classify(k, h).unwrap(), class);
    }
}
