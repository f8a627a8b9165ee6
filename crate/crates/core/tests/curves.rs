use std::f64::consts::PI;
use timelike::curves::*;
use timelike::geometry::BasisKind;
use timelike::homogeneous::{parametrize, HomogeneousClass, HomogeneousParams, Rational};
use timelike::jet::Jet;
use timelike::verify::fixture_curves;

#[test]
fn strain_density_ignores_the_section() {
    for base in fixture_curves() {
        let b = base.clone();
        let scaled = TimelikeCurve::in_basis(BasisKind::Poincare, base.domain, move |t: &Jet| {
            let g = b.lift(t);
            let l = ((*t * 1.3).sin() * 0.4).exp() * 2.5;
            std::array::from_fn(|i| g[i] * l)
        });
        for t in [-0.7, 0.1, 0.9] {
            let (a, c) = (strain_density(&base, t).unwrap(), strain_density(&scaled, t).unwrap());
            assert!((a - c).abs() < 1e-8, "{a} vs {c}");
        }
    }
}

#[test]
fn osculating_space_has_second_order_contact() {
    let curve = &fixture_curves()[0];
    let t0 = 0.3;
    let osc = osculating_space(curve, t0).unwrap();
    let dist = |e: f64| {
        let x = curve.point(t0 + e).x;
        osc.project_normal(&x).iter().map(|v| v * v).sum::<f64>().sqrt()
    };
    let (e1, e2) = (4e-3, 1e-3);
    let slope = (dist(e1) / dist(e2)).ln() / (e1 / e2).ln();
    assert!((slope - 3.0).abs() < 0.1, "slope {slope}");
}

#[test]
fn maslov_index_of_closed_c2i_curves() {
    for (m, n) in [(1, 3), (2, 5), (3, 7)] {
        let p = HomogeneousParams::with_rational(0.5, Rational::new(m, n).unwrap());
        let c = parametrize(HomogeneousClass::C2i, &p).unwrap();
        assert_eq!(maslov_index(&c).unwrap(), n);
    }
}

#[test]
fn sampled_curve_reproduces_strain() {
    let base = &fixture_curves()[1];
    let n = 801;
    let ts: Vec<f64> = (0..n).map(|i| -PI + 2.0 * PI * i as f64 / (n - 1) as f64).collect();
    let xs: Vec<[f64; 5]> = ts.iter().map(|&t| base.point(t).x).collect();
    let sampled = TimelikeCurve::from_samples(ts, xs, false).unwrap();
    for t in [-1.0, 0.0, 1.2] {
        let (a, b) = (strain_density(base, t).unwrap(), strain_density(&sampled, t).unwrap());
        assert!(((a - b) / a).abs() < 1e-4, "{a} vs {b}");
    }
}

#[test]
fn strain_table_inverts() {
    let c = &fixture_curves()[0];
    let tab = strain_table(c, -1.0, 1.0, 64).unwrap();
    let u = 0.37 * tab.u.last().unwrap();
    let t = tab.invert(c, u).unwrap();
    let back = strain_table(c, -1.0, t, 64).unwrap();
    assert!((back.u.last().unwrap() - u).abs() < 1e-9);
}
