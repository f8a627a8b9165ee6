use timelike::frames::*;
use timelike::homogeneous::*;
use timelike::verify::fixture_curves;

fn cases() -> Vec<(HomogeneousClass, f64, f64)> {
    use HomogeneousClass::*;
    vec![
        (C1, 0.5, 0.2),
        (C2i, 0.5, 2.0 / 3.0),
        (C2ii, 0.9, 5.0 / 3.0 * 0.7),
        (C3, 1.0, 2.0),
        (C4, 0.9, 1.5),
        (C5, 0.0, 1.5),
        (C6, 0.0, 0.6),
        (C7i, 0.0, 2.0),
        (C7ii, 0.0, 1.5),
        (C8, 0.0, 0.5),
        (C9, 0.0, 0.0),
    ]
}

#[test]
fn jet_frame_agrees_with_orbit_reduction() {
    for (class, a, b) in cases() {
        let curve = parametrize(class, &HomogeneousParams::new(a, b)).unwrap();
        let t = 0.5 * (curve.domain.start() + curve.domain.end()) + 0.1;
        let cf = canonical_frame_at(&curve, t).unwrap();
        let red = reduction_curvatures(&curve, t).unwrap();
        assert!((cf.k.abs() - red.k).abs() < 1e-8, "{class}: k {} vs {}", cf.k, red.k);
        assert!((cf.h - red.h).abs() < 1e-8, "{class}: h {} vs {}", cf.h, red.h);
        assert!(group_defect(&cf.frame.m) < 1e-9, "{class}");
    }
}

#[test]
fn frenet_matrix_lies_in_the_algebra() {
    for (h, k) in [(0.0, 0.0), (1.5, -2.0), (-3.0, 0.25)] {
        assert!(algebra_defect(&frenet_matrix(h, k)) < 1e-15);
    }
}

#[test]
fn integrated_frames_reproduce_the_profile() {
    let curve = &fixture_curves()[0];
    let prof = curvature_profile(curve, -1.0, 1.0, 41).unwrap();
    let interp = |xs: &[f64], u: f64| {
        let du = prof.u[1] - prof.u[0];
        let i = ((u / du).floor() as usize).min(prof.u.len() - 2);
        let s = (u - prof.u[i]) / du;
        xs[i] * (1.0 - s) + xs[i + 1] * s
    };
    let m0 = canonical_frame_at(curve, prof.t[0]).unwrap().frame;
    let outputs: Vec<f64> = prof.u[1..].to_vec();
    let path = integrate_frenet(&|u| interp(&prof.k, u), &|u| interp(&prof.h, u), &m0, 0.0, &outputs, 1e-12).unwrap();
    // the integrated frame carries the curve: its first column tracks γ at the matched parameters
    let pts = path.curve_points();
    for (i, p) in pts.iter().enumerate().step_by(10) {
        let q = curve.point(prof.t[i + 1]);
        let d = p.x.iter().zip(q.x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(d < 5e-3, "sample {i}: {d}");
    }
}
