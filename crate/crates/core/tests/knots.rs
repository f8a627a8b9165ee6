use nalgebra::{Matrix3, Vector3};
use std::f64::consts::PI;
use timelike::knots::*;
use timelike::symplectic::{contact_frame, S3Path};

fn circle(center: Vector3<f64>, e1: Vector3<f64>, e2: Vector3<f64>) -> SpatialKnot {
    SpatialKnot::from_points(2.0 * PI, (0..512).map(|i| {
        let t = 2.0 * PI * i as f64 / 512.0;
        center + e1 * t.cos() + e2 * t.sin()
    }).collect()).unwrap()
}

#[test]
fn hopf_and_split_links() {
    let a = circle(Vector3::zeros(), Vector3::x(), Vector3::y());
    let hopf = circle(Vector3::x(), Vector3::x(), Vector3::z());
    let far = circle(Vector3::new(5.0, 0.0, 0.0), Vector3::x(), Vector3::z());
    let l = linking_number(&a, &hopf, 1).unwrap().linking;
    assert_eq!(l.abs(), 1);
    assert_eq!(linking_number(&hopf, &a, 1).unwrap().linking, l);
    assert_eq!(linking_number(&a, &far, 1).unwrap().linking, 0);
}

#[test]
fn linking_of_torus_knots_is_seed_independent() {
    let k = torus_knot(TorusKind::Standard, 3, 7, 2048).unwrap();
    let kh = torus_knot(TorusKind::Starred, 3, 7, 2048).unwrap();
    for seed in 1..=5 {
        let r = linking_number(&k, &kh, seed).unwrap();
        assert_eq!(r.linking, 21, "seed {seed}");
        assert_eq!(linking_number(&kh, &k, seed).unwrap().linking, 21);
    }
}

#[test]
fn writhe_of_the_standard_trefoil() {
    let k = torus_knot(TorusKind::Standard, 2, 3, 1024).unwrap();
    assert_eq!(writhe(&k, &[0.0, 0.0, 1.0], 1).unwrap(), 4);
    let mirror = k.transform(&Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0)), &Vector3::zeros()).unwrap();
    assert_eq!(writhe(&mirror, &[0.0, 0.0, 1.0], 1).unwrap(), -4);
}

#[test]
fn self_linking_changes_sign_under_mirroring() {
    let k = torus_knot(TorusKind::Check, 3, 5, 2048).unwrap();
    assert_eq!(self_linking(&k, 1).unwrap(), 12);
    assert_eq!(self_linking(&mirrored_check_knot(3, 5, 2048).unwrap(), 1).unwrap(), -12);
}

fn contact_field(st: &Stereographic, path: &S3Path, second: bool) -> Vec<Vector3<f64>> {
    path.points
        .iter()
        .map(|p| {
            let (e1, e2) = contact_frame(p);
            st.push(p, if second { &e2 } else { &e1 }).unwrap()
        })
        .collect()
}

#[test]
fn bennequin_number_does_not_depend_on_the_torus() {
    for big_a in [2.5, 3.0, 4.0] {
        let (g, gs) = transverse_torus_pair(big_a, 3, 7, 2048).unwrap();
        let st = Stereographic::avoiding(&[&g, &gs], 1).unwrap();
        let b = bennequin(&g, 2.0 * PI, &st, 1).unwrap();
        assert_eq!(b.value, 11, "A = {big_a}");
        assert_eq!(b.e1.linking, b.e2.linking);
        let k = st.knot(&g, 2.0 * PI).unwrap();
        assert_eq!(rotation_number(&k, &contact_field(&st, &g, false)).unwrap(), -7, "A = {big_a}");
    }
}

#[test]
fn contact_sections_give_the_same_framing() {
    let mut checked = 0;
    for (p, q) in [(1, 2), (2, 3), (1, 3), (2, 5), (3, 4)] {
        for big_a in [2.0, 3.0] {
            let (g, gs) = transverse_torus_pair(big_a, p, q, 1536).unwrap();
            let st = Stereographic::avoiding(&[&g, &gs], 3).unwrap();
            for path in [&g, &gs] {
                let b = bennequin(path, 2.0 * PI, &st, 3).unwrap();
                assert_eq!(b.e1.linking, b.e2.linking, "({p}, {q}), A = {big_a}");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 20);
}

#[test]
fn stereographic_projection_is_conformal() {
    let st = Stereographic::new([0.0, 0.0, 0.0, 1.0]).unwrap();
    let p = [0.5, 0.5, 0.5, -0.5];
    let (e1, e2) = contact_frame(&p);
    let (v1, v2) = (st.push(&p, &e1).unwrap(), st.push(&p, &e2).unwrap());
    assert!(v1.dot(&v2).abs() < 1e-14);
    assert!((v1.norm() - v2.norm()).abs() < 1e-14);
    assert!(st.map(&[0.0, 0.0, 0.0, 1.0]).is_err());
}
