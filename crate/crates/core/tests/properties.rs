use proptest::prelude::*;
use timelike::elliptic::*;
use timelike::frames::{algebra_defect, frenet_matrix};
use timelike::geometry::{convert, gram_product, BasisKind};
use timelike::homogeneous::{classify, curvatures_from_params, in_domain, HomogeneousClass, HomogeneousParams};
use timelike::symplectic::{lifted_frenet, rho, rho_star, symplectic_defect};

fn basis() -> impl Strategy<Value = BasisKind> {
    prop_oneof![Just(BasisKind::Mobius), Just(BasisKind::Poincare), Just(BasisKind::Lie)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_changes_preserve_the_form(
        u in prop::array::uniform5(-3.0f64..3.0),
        v in prop::array::uniform5(-3.0f64..3.0),
        from in basis(),
        to in basis(),
    ) {
        let a = gram_product(&u, &v, &from.gram());
        let b = gram_product(&convert(&u, from, to), &convert(&v, from, to), &to.gram());
        prop_assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn jacobi_identities(u in -20.0f64..20.0, m in 0.0f64..0.999) {
        let (sn, cn, dn) = jacobi_sncndn(u, m).unwrap();
        prop_assert!((sn * sn + cn * cn - 1.0).abs() < 1e-13);
        prop_assert!((dn * dn + m * sn * sn - 1.0).abs() < 1e-13);
        let am = jacobi_am(u, m).unwrap();
        prop_assert!((ellip_f(am, m).unwrap() - u).abs() < 1e-10 * (1.0 + u.abs()));
    }

    #[test]
    fn quarter_period_shift(u in -5.0f64..5.0, m in 0.0f64..0.99) {
        let k = ellip_k(m).unwrap();
        let (sn, cn, dn) = jacobi_sncndn(u, m).unwrap();
        let s = jacobi_sn(u + k, m).unwrap();
        prop_assert!((s - cn / dn).abs() < 1e-11, "sn(u+K) {s} vs cd {}", cn / dn);
        prop_assert!((jacobi_sn(u + 2.0 * k, m).unwrap() + sn).abs() < 1e-11);
    }

    #[test]
    fn lifted_frenet_is_a_lift(h in -5.0f64..5.0, k in -5.0f64..5.0) {
        prop_assert!((rho_star(&lifted_frenet(h, k)) - frenet_matrix(h, k)).amax() < 1e-14);
        prop_assert!(algebra_defect(&frenet_matrix(h, k)) < 1e-14);
    }

    #[test]
    fn covering_of_one_parameter_groups(h in -2.0f64..2.0, k in -2.0f64..2.0, u in -2.0f64..2.0) {
        let x = (lifted_frenet(h, k) * u).exp();
        prop_assert!(symplectic_defect(&x) < 1e-11 * x.amax().powi(2).max(1.0));
        let g = rho(&x).unwrap();
        let m = (frenet_matrix(h, k) * u).exp();
        prop_assert!((g - m).amax() < 1e-10 * m.amax().max(1.0));
    }

    #[test]
    fn regular_parameters_land_in_their_stratum(a in 0.0f64..1.0, b in 0.0f64..4.0) {
        for class in [HomogeneousClass::C2i, HomogeneousClass::C2ii, HomogeneousClass::C4] {
            let inner = [(-0.02, -0.02), (-0.02, 0.02), (0.02, -0.02), (0.02, 0.02)]
                .iter()
                .all(|(da, db)| in_domain(class, a + da, b + db));
            if inner {
                let (k, h) = curvatures_from_params(class, &HomogeneousParams::new(a, b)).unwrap();
                prop_assert_eq!(classify(k, h).unwrap(), class);
            }
        }
    }
}
