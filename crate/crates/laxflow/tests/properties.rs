use laxflow::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn block(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| DMatrix::from_vec(n, n, v))
}

fn pencil() -> impl Strategy<Value = MatrixPencil> {
    (2usize..5, -1i32..1, 1usize..3)
        .prop_flat_map(|(n, low, len)| (Just(low), prop::collection::vec(block(n), len)))
        .prop_map(|(low, blocks)| MatrixPencil::new(low, blocks).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interpolated_curve_matches_determinants(p in pencil(), z in -2.0f64..2.0, h in 0.3f64..1.8) {
        let c = pencil_charpoly(&p).unwrap();
        let d = (p.eval(h).unwrap() - DMatrix::identity(p.dim(), p.dim()) * z).determinant();
        prop_assert!((c.eval(z, h) - d).abs() < 1e-7 * (1.0 + d.abs()), "{} vs {}", c.eval(z, h), d);
    }

    #[test]
    fn commutators_are_trace_free(a in pencil(), hseed in 0.3f64..1.8) {
        let b = MatrixPencil::new(0, vec![a.coeffs()[0].transpose()]).unwrap();
        let c = a.commutator(&b).unwrap();
        prop_assert!(c.eval(hseed).unwrap().trace().abs() < 1e-10);
    }

    #[test]
    fn rigid_body_prym_is_half_the_orbit(n in 3u32..200) {
        let d = rigid_body_dims(n).unwrap();
        prop_assert_eq!(2 * d.dim_prym, d.dim_orbit);
    }
}
