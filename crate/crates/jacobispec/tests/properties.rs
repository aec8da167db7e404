use exactalg::rational::rat;
use jacobispec::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = PeriodicJacobi> {
    (2usize..=4).prop_flat_map(|n| {
        (
            prop::collection::vec((1i64..=12, prop::bool::ANY), n),
            prop::collection::vec(-8i64..=8, n),
        )
            .prop_map(|(a, b)| {
                let a = a.into_iter().map(|(k, neg)| rat(if neg { -k } else { k }, 4)).collect();
                let b = b.into_iter().map(|k| rat(k, 4)).collect();
                PeriodicJacobi::new(a, b).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn curve_reconstructs_determinant(m in matrix(), r in 0.2f64..4.0, th in 0.0f64..6.3, x in -3.0f64..3.0, y in -3.0f64..3.0) {
        let h = Complex64::from_polar(r, th);
        let z = Complex64::new(x, y);
        let d = m.pencil_det(h, z);
        prop_assert!((m.curve(h, z) - d).norm() < 1e-10 * (1.0 + d.norm()));
        prop_assert!((m.pencil_det(1.0 / h, z) - d).norm() < 1e-10 * (1.0 + d.norm()));
    }

    #[test]
    fn interlacing_and_positive_measure(m in matrix()) {
        // negative off-diagonals only flip alpha's sign; the measure stays positive
        let sd = spectral_data(&m).unwrap();
        prop_assert_eq!(sd.branch_points.len(), 2 * m.n());
        let mu = measure_from_spectral(&m, &sd, 1.0).unwrap();
        prop_assert!(mu.atoms.iter().all(|a| a.mass > 0.0));
        for band in &mu.bands {
            for k in 1..20 {
                let x = band.lo + (band.hi - band.lo) * k as f64 / 20.0;
                prop_assert!(mu.density(x) >= 0.0);
            }
        }
        prop_assert!((mu.total_mass().unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn convergents_equal_fraction(m in matrix(), k in 1usize..10, x in -3.0f64..3.0, y in 0.5f64..3.0) {
        let (a, b) = m.sequences(k);
        let (pa, pb) = pade(&a, &b, 0.75, k).unwrap();
        let z = Complex64::new(x, y);
        let ev = |p: &[f64]| p.iter().rev().fold(Complex64::new(0.0, 0.0), |s, c| s * z + c);
        let f = gamma_fraction(&a, &b, 0.75, z, k).unwrap();
        prop_assert!((ev(&pa) / ev(&pb) - f).norm() < 1e-12 * (1.0 + f.norm()));
    }
}
