use exactalg::rational::{int, rat};
use exactalg::Rat;
use laxflow::builtins::*;
use laxflow::*;
use nalgebra::DMatrix;

#[test]
fn constant_diagonal_pencil() {
    let p = MatrixPencil::constant(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0]))).unwrap();
    let c = pencil_charpoly(&p).unwrap();
    // (1 - z)(2 - z) = 2 - 3z + z^2
    assert_eq!(c.significant(1e-12), vec![((0, 0), 2.0), ((1, 0), -3.0), ((2, 0), 1.0)]);
}

#[test]
fn periodic_toda_curve_structure() {
    let (a, b) = (vec![0.7, 1.1, 0.4], vec![0.2, -0.5, 0.3]);
    let p = toda_periodic(&a, &b).unwrap();
    let c = pencil_charpoly(&p).unwrap();
    let alpha = a.iter().product::<f64>();
    // h enters only through alpha (h + 1/h), with the sign of an even 3-cycle
    assert!((c.coeff(0, 1) - alpha).abs() < 1e-12 && (c.coeff(0, -1) - alpha).abs() < 1e-12);
    for (&(j, k), v) in &c.coeffs {
        if k != 0 && (j, k.abs()) != (0, 1) {
            assert!(v.abs() < 1e-12, "z^{j} h^{k}: {v}");
        }
    }
    assert!(c.reciprocal_defect() < 1e-12);
    assert!((c.coeff(3, 0) + 1.0).abs() < 1e-12);
    // agrees with direct determinants off the nodes
    for (z, h) in [(0.3, 0.8), (-1.2, 2.7), (2.0, -0.35)] {
        let d = (p.eval(h).unwrap() - DMatrix::identity(3, 3) * z).determinant();
        assert!((c.eval(z, h) - d).abs() < 1e-10);
    }
}

#[test]
fn exact_and_float_interpolation_agree() {
    let q = RankTwo::rational_pencil(&[int(1), int(2), int(4)], &[rat(1, 3), rat(2, 3), rat(2, 3)], &[rat(1, 2), int(-1), rat(1, 5)]).unwrap();
    let exact = pencil_charpoly_exact(&q).unwrap();
    let float = pencil_charpoly(&q.to_float()).unwrap();
    assert!(exact.max_diff(&float) < 1e-9);
}

#[test]
fn duplicate_nodes_are_rejected() {
    let p = MatrixPencil::new(0, vec![DMatrix::identity(2, 2), DMatrix::identity(2, 2)]).unwrap();
    assert!(matches!(pencil_charpoly_at(&p, &[1.0, 2.0, 1.0]), Err(LaxError::SingularInterpolation(_))));
}

#[test]
fn manakov_curve_has_sign_involution() {
    let mk = Manakov::new(vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let m = DMatrix::from_fn(5, 5, |i, j| if i < j { (i + 2 * j) as f64 / 7.0 } else if i > j { -((j + 2 * i) as f64) / 7.0 } else { 0.0 });
    let c = pencil_charpoly(&mk.pencil(&m).unwrap()).unwrap();
    assert!(c.sign_involution_defect() < 1e-8);
    // a symmetric pencil breaks it
    let s = MatrixPencil::new(0, vec![m.abs(), DMatrix::identity(5, 5)]).unwrap();
    assert!(pencil_charpoly(&s).unwrap().sign_involution_defect() > 1e-3);
}

#[test]
fn rank_two_curves_are_hyperelliptic_with_2n_branch_points() {
    let cases: Vec<(Vec<Rat>, Vec<Rat>, Vec<Rat>)> = vec![
        (vec![int(1), int(2), int(4)], vec![rat(1, 3), rat(2, 3), rat(2, 3)], vec![rat(1, 2), int(-1), rat(1, 5)]),
        (
            vec![int(1), int(2), int(3), int(5)],
            vec![rat(1, 2), rat(1, 2), rat(1, 2), rat(1, 2)],
            vec![rat(3, 10), rat(-1, 10), rat(1, 5), rat(-2, 5)],
        ),
        (
            vec![int(-1), rat(1, 2), int(2), int(3), int(7)],
            vec![rat(2, 7), rat(3, 7), rat(6, 7), int(0), int(0)],
            vec![int(1), int(2), int(-1), int(3), rat(1, 2)],
        ),
    ];
    for (alpha, x, y) in cases {
        let n = alpha.len();
        let c = pencil_charpoly_exact(&RankTwo::rational_pencil(&alpha, &x, &y).unwrap()).unwrap();
        let d = rank_two_branch_points(&c).unwrap();
        assert_eq!(d.branch_points, 2 * n, "n = {n}: {d:?}");
        assert_eq!(d.genus, n - 1);
    }
}

#[test]
fn curve_coefficients_are_constant_along_the_flow() {
    let rt = RankTwo::neumann(vec![1.0, 2.0, 4.0]).unwrap();
    let s0 = vec![1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, 0.5, -1.0, 0.2];
    let t = rt.integrate(s0, &StepConfig::new(1e-3, 1.0)).unwrap();
    let c0 = pencil_charpoly(&rt.pencil(t.first()).unwrap()).unwrap();
    let c1 = pencil_charpoly(&rt.pencil(t.last()).unwrap()).unwrap();
    assert!(c0.max_diff(&c1) < 1e-8, "{}", c0.max_diff(&c1));
}

#[test]
fn kvm_curve_polynomial() {
    let k = kvm_curve(2.0, 3.0, 0.5);
    // (z^3 - 3 z^2 + 2 z)^2 - 2 z
    assert_eq!(k.polynomial, vec![0.0, -2.0, 4.0, -12.0, 13.0, -6.0, 1.0]);
}
