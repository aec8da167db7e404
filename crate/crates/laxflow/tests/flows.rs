use laxflow::builtins::*;
use laxflow::*;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_toda(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    flaschka(&x, &y, true).unwrap()
}

fn random_skew(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    &m - m.transpose()
}

fn lax_derivative(a: &MatrixPencil, b: &MatrixPencil) -> MatrixPencil {
    let (l, h) = a.h_range();
    a.commutator(b).unwrap().restrict(l, h, 1e-12).unwrap()
}

#[test]
fn toda_lax_pair_reproduces_flaschka_equations() {
    for periodic in [true, false] {
        let (mut a, b) = random_toda(4, 3);
        if !periodic {
            a.pop();
        }
        let p = if periodic { toda_periodic(&a, &b) } else { toda_open(&a, &b) }.unwrap();
        let lhs = lax_derivative(&p, &toda_b(&p).unwrap());
        let (da, db) = toda_rhs(&a, &b, periodic);
        let rhs = if periodic { toda_periodic(&da, &db) } else { toda_open(&da, &db) }.unwrap();
        let diff = (0..3).map(|i| i + lhs.low()).filter_map(|k| Some((lhs.coeff(k)? - rhs.coeff(k)?).amax())).fold(0.0, f64::max);
        assert!(diff < 1e-12, "periodic={periodic}: {diff}");
    }
}

#[test]
fn frozen_flow_has_zero_drift() {
    let (a, b) = random_toda(3, 1);
    let p = toda_periodic(&a, &b).unwrap();
    let zero = MatrixPencil::zeros(3, 0, 0);
    let t = integrate_lax(p.clone(), |_| Ok(zero.clone()), &StepConfig::new(0.1, 1.0)).unwrap();
    assert_eq!(t.last(), &p);
    assert_eq!(isospectral_drift(&t, &[0.5, 1.0, 2.0], 3).unwrap(), 0.0);
}

#[test]
fn periodic_toda_is_isospectral() {
    let (a, b) = random_toda(3, 7);
    let p = toda_periodic(&a, &b).unwrap();
    let t = integrate_lax(p, toda_b, &StepConfig::new(1e-3, 1.0)).unwrap();
    let drift = isospectral_drift(&t, &[0.5, 1.0, -1.5, 2.0], 3).unwrap();
    assert!(drift < 1e-8, "{drift}");
    assert!(t.states.iter().all(|s| toda_coordinates(s).0.iter().all(|x| *x > 0.0)));
    let c0 = pencil_charpoly(t.first()).unwrap();
    let c1 = pencil_charpoly(t.last()).unwrap();
    assert!(c0.max_diff(&c1) < 1e-8);
}

#[test]
fn rk4_converges_at_fourth_order() {
    let (a, b) = random_toda(3, 7);
    let p = toda_periodic(&a, &b).unwrap();
    let (errs, ratios) = convergence_study(0.05, 3, |dt| {
        let t = integrate_lax(p.clone(), toda_b, &StepConfig::new(dt, 1.0))?;
        isospectral_rms_drift(&t, &[1.0, 2.0], 3)
    })
    .unwrap();
    assert!(ratios.iter().all(|r| (12.0..=20.0).contains(r)), "{errs:?} {ratios:?}");

    let ea = EulerArnold::new(vec![1.0, 2.0, 3.5, 5.0], vec![0.3, -0.4, 0.9, 0.2]).unwrap();
    let q = ea.pencil(&random_skew(4, 11)).unwrap();
    let (errs, ratios) = convergence_study(0.025, 3, |dt| {
        let t = integrate_lax(q.clone(), |a| ea.b(a), &StepConfig::new(dt, 1.0))?;
        isospectral_rms_drift(&t, &[0.7, 1.3], 4)
    })
    .unwrap();
    assert!(ratios.iter().all(|r| (12.0..=20.0).contains(r)), "{errs:?} {ratios:?}");
}

#[test]
fn euler_arnold_conserves_traces() {
    let ea = EulerArnold::new(vec![1.0, 2.0, 3.5, 5.0], vec![0.3, -0.4, 0.9, 0.2]).unwrap();
    let x = random_skew(4, 11);
    let p = ea.pencil(&x).unwrap();
    let t = integrate_lax(p, |a| ea.b(a), &StepConfig::new(1e-3, 1.0)).unwrap();
    assert!(isospectral_drift(&t, &[0.0, 0.7, 1.3], 4).unwrap() < 1e-8);
    let tr2 = |m: &DMatrix<f64>| (m * m).trace();
    let d = t.states.iter().map(|s| (tr2(s.coeff(0).unwrap()) - tr2(&x)).abs()).fold(0.0, f64::max);
    assert!(d < 1e-8, "{d}");
    // h^0 block obeys X' = [X, lambda X]
    let lhs = lax_derivative(t.first(), &ea.b(t.first()).unwrap());
    let lx = ea.b(t.first()).unwrap().coeff(0).unwrap().clone();
    assert!((lhs.coeff(0).unwrap() - (&x * &lx - &lx * &x)).amax() < 1e-12);
    assert!(lhs.coeff(1).unwrap().amax() < 1e-12);
}

#[test]
fn manakov_pencil_is_a_lax_pair_for_the_rigid_body() {
    let mk = Manakov::new(vec![1.0, 1.5, 2.25, 3.0]).unwrap();
    let m = random_skew(4, 5);
    let p = mk.pencil(&m).unwrap();
    let t = integrate_lax(p.clone(), |a| mk.b(a), &StepConfig::new(1e-3, 1.0)).unwrap();
    assert!(isospectral_drift(&t, &[0.5, 1.0, -2.0], 4).unwrap() < 1e-8);
    let e = |s: &MatrixPencil| mk.energy(s.coeff(0).unwrap());
    assert!((e(t.first()) - e(t.last())).abs() < 1e-10);
    let curve = pencil_charpoly(&p).unwrap();
    assert!(curve.sign_involution_defect() < 1e-9);
}

#[test]
fn rank_two_flows_are_isospectral() {
    let alpha = vec![1.0, 2.0, 3.0, 4.5];
    let x0 = [0.5, 0.5, 0.5, 0.5];
    let y0 = [0.3, -0.1, 0.2, -0.4];
    for sys in [RankTwo::neumann(alpha.clone()).unwrap(), RankTwo::jacobi_geodesic(alpha.clone()).unwrap()] {
        let s0: Vec<f64> = x0.iter().chain(&y0).copied().collect();
        // Lax equation along the vector field
        let eps = 1e-6;
        let f = sys.rhs(&s0).unwrap();
        let plus = sys.pencil(&s0.iter().zip(&f).map(|(s, d)| s + eps * d).collect::<Vec<_>>()).unwrap();
        let minus = sys.pencil(&s0.iter().zip(&f).map(|(s, d)| s - eps * d).collect::<Vec<_>>()).unwrap();
        let a = sys.pencil(&s0).unwrap();
        let lax = lax_derivative(&a, &sys.b(&s0).unwrap());
        for k in 0..=2 {
            let fd = (plus.coeff(k).unwrap() - minus.coeff(k).unwrap()) / (2.0 * eps);
            assert!((fd - lax.coeff(k).unwrap()).amax() < 1e-7);
        }
        let t = sys.integrate(s0, &StepConfig::new(1e-3, 1.0)).unwrap();
        let pencils = t.map(|s| sys.pencil(s).unwrap());
        assert!(isospectral_drift(&pencils, &[0.5, 1.0, 1.7], 4).unwrap() < 1e-8);
    }
}

#[test]
fn non_commutator_flow_drifts() {
    let (a, b) = random_toda(3, 2);
    let p = toda_periodic(&a, &b).unwrap();
    let bp = toda_b(&p).unwrap();
    let sym = MatrixPencil::new(-1, vec![bp.coeff(-1).unwrap().clone(), DMatrix::identity(3, 3) + bp.coeff(0).unwrap(), bp.coeff(1).unwrap().clone()]).unwrap();
    let t = integrate_pencil_field(p, |_| Ok(sym.clone()), &StepConfig::new(1e-3, 1.0)).unwrap();
    assert!(isospectral_drift(&t, &[1.0], 3).unwrap() > 1e-3);
}

#[test]
fn step_size_and_blowup_errors() {
    let p = MatrixPencil::constant(DMatrix::identity(2, 2)).unwrap();
    assert!(matches!(integrate_pencil_field(p.clone(), |a| Ok(a.clone()), &StepConfig::new(0.0, 1.0)), Err(LaxError::StepSize(_))));
    let mut cfg = StepConfig::new(0.1, 100.0);
    cfg.blowup = 1e6;
    match integrate_pencil_field(p, |a| Ok(a.clone()), &cfg) {
        Err(LaxError::BlowUp { time, .. }) => assert!((13.0..15.0).contains(&time), "{time}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn step_count_lands_on_end_time() {
    let y = integrate_pencil_field(MatrixPencil::constant(DMatrix::zeros(1, 1)).unwrap(), |_| Ok(MatrixPencil::constant(DMatrix::identity(1, 1)).unwrap()), &StepConfig::new(0.3, 1.0).with_stride(2)).unwrap();
    assert_eq!(*y.times.last().unwrap(), 1.0);
    assert!((y.last().coeff(0).unwrap()[(0, 0)] - 1.0).abs() < 1e-14);
    assert_eq!(y.times, vec![0.0, 0.6, 1.0]);
}
