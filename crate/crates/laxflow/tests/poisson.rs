use std::collections::HashMap;

use exactalg::rational::int;
use laxflow::builtins::kvm_curve;
use laxflow::*;
use sysdsl::builtin;

fn load(name: &str) -> sysdsl::VectorFieldSystem {
    builtin::load(name).unwrap()
}

#[test]
fn declared_involutions_vanish_identically() {
    for name in ["henon-heiles", "henon-heiles-5", "rdg-5", "kvm"] {
        let sys = load(name);
        assert!(!sys.involutions().is_empty(), "{name}");
        for (f, g) in sys.involutions() {
            assert!(bracket_polynomial(&sys, f, g).unwrap().is_zero(), "{name}: {{{f},{g}}}");
        }
        for c in sys.casimirs() {
            assert!(hamiltonian_field(&sys, c).unwrap().iter().all(|p| p.is_zero()), "{name}: {c}");
        }
        for (f, _) in sys.invariants() {
            assert!(bracket_polynomial(&sys, f, f).unwrap().is_zero());
        }
    }
}

#[test]
fn hamiltonian_generates_the_vector_field() {
    for name in ["henon-heiles", "henon-heiles-5", "rdg-5", "kvm"] {
        let sys = load(name);
        let h = sys.hamiltonian().unwrap();
        let field = hamiltonian_field(&sys, h).unwrap();
        for (p, q) in field.iter().zip(sys.equations()) {
            assert!((p - q).compact().is_zero(), "{name}");
        }
    }
}

#[test]
fn exact_bracket_values_at_points() {
    let sys = load("kvm");
    let pts = random_points(5, 4, 9);
    let v = poisson_bracket(&sys, "x1", "x2", &pts).unwrap();
    for (p, b) in pts.iter().zip(v) {
        assert_eq!(b, -(&p[0] * &p[1]));
    }
    assert!(matches!(poisson_bracket(&sys, "H9", "H1", &pts), Err(LaxError::Unknown(_))));
}

#[test]
fn jacobi_identity_holds_for_builtins() {
    for name in ["henon-heiles", "henon-heiles-5", "rdg-5", "kvm"] {
        let sys = load(name);
        let triples = coordinate_triples(&sys);
        let pts = random_points(sys.dim(), 3, 1);
        let bound = sys.consts().iter().fold(sys.clone(), |s, c| s.bind(c, &int(3)).unwrap());
        assert!(jacobi_identity_check(&bound, &triples, &pts).unwrap().passed(), "{name}");
        // exact expansion mode keeps the constants symbolic
        assert!(jacobi_identity_check(&sys, &triples, &[]).unwrap().passed(), "{name}");
    }
}

#[test]
fn corrupted_poisson_matrix_fails_with_witness() {
    let sys = load("henon-heiles-5");
    let bad = flip_poisson_entry(&sys, 0, 3).unwrap().bind("A", &int(2)).unwrap();
    let r = jacobi_identity_check(&bad, &coordinate_triples(&bad), &random_points(5, 3, 4)).unwrap();
    let w = r.witness.expect("a nonzero Jacobiator");
    assert_eq!(w.point.len(), 5);
    assert_ne!(w.value, "0");
    assert!(flip_poisson_entry(&sys, 2, 2).is_err());
}

#[test]
fn kvm_invariants_are_conserved_by_rk4() {
    let sys = load("kvm");
    let c = CompiledSystem::new(&sys, &HashMap::new()).unwrap();
    let x0 = vec![0.9, 1.3, 0.6, 1.1, 0.8];
    let t = c.integrate(x0, &StepConfig::new(1e-3, 1.0)).unwrap();
    let drift = invariant_drift(&c, &t);
    assert_eq!(drift.len(), 3);
    assert!(drift.iter().all(|d| *d < 1e-9), "{drift:?}");
    let v = c.invariant_values(t.last());
    let k = kvm_curve(v[0], v[1], v[2]);
    assert_eq!(k.polynomial.len(), 7);
}

#[test]
fn unbound_constants_are_reported() {
    let sys = load("henon-heiles");
    assert!(matches!(CompiledSystem::new(&sys, &HashMap::new()), Err(LaxError::Params(_))));
}

#[test]
fn rigid_body_dimension_identities() {
    for n in 3..=50 {
        let d = rigid_body_dims(n).unwrap();
        assert_eq!(2 * d.dim_prym, d.dim_orbit);
        assert_eq!(d.genus_c - d.genus_c0, d.dim_prym);
    }
}
