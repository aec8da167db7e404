use exactalg::MultiPoly;
use sysdsl::{builtin, parse_system};

#[test]
fn every_builtin_round_trips() {
    for name in builtin::names() {
        let sys = builtin::load(name).unwrap();
        let again = parse_system(&sys.to_ivf()).unwrap();
        assert_eq!(again, sys, "{name}");
        assert_eq!(again.to_ivf(), sys.to_ivf(), "{name}");
    }
}

#[test]
fn declared_hamiltonian_generates_the_equations() {
    for name in builtin::names() {
        let sys = builtin::load(name).unwrap();
        let h = sys.hamiltonian().unwrap();
        assert_eq!(sys.hamiltonian_vector_field(h).unwrap(), sys.equations().to_vec(), "{name}");
    }
}

#[test]
fn invariants_are_conserved() {
    for name in builtin::names() {
        let sys = builtin::load(name).unwrap();
        for (n, f) in sys.invariants() {
            assert!(sys.time_derivative(f).is_zero(), "{name}: d{n}/dt = {}", sys.time_derivative(f));
        }
    }
}

#[test]
fn involutions_and_casimirs() {
    for name in builtin::names() {
        let sys = builtin::load(name).unwrap();
        for (f, g) in sys.involutions() {
            let b = sys.bracket(sys.invariant(f).unwrap(), sys.invariant(g).unwrap()).unwrap();
            assert!(b.is_zero(), "{name}: {{{f}, {g}}} = {b}");
        }
        for c in sys.casimirs() {
            let v = sys.hamiltonian_vector_field(c).unwrap();
            assert!(v.iter().all(MultiPoly::is_zero), "{name}: {c} is not a Casimir");
        }
    }
}

#[test]
fn kvm_shape() {
    let sys = builtin::load("kvm").unwrap();
    assert_eq!(sys.dim(), 5);
    assert_eq!(sys.invariants().len(), 3);
    assert_eq!(sys.equations()[0].to_string(), "-x1*x2 + x1*x5");
}

#[test]
fn henon_heiles_five_variable_field() {
    let sys = builtin::load("henon-heiles-5").unwrap();
    let f1 = sys.hamiltonian_vector_field("F1").unwrap();
    assert_eq!(f1[3].to_string(), "-8/3*z1*z2 - z1*A + 1/3*z5");
    assert!(sys.hamiltonian_vector_field("F3").unwrap().iter().all(MultiPoly::is_zero));
}

#[test]
fn unknown_names() {
    let sys = builtin::load("oscillator").unwrap();
    assert!(sys.hamiltonian_vector_field("nope").is_err());
    assert!(builtin::load("nope").is_none());
    let bare = parse_system("system s\nvars x\neq x = x\ninvariant H = x\n").unwrap();
    assert!(matches!(bare.hamiltonian_vector_field("H"), Err(sysdsl::DslError::MissingPoisson(_))));
}

#[test]
fn shipped_morphisms_parse() {
    for (a, b) in builtin::morphism_names() {
        let (_, dst, m) = builtin::morphism(a).unwrap();
        assert_eq!(m.source, a);
        assert_eq!(m.target, b);
        assert_eq!(m.components.len(), dst.dim());
    }
}

#[test]
fn morphism_errors() {
    let src = builtin::load("henon-heiles").unwrap();
    let dst = builtin::load("henon-heiles-5").unwrap();
    let missing = "morphism a -> b\nz1 = y1^2\n";
    assert!(matches!(sysdsl::parse_morphism(missing, &src, &dst), Err(sysdsl::DslError::Dimension(_))));
    let unknown = "morphism a -> b\nw = y1\n";
    assert!(matches!(sysdsl::parse_morphism(unknown, &src, &dst), Err(sysdsl::DslError::Undeclared { .. })));
    let twice = "morphism a -> b\nz1 = y1\nz1 = y2\n";
    assert!(matches!(sysdsl::parse_morphism(twice, &src, &dst), Err(sysdsl::DslError::Invalid { line: 3, .. })));
    let bad_sym = "morphism a -> b\nz1 = q1\n";
    assert!(matches!(sysdsl::parse_morphism(bad_sym, &src, &dst), Err(sysdsl::DslError::Undeclared { .. })));
}
