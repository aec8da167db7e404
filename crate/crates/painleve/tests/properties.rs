use std::collections::BTreeMap;
use std::sync::OnceLock;

use exactalg::rational::rat;
use exactalg::{MultiPoly, PuiseuxSeries, Rat};
use painleve::*;
use proptest::prelude::*;
use sysdsl::{builtin, VectorFieldSystem};

fn families() -> &'static Vec<(VectorFieldSystem, LaurentFamily)> {
    static F: OnceLock<Vec<(VectorFieldSystem, LaurentFamily)>> = OnceLock::new();
    F.get_or_init(|| {
        let mut out = Vec::new();
        for name in ["henon-heiles", "rdg", "rdg-5", "kvm"] {
            let sys = builtin::load(name).unwrap();
            for wv in detect_weights(&sys) {
                for b in indicial_solve(&sys, &wv).unwrap() {
                    let k = kowalewski(&sys, &b).unwrap();
                    if let Ok(f) = propagate(&sys, &b, effective_order(None, &k)) {
                        out.push((sys.clone(), f));
                    }
                }
            }
        }
        out
    })
}

fn specialize(s: &PuiseuxSeries, point: &BTreeMap<String, MultiPoly>) -> PuiseuxSeries {
    s.map_coeffs(|c| c.substitute(point).compact())
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..10, 1i64..5).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn specialized_families_solve_the_system(idx in 0usize..64, vals in prop::collection::vec(small_rat(), 6)) {
        let fams = families();
        let (sys, fam) = &fams[idx % fams.len()];
        let mut point = BTreeMap::new();
        for (k, p) in fam.free_parameters.iter().chain(&fam.constants).enumerate() {
            point.insert(p.clone(), MultiPoly::constant(vals[k % vals.len()].clone()));
        }
        let series: BTreeMap<String, PuiseuxSeries> =
            fam.series_map().into_iter().map(|(v, s)| (v, specialize(&s, &point))).collect();
        for (v, f) in sys.vars().iter().zip(sys.equations()) {
            let f = f.substitute(&point);
            let diff = &series[v].derivative() - &PuiseuxSeries::eval_poly(&f, &series);
            prop_assert!(diff.terms().all(|(_, c)| c.is_zero()), "{} {}", sys.name(), v);
        }
        for (name, h) in sys.invariants() {
            let h = h.substitute(&point);
            let s = PuiseuxSeries::eval_poly(&h, &series);
            prop_assert!(s.terms().all(|(k, c)| k >= 0 || c.is_zero()), "{} {}", sys.name(), name);
        }
    }
}
