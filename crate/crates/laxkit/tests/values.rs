use exactalg::rational::{int, rat};
use laxkit::values::{parse_bindings, parse_list, parse_rational};
use proptest::prelude::*;

#[test]
fn decimal_forms() {
    assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
    assert_eq!(parse_rational("-2.5e-3").unwrap(), rat(-1, 400));
    assert_eq!(parse_rational("+.5").unwrap(), rat(1, 2));
    assert_eq!(parse_rational("3.").unwrap(), int(3));
    assert_eq!(parse_rational("7/-14").ok(), parse_rational("-1/2").ok());
    assert_eq!(parse_rational("1E2").unwrap(), int(100));
    for bad in ["", ".", "-", "1e", "1.2.3", "abc", "1e99999", "0x10", "1/0"] {
        assert!(parse_rational(bad).is_err(), "{bad}");
    }
}

#[test]
fn lists_and_bindings() {
    assert_eq!(parse_list("1, 1/2,-0.25").unwrap(), vec![int(1), rat(1, 2), rat(-1, 4)]);
    let b = parse_bindings(&["A=1/4".into(), "B=2".into(), "A=3".into()]).unwrap();
    assert_eq!(b["A"], int(3));
    assert_eq!(b.len(), 2);
    assert!(parse_bindings(&["A".into()]).is_err());
    assert!(parse_bindings(&["=1".into()]).is_err());
}

proptest! {
    #[test]
    fn scientific_matches_fraction(m in -1_000_000i64..1_000_000, k in 0i64..12) {
        let expected = rat(m, 10i64.pow(k as u32));
        prop_assert_eq!(parse_rational(&format!("{m}e-{k}")).unwrap(), expected.clone());
        prop_assert_eq!(parse_rational(&format!("{m}/{}", 10i64.pow(k as u32))).unwrap(), expected);
    }

    #[test]
    fn float_display_round_trips(x in -1e6f64..1e6) {
        let r = parse_rational(&format!("{x}")).unwrap();
        prop_assert_eq!(exactalg::rational::to_f64(&r), x);
    }
}
