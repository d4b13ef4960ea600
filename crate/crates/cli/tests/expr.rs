use kahlerq::{JetPoly, Key, Scalar, WeylForm};
use kahlerq_cli::expr::{normalize, parse, print, ExprError};
use proptest::prelude::*;

fn zzb() -> WeylForm {
    WeylForm::from_jet(&JetPoly::z(1, 0).mul(&JetPoly::zb(1, 0)))
}

#[test]
fn zzb_minus_h() {
    let w = parse("z1*zb1 - h", 1).unwrap();
    assert_eq!(w, zzb().sub(&WeylForm::hbar(1)));
    assert_eq!(print(&w), "z1*zb1 - h");
}

#[test]
fn half_i_z_squared() {
    let w = parse("(1/2)*i*z1^2", 1).unwrap();
    let z2 = WeylForm::from_jet(&JetPoly::z(1, 0).pow(2));
    assert_eq!(w, z2.scale(&Scalar::imag_ratio(1, 2)));
    assert_eq!(print(&w), "(1/2)*i*z1^2");
}

#[test]
fn dangling_plus_is_a_syntax_error_at_four() {
    match parse("z1 +", 1) {
        Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, 4),
        other => panic!("{other:?}"),
    }
}

#[test]
fn variable_index_out_of_range() {
    assert!(matches!(parse("z2", 1), Err(ExprError::UnknownVariable { offset: 0, .. })));
    assert!(matches!(parse("1 + zb0", 2), Err(ExprError::UnknownVariable { offset: 4, .. })));
    assert!(matches!(parse("x", 1), Err(ExprError::UnknownVariable { .. })));
    assert!(parse("z2*zb2", 2).is_ok());
}

#[test]
fn other_syntax_errors() {
    for (text, at) in [("", 0), ("(z1", 3), ("z1 ^ zb1", 5), ("1/0", 2), ("z1 $ 2", 3), ("z1 z1", 3), ("2^-1", 2)] {
        match parse(text, 1) {
            Err(ExprError::Syntax { offset, .. }) => assert_eq!(offset, at, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn whitespace_and_precedence() {
    assert_eq!(parse(" -z1 ^ 2 ", 1).unwrap(), parse("-(z1^2)", 1).unwrap());
    assert_eq!(parse("2*3 + 1", 1).unwrap(), parse("7", 1).unwrap());
    assert_eq!(parse("(1 + i)^2", 1).unwrap(), parse("2*i", 1).unwrap());
    assert_eq!(parse("h*h - h^2", 1).unwrap(), WeylForm::zero(1));
    assert_eq!(parse("0", 1).unwrap().to_string(), "0");
}

#[test]
fn printer_cases() {
    let cases = [
        ("zb1*z1", "z1*zb1"),
        ("h + 1", "1 - -h"),
        ("-1 + 0*z1", "-1"),
        ("(2 - 3*i)*z1", "(2 - 3*i)*z1"),
        ("-i*z1 + i", "i - i*z1"),
        ("(1/3 + (1/2)*i)*h^2", "(1/3 + (1/2)*i)*h^2"),
        ("z2 + z1 + zb1*zb2", "z1 + z2 + zb1*zb2"),
    ];
    for (input, expect) in cases {
        let expect = normalize(expect, 2).unwrap();
        assert_eq!(normalize(input, 2).unwrap(), expect, "{input}");
    }
    assert_eq!(normalize("h + 1", 1).unwrap(), "1 + h");
    assert_eq!(normalize("(1/3 + (1/2)*i)*h^2", 1).unwrap(), "(1/3 + (1/2)*i)*h^2");
    assert_eq!(normalize("-(2/4)*zb1", 1).unwrap(), "-(1/2)*zb1");
}

#[test]
fn printer_shows_fiber_variables() {
    let w = WeylForm::monomial(1, Key { hbar: kahlerq::HalfInt::from_int(1), ..Key::ONE }, Scalar::one())
        .mul(&WeylForm::y(1, 0))
        .mul(&WeylForm::yb(1, 0));
    assert_eq!(print(&w), "h*y1*yb1");
}

fn atom() -> impl Strategy<Value = String> {
    prop_oneof![
        (0u32..5).prop_map(|k| k.to_string()),
        (1u32..5, 1u32..5).prop_map(|(p, q)| format!("{p}/{q}")),
        Just("i".to_string()),
        Just("h".to_string()),
        (1usize..=2).prop_map(|k| format!("z{k}")),
        (1usize..=2).prop_map(|k| format!("zb{k}")),
    ]
}

fn expression() -> impl Strategy<Value = String> {
    atom().prop_recursive(3, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} - {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), 0u32..3).prop_map(|(a, k)| format!("({a})^{k}")),
            inner.prop_map(|a| format!("-({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn print_parse_is_normalize(text in expression()) {
        let w = parse(&text, 2).unwrap();
        let printed = print(&w);
        let back = parse(&printed, 2).unwrap();
        prop_assert_eq!(&back, &w);
        prop_assert_eq!(print(&back), printed);
    }
}
