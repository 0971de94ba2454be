use super::*;

const MINIMAL: &str = r#"model "minimal" {
  group U SU(2) coupling 0.65
  group V U(1) coupling 0.35
  fermion psi rep bifundamental charge -1
}
"#;

#[test]
fn minimal_document_round_trips_byte_identically() {
    let doc = parse_model_spec(MINIMAL).unwrap();
    assert_eq!(doc.name, "minimal");
    assert_eq!(doc.groups.len(), 2);
    assert_eq!(doc.fields[0].charge, Some(-1.0));
    assert_eq!(print_document(&doc), MINIMAL);
    let m = doc.to_model().unwrap();
    assert_eq!(m.coupling(Sector::V), 0.35);
    assert!(m.validate().is_empty());
}

#[test]
fn comments_whitespace_and_group_order_are_normalized() {
    let src = "# header\nmodel \"x\"{group V SU(3) coupling 1 # trailing\n group U SU(2) coupling -2\n set tol 1e-9 }";
    let doc = parse_model_spec(src).unwrap();
    assert_eq!(doc.groups[0].sector, Sector::U);
    assert_eq!(doc.option("tol"), Some(1e-9));
    let printed = print_document(&doc);
    assert_eq!(parse_model_spec(&printed).unwrap(), doc);
    assert!(printed.contains("group U SU(2) coupling -2\n  group V SU(3) coupling 1\n"));
}

#[test]
fn su_zero_is_rejected_with_position() {
    let e = parse_model_spec("model \"m\" {\n  group U SU(0) coupling 1\n}").unwrap_err();
    assert!(matches!(e, ParseError::Semantic { .. }));
    assert_eq!(e.position(), (2, 14));
    assert!(e.to_string().contains("`0`"), "{e}");
}

fn err(src: &str) -> ParseError {
    parse_model_spec(src).unwrap_err()
}

#[test]
fn syntax_errors_name_expected_tokens() {
    let e = err("model m {}");
    assert_eq!(e.position(), (1, 7));
    assert!(matches!(&e, ParseError::Syntax { expected, .. } if expected == &vec!["STRING".to_string()]));

    let e = err("model \"m\" {\n group U SU 2 coupling 1 }");
    assert!(matches!(&e, ParseError::Syntax { found, .. } if found == "number `2`"));
    assert_eq!(e.position(), (2, 13));

    let e = err("model \"m\" { group W SU(2) coupling 1 }");
    assert!(e.to_string().contains("one of `U`, `V`"), "{e}");

    let e = err("model \"m\" { group U SU(2) coupling 1 } extra");
    assert!(e.to_string().contains("end of input"));

    let e = err("model \"m\" { wibble }");
    assert!(e.to_string().contains("`group`"));

    let e = err("model \"m\" { group U SU(2) coupling 1");
    assert!(e.to_string().contains("found end of input"));

    let e = err("model \"m\" {\n  group U SU(2) coupling @ }");
    assert_eq!(e.position(), (2, 26));
}

#[test]
fn semantic_errors_are_distinct() {
    let base = "model \"m\" { group U SU(2) coupling 1 group V SU(2) coupling 1 ";
    let cases = [
        ("fermion a rep adjoint }", "unknown rep"),
        ("fermion a rep singlet scalar a rep singlet }", "duplicate field"),
        ("group U SU(3) coupling 1 }", "duplicate group"),
        ("set colour 3 }", "unknown option"),
        ("set points 0 }", "invalid value"),
        ("set seed 1.5 }", "invalid value"),
        ("set v_commutator_sign 2 }", "invalid value"),
        ("set tol 1 set tol 2 }", "set twice"),
    ];
    for (tail, msg) in cases {
        let e = err(&format!("{base}{tail}"));
        assert!(matches!(e, ParseError::Semantic { .. }), "{tail}: {e:?}");
        assert!(e.to_string().contains(msg), "{tail}: {e}");
    }
    let e = err("model \"m\" { group U SU(2) coupling 1 }");
    assert!(e.to_string().contains("missing `group V`"));
    let e = err("model \"m\" { group U U(2) coupling 1 group V SU(2) coupling 1 }");
    assert!(e.to_string().contains("only U(1)"));
    let e = err("model \"m\" { group U SU(2) coupling 0 group V SU(2) coupling 1 }");
    assert!(e.to_string().contains("nonzero"));
}

#[test]
fn rep_group_mismatch_needs_a_charge() {
    let e = err("model \"m\" { group U SU(2) coupling 1 group V U(1) coupling 1 fermion l rep bifundamental }");
    assert!(matches!(e, ParseError::Semantic { .. }));
    assert!(e.to_string().contains("neither the field nor the group"));
    // a group-wide default charge is enough
    let doc = parse_model_spec("model \"m\" { group U SU(2) coupling 1 group V U(1) charge 3 coupling 1 fermion l rep bifundamental }").unwrap();
    assert_eq!(doc.to_model().unwrap().field_charge(Sector::V, &doc.fields[0]).unwrap(), 3.0);
    // charges on fields untouched by any U(1) sector are accepted and ignored
    let doc = parse_model_spec("model \"m\" { group U SU(2) coupling 1 group V SU(2) coupling 1 fermion l rep bifundamental charge 0.5 }").unwrap();
    assert!(doc.to_model().unwrap().validate().is_empty());
}

#[test]
fn options_apply_on_top_of_defaults() {
    let doc = parse_model_spec(
        "model \"m\" { group U SU(2) coupling 1 group V SU(2) coupling 1 set seed 7 set points 9 set modes 1 set amplitude 0.25 set tol 1e-7 set v_commutator_sign 1 }",
    )
    .unwrap();
    let o = doc.apply_options(&VerifyOptions::default());
    assert_eq!((o.seed, o.points, o.modes, o.amplitude, o.tol), (7, 9, 1, 0.25, 1e-7));
    assert_eq!(doc.to_model().unwrap().v_commutator_sign(), 1.0);
}

#[test]
fn string_escapes_round_trip() {
    let doc = parse_model_spec(r#"model "a \"quoted\" \\ name" { group U SU(2) coupling 1 group V SU(2) coupling 1 }"#).unwrap();
    assert_eq!(doc.name, "a \"quoted\" \\ name");
    assert_eq!(parse_model_spec(&print_document(&doc)).unwrap(), doc);
}
